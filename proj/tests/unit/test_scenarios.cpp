#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dyalab/errors.hpp"
#include "dyalab/scenario.hpp"

using namespace dyalab;

namespace {

ScenarioConfig small(const std::string& name, std::size_t dim = 1) {
  ScenarioConfig c;
  c.name = name;
  c.dimension = dim;
  c.lambdas = {std::vector<mpq_class>(dim, mpq_class(3, 4))};
  c.resolution = dim == 1 ? 4 : 3;
  c.depth = dim == 1 ? 3 : 2;
  c.terms = 3;
  c.corpus_size = 3;
  c.restarts = 2;
  c.iters = 100;
  c.n_values = {1, 2};
  c.spacing = 4;
  c.depths = {10, 20};
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("empty table gives a header-only CSV") {
  Table t{"x", {"a", "b,c"}, {}};
  CHECK(to_csv(t) == "a,\"b,c\"\n");
}

TEST_CASE("chanillo columns and JSON schema") {
  const ReportRecord r = run(small("chanillo-1d"));
  CHECK(r.rows.columns == std::vector<std::string>{"symbol_id", "bmo", "opnorm_lb", "ratio", "witness_ref"});
  CHECK(r.rows.rows.size() == 3);
  const auto j = to_json(r);
  for (const char* key : {"scenario", "params", "rows", "brackets", "flags", "seed"}) CHECK(j.contains(key));
  CHECK_FALSE(j["params"].contains("output_dir"));
  CHECK(j["rows"].size() == 3);
  CHECK(j["tables"].contains("chain"));
  CHECK(r.brackets.at("ratio_min") > 0);
}

TEST_CASE("every scenario runs at small size") {
  for (const auto& [name, dim] : std::vector<std::pair<std::string, std::size_t>>{
           {"verify-decomposition", 1}, {"verify-decomposition", 2}, {"firstlower", 1}, {"eta-lower", 1},
           {"dk-bound", 1}, {"para-bmo-equivalence", 1}, {"para-bmo-equivalence", 2}, {"atom-duality", 2},
           {"multi-upper", 2}, {"rect-lower", 2}, {"separated-rectangles", 2}, {"riesz-indicator-diagnostic", 1},
           {"oracle", 1}}) {
    CAPTURE(name);
    ScenarioConfig c = small(name, dim);
    if (name == "eta-lower") {
      c.depth = 4;
      c.eta = 0.6;
    }
    const ReportRecord r = run(c);
    CHECK(r.status == 0);
    CHECK_FALSE(r.rows.rows.empty());
    for (const auto& row : r.rows.rows) CHECK(row.size() == r.rows.columns.size());
  }
}

TEST_CASE("separated rectangles baseline and plot") {
  const ReportRecord r = run(small("separated-rectangles", 2));
  CHECK(r.rows.rows.front()[4].get<double>() == 1.0);
  REQUIRE(r.plot.has_value());
  const std::string svg = to_svg(r);
  CHECK(svg.find("slope") != std::string::npos);
  CHECK(svg.find("<line") != std::string::npos);
}

TEST_CASE("wrong dimension is a config error") {
  CHECK_THROWS_AS(run(small("chanillo-1d", 2)), ConfigError);
  CHECK_THROWS_AS(run(small("atom-duality", 1)), ConfigError);
}

TEST_CASE("emit is deterministic") {
  const auto dir = std::filesystem::temp_directory_path() / "dyalab_emit_test";
  std::filesystem::remove_all(dir);
  const ScenarioConfig c = small("dk-bound");
  const auto first = emit(run(c), (dir / "a").string(), {"csv", "json", "svg"});
  const auto second = emit(run(c), (dir / "b").string(), {"csv", "json"});
  REQUIRE(first.size() == 3);
  REQUIRE(second.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) CHECK(slurp(first[i]) == slurp(second[i]));
  CHECK_THROWS(emit(run(c), (dir / "c").string(), {"xml"}));
  std::filesystem::remove_all(dir);
}
