#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dyalab/errors.hpp"
#include "dyalab/grid.hpp"
#include "dyalab/io.hpp"
#include "dyalab/norms.hpp"
#include "dyalab/scenario.hpp"

namespace {

using nlohmann::json;
using namespace dyalab;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kConfig = 2;

struct Common {
  std::string config;
  std::string output_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  std::string format = "csv,json";
};

struct NormArgs {
  std::string kind = "bmo";
  std::string input;
  double p = 2;
  int window = 0;
  int resolution = 6;
  std::string b_set;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "scenario config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--output-dir", c.output_dir, "directory for reports (overrides output_dir)");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&c](const std::uint64_t& s) { c.seed = s; c.seed_set = true; }, "override the config seed");
  cmd->add_option("--threads", c.threads, "worker threads (cases run sequentially)")->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "comma-separated subset of csv,json,svg");
}

int run_scenario(const Common& c, const std::string& forced) {
  ScenarioConfig cfg = load_config(c.config);
  if (!forced.empty()) cfg.name = forced;
  if (c.seed_set) cfg.seed = c.seed;
  if (!c.output_dir.empty()) cfg.output_dir = c.output_dir;
  const ReportRecord r = run(cfg);
  for (const auto& p : emit(r, cfg.output_dir, split(c.format, ','))) std::printf("wrote %s\n", p.c_str());
  for (const auto& [k, v] : r.brackets) std::printf("%s = %.12g\n", k.c_str(), v);
  for (const auto& f : r.flags) std::printf("flag: %s\n", f.c_str());
  std::printf("status %d\n", r.status);
  return r.status;
}

json witness_json(const std::vector<Rectangle>& w) {
  json out = json::array();
  for (const auto& r : w) out.push_back(r.str());
  return out;
}

int run_norm(const NormArgs& a) {
  const DyadicFunction f = function_from_json(read_json_file(a.input));
  Rectangle window;
  for (std::size_t j = 0; j < f.dim(); ++j) window.sides.push_back({a.window, 0});
  json out{{"kind", a.kind}};
  if (a.kind == "lp") {
    out["p"] = a.p;
    out["value"] = lp_norm_adaptive(f, window, a.p);
  } else if (a.kind == "sq") {
    out["p"] = a.p;
    out["value"] = square_function(to_grid(f, window, uniform_cells(f.dim(), a.resolution - a.window)), a.p);
  } else {
    NormReport rep;
    if (a.kind == "bmo") {
      if (f.dim() != 1) throw DomainError("bmo: one-dimensional input required; use bmo-prod");
      rep = bmo_dyadic(f);
    } else if (a.kind == "bmo-rec") {
      rep = bmo_rect(f);
    } else if (a.kind == "bmo-prod") {
      rep = bmo_product(f);
    } else if (a.kind == "bmo-B") {
      std::vector<bool> in_b(f.dim(), false);
      for (const auto& s : split(a.b_set, ',')) {
        const std::size_t j = std::stoul(s);
        if (j >= f.dim()) throw DomainError("bmo-B: coordinate " + s + " out of range");
        in_b[j] = true;
      }
      rep = bmo_restricted(f, in_b);
    } else {
      rep = sup_haar_ratio(f);
    }
    out["value"] = rep.value;
    if (!rep.squared.is_zero()) out["squared"] = rep.squared.str();
    out["witness"] = witness_json(rep.witness);
    out["method"] = rep.method;
  }
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyalab: dyadic commutator and paraproduct experiments"};
  app.require_subcommand(1);

  Common verify_args, estimate_args, experiment_args, oracle_args;
  auto* verify = app.add_subcommand("verify", "exact decomposition identity suite");
  add_common(verify, verify_args);
  auto* estimate = app.add_subcommand("estimate", "norm estimate of one operator");
  add_common(estimate, estimate_args);
  auto* experiment = app.add_subcommand("experiment", "run the scenario named in the config");
  add_common(experiment, experiment_args);
  auto* oracle = app.add_subcommand("oracle", "oracle convergence study");
  add_common(oracle, oracle_args);

  NormArgs norm_args;
  auto* norm = app.add_subcommand("norm", "norm of a function given as JSON");
  norm->add_option("--kind", norm_args.kind, "lp|bmo|bmo-rec|bmo-prod|bmo-B|sq|haar-ratio")
      ->check(CLI::IsMember({"lp", "bmo", "bmo-rec", "bmo-prod", "bmo-B", "sq", "haar-ratio"}));
  norm->add_option("--input", norm_args.input, "function JSON")->required()->check(CLI::ExistingFile);
  norm->add_option("--p", norm_args.p, "exponent for lp and sq");
  norm->add_option("--window", norm_args.window, "window [0, 2^w)^d for lp and sq");
  norm->add_option("--resolution", norm_args.resolution, "grid levels below the window for sq");
  norm->add_option("--b-set", norm_args.b_set, "coordinates left free for bmo-B, e.g. 0 or 0,1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) return run_scenario(verify_args, "verify-decomposition");
    if (*estimate) return run_scenario(estimate_args, "estimate");
    if (*experiment) return run_scenario(experiment_args, "");
    if (*oracle) return run_scenario(oracle_args, "oracle");
    return run_norm(norm_args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const ScalingRelationViolated& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
}
