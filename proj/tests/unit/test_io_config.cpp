#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dyalab/errors.hpp"
#include "dyalab/io.hpp"
#include "dyalab/random.hpp"
#include "dyalab/scenario.hpp"

using namespace dyalab;
using F = DyadicFunction;

namespace {

const Rectangle kUnit1{{Interval{0, 0}}};
const Rectangle kUnit2{{Interval{0, 0}, Interval{0, 0}}};

}  // namespace

TEST_CASE("function JSON round trip") {
  Pcg32 rng(41);
  for (int t = 0; t < 20; ++t) {
    const F f = random_test_function(rng, {1, kUnit1, 4, 5}, true) * Scalar::sqrt2_pow(-1 - t % 3);
    CHECK(function_from_json(function_to_json(f)) == f);
    const F g = random_test_function(rng, {2, kUnit2, 2, 4}, false) * Scalar(mpq_class(-3, 7), mpq_class(2, 5));
    CHECK(function_from_json(function_to_json(g)) == g);
  }
}

TEST_CASE("function JSON eps factors") {
  const auto j = nlohmann::json::parse(R"([{"coeff": "3/2", "factors": [{"eps": 0, "scale": -1, "pos": 1}]},
                                           {"coeff": 2, "factors": [{"eps": 1, "scale": 0, "pos": 0}]}])");
  const F expected = Scalar(mpq_class(3, 2)) * F::haar(Interval{-1, 1}) + Scalar(2) * F::indicator(kUnit1);
  CHECK(function_from_json(j) == expected);
  CHECK_THROWS_AS(function_from_json(nlohmann::json::parse(R"([{"coeff": "1", "factors": [{"eps": 2, "scale": 0, "pos": 0}]}])")),
                  DomainError);
  CHECK_THROWS_AS(function_from_json(nlohmann::json::parse(R"([{"coeff": "1", "factors": [{"kind": "bump", "scale": 0, "pos": 0}]}])")),
                  DomainError);
}

TEST_CASE("config parse and round trip") {
  const ScenarioConfig c = parse_config(R"(# comment
[scenario]
name = multi-upper
dimension = 2
lambda = 5/8,5/8;3/4,7/8   # two sets
p = 2
q = auto
resolution = 4
seed = 99
n_values = 1,3
strict_convergence = true
)");
  CHECK(c.name == "multi-upper");
  CHECK(c.dimension == 2);
  REQUIRE(c.lambdas.size() == 2);
  CHECK(c.lambdas[1][1] == mpq_class(7, 8));
  CHECK_FALSE(c.q.has_value());
  CHECK(c.seed == 99);
  CHECK(c.strict_convergence);
  CHECK(parse_config(serialize_config(c)) == c);

  ScenarioConfig d;
  d.name = "chanillo-1d";
  d.q = 1 / (0.5 - 1 + ScaleParam(mpq_class(3, 4)).alpha());
  d.p = 2;
  d.eta = 0.1 + 0.2;
  CHECK(parse_config(serialize_config(d)) == d);
  CHECK(serialize_config(parse_config(serialize_config(d))) == serialize_config(d));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("name = firstlower\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nname = nope\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nname = firstlower\nname = firstlower\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nname = firstlower\ncolour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nname = firstlower\nlambda = 1/2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nname = firstlower\nlambda = 3/4x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nname = firstlower\ndimension = 2\nlambda = 3/4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nname = firstlower\np = 2\nq = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nname = firstlower\nresolution = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\n[scenario]\nname = firstlower\n"), ConfigError);
  // The relation is only enforced for commutator scenarios.
  CHECK_NOTHROW(parse_config("[scenario]\nname = dk-bound\np = 2\nq = 3\n"));
}

TEST_CASE("scalar text with signed surd parts") {
  CHECK(parse_scalar("1/2 + -3/4*sqrt2") == Scalar(mpq_class(1, 2), mpq_class(-3, 4)));
  CHECK(parse_scalar("1/2 - -3/4*sqrt2") == Scalar(mpq_class(1, 2), mpq_class(3, 4)));
  CHECK(parse_scalar("-1/2 - 3/4*sqrt2") == Scalar(mpq_class(-1, 2), mpq_class(-3, 4)));
  const Scalar x(mpq_class(-5, 3), mpq_class(-7, 2));
  CHECK(parse_scalar(x.str()) == x);
}
