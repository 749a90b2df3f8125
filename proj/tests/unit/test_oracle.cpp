#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dyalab/operators.hpp"
#include "dyalab/oracle.hpp"
#include "dyalab/random.hpp"

using namespace dyalab;
using F = DyadicFunction;

namespace {

mpq_class q(long n, long d = 1) { return mpq_class(n, d); }
Interval iv(int s, std::int64_t p) { return {s, p}; }
const Rectangle kUnit1{{iv(0, 0)}};
const Rectangle kUnit2{{iv(0, 0), iv(0, 0)}};
const ScaleParam kLam(q(3, 4));

double sup_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs((a[i] - b[i]).to_double()));
  return m;
}

HaarCoefficients coeffs(const F& b) { return haar_coefficients(b); }

}  // namespace

TEST_CASE("riesz oracle on a Haar function") {
  const GridFunction f = to_grid(F::haar(kUnit1), kUnit1, {-3});
  const OracleResult o = riesz_oracle(f, kLam, {-83, 80});
  CHECK(o.tail_bound <= 1e-9);
  CHECK(sup_diff(o.value, to_grid(Scalar(3) * F::haar(kUnit1), kUnit1, {-3})) <= o.tail_bound);
}

TEST_CASE("riesz oracle on an indicator") {
  const GridFunction f = to_grid(F::indicator(kUnit1), kUnit1, {-2});
  const OracleResult o = riesz_oracle(f, kLam, {-82, 80});
  // The cell containing 1/4 carries the on-interval value 6.
  CHECK(std::abs(o.value[1].to_double() - 6.0) <= o.tail_bound + 1e-15);
  const OracleResult zero = riesz_oracle(GridFunction(kUnit1, {-2}), kLam, {-10, 10});
  CHECK(zero.tail_bound == 0.0);
  for (const auto& c : zero.value.cells()) CHECK(c.is_zero());
}

TEST_CASE("riesz oracle agrees with the closed form") {
  Pcg32 rng(31);
  const ScaleParam lams[] = {ScaleParam(q(5, 8)), kLam, ScaleParam(q(7, 8))};
  for (int t = 0; t < 12; ++t) {
    const ScaleParam& s = lams[t % 3];
    const F f = random_test_function(rng, {1, kUnit1, 3, 4}, false);
    const GridFunction g = to_grid(f, kUnit1, {-4});
    const GridFunction closed = to_grid(riesz_apply(s, f), kUnit1, {-4});
    const OracleResult shallow = riesz_oracle(g, s, {-24, 20});
    const OracleResult deep = riesz_oracle(g, s, {-44, 40});
    // The bound is attained when f is constant near its sup, so allow rounding.
    CHECK(sup_diff(shallow.value, closed) <= shallow.tail_bound * (1 + 1e-12));
    // Doubling the depth moves the output by less than the earlier bound.
    CHECK(sup_diff(shallow.value, deep.value) <= shallow.tail_bound * (1 + 1e-12));
  }
  // Two coordinates, acting in the second.
  const F f2 = random_test_function(rng, {2, kUnit2, 2, 3}, false);
  const GridFunction g2 = to_grid(f2, kUnit2, {-3, -3});
  const OracleResult o2 = riesz_oracle(g2, kLam, {-60, 60}, 1);
  CHECK(sup_diff(o2.value, to_grid(riesz_apply(kLam, f2, 1), kUnit2, {-3, -3})) <= o2.tail_bound);
}

TEST_CASE("para oracle") {
  const GridFunction one = to_grid(F::indicator(kUnit1), kUnit1, {-2});
  const GridFunction h = to_grid(F::haar(kUnit1), kUnit1, {-2});
  CHECK(para_oracle({ParaKind::B}, coeffs(F::haar(kUnit1)), one) == h);
  CHECK(para_oracle({ParaKind::D, 0}, coeffs(F::haar(kUnit1)), h) == one);
  const GridFunction h_half = to_grid(F::haar(iv(-1, 0)), kUnit1, {-2});
  const GridFunction c0 = para_oracle({ParaKind::C}, coeffs(F::haar(kUnit1)), h_half);
  for (const auto& c : c0.cells()) CHECK(c.is_zero());

  Pcg32 rng(37);
  for (int t = 0; t < 15; ++t) {
    const F b = random_haar_symbol(rng, {1, kUnit1, 3, 4});
    const F f = random_test_function(rng, {1, kUnit1, 3, 4}, false);
    const GridFunction g = to_grid(f, kUnit1, {-4});
    CHECK(para_oracle({ParaKind::B}, coeffs(b), g) == to_grid(para_B(b, f), kUnit1, {-4}));
    CHECK(para_oracle({ParaKind::C}, coeffs(b), g) == to_grid(para_C(b, f), kUnit1, {-4}));
    for (int k = 0; k <= 2; ++k) {
      CHECK(para_oracle({ParaKind::D, k}, coeffs(b), g) == to_grid(para_D(k, b, f), kUnit1, {-4}));
    }
  }
  for (int t = 0; t < 8; ++t) {
    const F b = random_haar_symbol(rng, {2, kUnit2, 2, 3});
    const F f = random_test_function(rng, {2, kUnit2, 2, 3}, false);
    const GridFunction g = to_grid(f, kUnit2, {-3, -3});
    CHECK(para_oracle({ParaKind::B}, coeffs(b), g) == to_grid(para_B(b, f), kUnit2, {-3, -3}));
    const TensorParaSpec e{{true, false}, {0, 1}};
    CHECK(para_oracle({ParaKind::E, 0, e.in_b, e.shift}, coeffs(b), g) == to_grid(para_E(e, b, f), kUnit2, {-3, -3}));
  }
}

TEST_CASE("convergence study") {
  const GridFunction f = to_grid(F::haar(kUnit1), kUnit1, {-3});
  const GridFunction closed = to_grid(riesz_apply(kLam, F::haar(kUnit1)), kUnit1, {-3});
  const auto rows = convergence_study(f, closed, kLam, {10, 20, 30, 40, 50, 60});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(rows[i].ratio - 0.75) <= 0.075);
  for (const auto& r : rows) CHECK(r.error <= r.tail_bound);

  const ScaleParam slow(q(7, 8));
  const GridFunction ind = to_grid(F::indicator(kUnit1), kUnit1, {-3});
  const auto slow_rows = convergence_study(ind, to_grid(riesz_apply(slow, F::indicator(kUnit1)), kUnit1, {-3}), slow,
                                           {20, 40, 60, 80});
  CHECK(std::abs(slow_rows.back().ratio - 0.875) <= 0.0875);

  // A paraproduct is a finite sum: the oracle is exact.
  const F b = F::haar(iv(-1, 0)) + F::haar(kUnit1);
  const GridFunction g = to_grid(F::indicator(iv(-2, 1)), kUnit1, {-3});
  CHECK(sup_diff(para_oracle({ParaKind::B}, coeffs(b), g), to_grid(para_B(b, F::indicator(iv(-2, 1))), kUnit1, {-3})) == 0.0);
}
