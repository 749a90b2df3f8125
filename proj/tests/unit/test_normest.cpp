#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dyalab/errors.hpp"
#include "dyalab/normest.hpp"
#include "dyalab/norms.hpp"
#include "dyalab/oracle.hpp"
#include "dyalab/random.hpp"

using namespace dyalab;
using F = DyadicFunction;

namespace {

mpq_class q(long n, long d = 1) { return mpq_class(n, d); }
Interval iv(int s, std::int64_t p) { return {s, p}; }
const Rectangle kUnit1{{iv(0, 0)}};
const ScaleParam kLam(q(3, 4));

// Diagonal operator with the given entries, one per cell of a window at the given cell scale.
TruncatedOperator diagonal(const std::vector<double>& d) {
  TruncatedOperator t;
  t.window = kUnit1;
  t.n = d.size();
  t.cell_scale = {-static_cast<int>(std::log2(static_cast<double>(d.size())))};
  t.cell_volume = pow2(t.cell_scale[0]);
  t.matrix.assign(t.n * t.n, 0.0);
  for (std::size_t i = 0; i < t.n; ++i) t.matrix[i * t.n + i] = d[i];
  return t;
}

TruncatedOperator random_matrix(Pcg32& rng, std::size_t n) {
  TruncatedOperator t = diagonal(std::vector<double>(n, 0.0));
  for (auto& e : t.matrix) e = 2 * rng.uniform() - 1;
  return t;
}

}  // namespace

TEST_CASE("assemble") {
  const TruncatedOperator id = assemble(OperatorSpec::multiply(F::indicator(kUnit1)), kUnit1, {-2});
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) CHECK(id.exact[r * 4 + c] == Scalar(r == c ? 1 : 0));
  }
  const TruncatedOperator riesz = assemble(OperatorSpec::riesz(kLam), kUnit1, {-1});
  // Columns against the brute-force sum of the defining series.
  for (std::size_t c = 0; c < 2; ++c) {
    GridFunction cell(kUnit1, {-1});
    cell[c] = Scalar(1);
    const OracleResult o = riesz_oracle(cell, kLam, {-90, 90});
    for (std::size_t r = 0; r < 2; ++r) CHECK(std::abs(riesz.at(r, c) - o.value[r].to_double()) <= o.tail_bound + 1e-14);
  }
  CHECK(riesz.exact[0] == Scalar(q(9, 2)));
  CHECK(riesz.exact[1] == Scalar(q(3, 2)));
  CHECK(riesz.exact[1] == riesz.exact[2]);
  CHECK(riesz.exterior_bound > 0);
  const TruncatedOperator again = assemble(OperatorSpec::riesz(kLam), kUnit1, {-1});
  CHECK(again.exact == riesz.exact);
  const TruncatedOperator zero = assemble(OperatorSpec::commutator(F(1), {kLam}), kUnit1, {-2});
  for (const auto& e : zero.exact) CHECK(e.is_zero());
}

TEST_CASE("opnorm_22") {
  CHECK(std::abs(opnorm_22(diagonal({3, 1})).value - 3) < 1e-9);
  CHECK(std::abs(opnorm_22(diagonal({1, 1, 1, 1})).value - 1) < 1e-12);
  const TruncatedOperator riesz = assemble(OperatorSpec::riesz(kLam), kUnit1, {-1});
  const NormEstimate est = opnorm_22(riesz);
  CHECK(est.converged);
  // Brute-force probe over random directions.
  Pcg32 rng(41);
  double probe = 0;
  for (int i = 0; i < 100000; ++i) {
    const std::vector<double> x{2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
    probe = std::max(probe, norm_ratio(riesz, x, 2, 2));
  }
  CHECK(std::abs(est.value - probe) < 1e-6);
  CHECK(est.value >= probe - 1e-12);
  CHECK(std::abs(est.value - 6.0) < 1e-9);
  CHECK(opnorm_22(assemble(OperatorSpec::commutator(F(1), {kLam}), kUnit1, {-2})).value == 0.0);
}

TEST_CASE("opnorm_pq") {
  for (double p : {1.5, 2.0, 3.0}) {
    const NormEstimate e = opnorm_pq(diagonal({3, 1}), p, p);
    CHECK(std::abs(e.value - 3) < 1e-9);
    CHECK(std::abs(e.witness[1].to_double()) < 1e-3 * std::abs(e.witness[0].to_double()));
  }
  Pcg32 rng(43);
  for (int t = 0; t < 10; ++t) {
    const TruncatedOperator m = random_matrix(rng, 8);
    CHECK(std::abs(opnorm_pq(m, 2, 2, {.iters = 20000}).value - opnorm_22(m).value) < 1e-8);
  }
  const TruncatedOperator m = random_matrix(rng, 8);
  // Determinism, monotonicity in restarts and soundness of the witness.
  const NormEstimate a = opnorm_pq(m, 3, 1.5, {.restarts = 4});
  const NormEstimate b = opnorm_pq(m, 3, 1.5, {.restarts = 4});
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
  double prev = 0;
  for (int r = 1; r <= 6; ++r) {
    const double v = opnorm_pq(m, 3, 1.5, {.restarts = r}).value;
    CHECK(v >= prev);
    prev = v;
  }
  std::vector<double> w;
  for (const auto& c : a.witness.cells()) w.push_back(c.to_double());
  CHECK(std::abs(norm_ratio(m, w, 3, 1.5) - a.value) < 1e-12 * a.value);
  // Homogeneity.
  const TruncatedOperator riesz = assemble(OperatorSpec::riesz(kLam), kUnit1, {-3});
  const NormEstimate e1 = opnorm_pq(riesz, 2, 4);
  const NormEstimate e2 = opnorm_pq(scaled(riesz, Scalar(2)), 2, 4);
  CHECK(e2.value == 2 * e1.value);
  CHECK(e2.witness == e1.witness);
  const NormEstimate e3 = opnorm_pq(scaled(riesz, Scalar(q(-1, 3))), 2, 4);
  CHECK(std::abs(e3.value - e1.value / 3) < 1e-12);
  CHECK(opnorm_pq(assemble(OperatorSpec::commutator(F(1), {kLam}), kUnit1, {-2}), 2, 3).value == 0.0);
}

TEST_CASE("scaling relation and ratio experiment") {
  const double q4 = scaling_q({kLam}, 2);
  CHECK_NOTHROW(check_scaling({kLam}, 2, q4));
  CHECK_THROWS_AS(check_scaling({kLam}, 2, 2), ScalingRelationViolated);

  RatioSetup setup;
  setup.op = [](const F& b) { return OperatorSpec::commutator(b, {kLam}); };
  setup.denom = [](const F& b) { return bmo_dyadic(b).value; };
  setup.window = kUnit1;
  setup.cell_scale = {-3};
  setup.p = 2;
  setup.q = q4;
  setup.scales = {kLam};
  const RatioTable one = ratio_experiment({F::haar(kUnit1)}, setup);
  CHECK(one.rows.size() == 1);
  CHECK(one.rows[0].denom == 1.0);
  CHECK(one.rows[0].ratio == one.rows[0].opnorm);
  CHECK_THROWS_AS(ratio_experiment({}, setup), DomainError);
  setup.q = 3;
  CHECK_THROWS_AS(ratio_experiment({F::haar(kUnit1)}, setup), ScalingRelationViolated);
}
