#ifndef DYALAB_NORMEST_HPP_
#define DYALAB_NORMEST_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dyalab/grid.hpp"
#include "dyalab/operators.hpp"

namespace dyalab {

/// Exact matrix of an operator restricted to a window grid. Column i is the
/// sampled image of the indicator of cell i; output outside the window is dropped.
struct TruncatedOperator {
  OperatorSpec spec;
  Rectangle window;
  std::vector<int> cell_scale;
  std::size_t n = 0;                 // cells; the matrix is n x n
  std::vector<Scalar> exact;         // row-major
  std::vector<double> matrix;        // row-major doubles of `exact`
  mpq_class cell_volume;
  double exterior_bound = 0;         // sup bound on dropped output per unit input mass

  double at(std::size_t row, std::size_t col) const { return matrix[row * n + col]; }
};

TruncatedOperator assemble(const OperatorSpec& spec, const Rectangle& window, const std::vector<int>& cell_scale);

// Scales every entry, exact and double alike.
TruncatedOperator scaled(const TruncatedOperator& t, const Scalar& c);

struct NormEstimate {
  double value = 0;
  GridFunction witness;  // ||witness||_p = 1 up to rounding
  double p = 2;
  double q = 2;
  int iterations = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
  bool converged = false;
};

// ||T x||_q / ||x||_p on the window grid, with cell-volume weights.
double norm_ratio(const TruncatedOperator& t, const std::vector<double>& x, double p, double q);

// Power iteration on T^T T, relative tolerance 1e-10, at most 10^4 iterations.
NormEstimate opnorm_22(const TruncatedOperator& t, std::uint64_t seed = 1);

struct AscentParams {
  int restarts = 8;
  int iters = 500;
  std::uint64_t seed = 1;
  double tol = 1e-12;
};

// Duality-map ascent x <- Phi_p(T^T Psi_q(T x)). Restart i draws its start from
// stream i of the seed, so more restarts never lower the result.
NormEstimate opnorm_pq(const TruncatedOperator& t, double p, double q, const AscentParams& params = {});

// Throws ScalingRelationViolated unless 1 - sum alpha_j + 1/q = 1/p within 1e-12.
void check_scaling(const std::vector<ScaleParam>& scales, double p, double q);
// The q solving the scaling relation for p.
double scaling_q(const std::vector<ScaleParam>& scales, double p);

struct RatioRow {
  std::size_t symbol_id = 0;
  double opnorm = 0;
  double denom = 0;
  double ratio = 0;
  NormEstimate estimate;
};

struct RatioTable {
  std::vector<RatioRow> rows;
  double min_ratio = 0;
  double max_ratio = 0;
};

struct RatioSetup {
  std::function<OperatorSpec(const DyadicFunction&)> op;
  std::function<double(const DyadicFunction&)> denom;
  Rectangle window;
  std::vector<int> cell_scale;
  double p = 2;
  double q = 2;
  std::vector<ScaleParam> scales;  // checked against the scaling relation when nonempty
  AscentParams ascent;
};

RatioTable ratio_experiment(const std::vector<DyadicFunction>& symbols, const RatioSetup& setup);

}  // namespace dyalab

#endif  // DYALAB_NORMEST_HPP_
