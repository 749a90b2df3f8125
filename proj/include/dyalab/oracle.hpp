#ifndef DYALAB_ORACLE_HPP_
#define DYALAB_ORACLE_HPP_

#include <string>
#include <vector>

#include "dyalab/grid.hpp"
#include "dyalab/scale_param.hpp"

namespace dyalab {

/// Brute-force reference sums. Nothing here calls into the closed forms of the
/// operators module; the only shared pieces are atoms sampled onto grids.

// Riesz series truncated to scales s_min..s_max.
struct TruncationSpec {
  int s_min = -40;
  int s_max = 40;
};

struct OracleResult {
  GridFunction value;
  double tail_bound = 0;  // sup-norm bound on the omitted scales
};

// sum_I <f, 1_I> |I|^{-alpha} 1_I in coordinate `coord`, over s_min <= scale(I) <= s_max.
// tail_bound = ||f||_inf lambda^{1-s_min}/(1-lambda) + |int f| mu^{s_max+1}/(1-mu),
// where the integral is taken along `coord` and maximized over the other coordinates.
OracleResult riesz_oracle(const GridFunction& f, const ScaleParam& scale, const TruncationSpec& trunc,
                          std::size_t coord = 0);

// Sup-norm bound on what the window discards from I applied to a unit-mass
// function supported in the window: |I| sum_{s > s_W} mu^s.
double exterior_tail_bound(const ScaleParam& scale, int window_scale);

enum class ParaKind { B, C, D, E };

struct ParaOracleSpec {
  ParaKind kind = ParaKind::B;
  int k = 0;                 // shift for D
  std::vector<bool> in_b;    // E: coordinates carrying B
  std::vector<int> shift;    // E: shifts of the D coordinates
};

// Literal sum over the Haar support of b of b_R <f, w_R> v_R, with the
// per-coordinate pair (w, v) given by the kind:
//   B   w = |R|^{-1} 1_R          v = h_R
//   C   w = h_R                   v = |R|^{-1/2} h_R            (d = 1)
//   D   w = h_{R_k}               v = h_R h_{R_k}               (d = 1)
//   E   B or D_{shift[j]} in each coordinate.
GridFunction para_oracle(const ParaOracleSpec& spec, const HaarCoefficients& b, const GridFunction& f);

struct ConvergenceRow {
  int depth = 0;
  double error = 0;       // sup over cells |oracle - closed form|
  double tail_bound = 0;
  double ratio = 0;       // per-level geometric ratio against the previous row, 0 on the first
};

// Riesz oracle at s_min = cell scale - depth, s_max = window scale + depth,
// compared to the closed form sampled on the same grid.
std::vector<ConvergenceRow> convergence_study(const GridFunction& f, const GridFunction& closed,
                                              const ScaleParam& scale, const std::vector<int>& depths,
                                              std::size_t coord = 0);

}  // namespace dyalab

#endif  // DYALAB_ORACLE_HPP_
