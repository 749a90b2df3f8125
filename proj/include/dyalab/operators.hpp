#ifndef DYALAB_OPERATORS_HPP_
#define DYALAB_OPERATORS_HPP_

#include <string>
#include <vector>

#include "dyalab/function.hpp"
#include "dyalab/scale_param.hpp"

namespace dyalab {

// I_alpha f = sum_I <f, 1_I> |I|^{-alpha} 1_I over the full grid, in one coordinate.
DyadicFunction riesz_apply(const ScaleParam& scale, const DyadicFunction& f, std::size_t coord = 0);

// B(b, f) = sum_R <b, h_R> |R|^{-1} <f, 1_R> h_R. The symbol must be a finite Haar sum.
DyadicFunction para_B(const DyadicFunction& b, const DyadicFunction& f);
// Adjoint in f: B*(b, g) = sum_R <b, h_R> |R|^{-1} <g, h_R> 1_R.
DyadicFunction para_B_adjoint(const DyadicFunction& b, const DyadicFunction& g);

// C(f1, f2) = sum_I |I|^{-1/2} <f1, h_I> <f2, h_I> h_I, one dimension only.
DyadicFunction para_C(const DyadicFunction& f1, const DyadicFunction& f2);

// P_n f = sum_{|I| = 2^n} <f, h_I> h_I in one coordinate.
DyadicFunction projection(int n, const DyadicFunction& f, std::size_t coord = 0);

// D_k(b, f) = sum_I <b, h_I> <f, h_{I_k}> h_I h_{I_k}, pairings taken in `coord`
// and pointwise products in the remaining coordinates.
DyadicFunction para_D(int k, const DyadicFunction& b, const DyadicFunction& f, std::size_t coord = 0);
// The same operator as sum_n (P_n b)(P_{n+k} f).
DyadicFunction para_D_by_projections(int k, const DyadicFunction& b, const DyadicFunction& f,
                                     std::size_t coord = 0);

/// Coordinates in `in_b` carry the paraproduct B; the others carry D_{shift[j]}.
struct TensorParaSpec {
  std::vector<bool> in_b;
  std::vector<int> shift;

  std::size_t dim() const { return in_b.size(); }
  int total_shift() const;
  std::string str() const;
};

// E(b, f) = sum_R <b, h_R> (tensor over j of the one-coordinate B or D_{v(j)} kernel on R_j).
DyadicFunction para_E(const TensorParaSpec& spec, const DyadicFunction& b, const DyadicFunction& f);

// Iterated commutator [...[M_b, I_1], ..., I_d] f.
DyadicFunction commutator_direct(const DyadicFunction& b, const std::vector<ScaleParam>& scales,
                                 const DyadicFunction& f);

/// One family of the commutator expansion. Each coordinate carries one of the
/// per-coordinate pieces below, and the family is the tensor of the pieces
/// summed against the Haar coefficients of b.
///
///   B      +1        |R|^{-1} <I f, 1_R> h_R
///   D0.I   +1        <I f, h_R> |R|^{-1} 1_R
///   I.D0   -1        I(<f, h_R> |R|^{-1} 1_R)
///   Dk.I   -lambda^k <I f, h_{R_k}> h_{R_k}(R) h_R        (1 <= k <= K)
///   Dtail  -c        |R|^{1-alpha} <f>_{R_K} h_R           (all k > K resummed)
enum class PieceKind { B, D0AfterRiesz, RieszAfterD0, DkAfterRiesz, DTail };

struct Piece {
  PieceKind kind = PieceKind::B;
  int k = 0;  // shift for DkAfterRiesz, cutoff K for DTail

  std::string str() const;
  friend auto operator<=>(const Piece&, const Piece&) = default;
};

struct DecompositionFamily {
  std::vector<Piece> pieces;
  Scalar coefficient;
  DyadicFunction value;

  std::string label() const;
};

struct DecompositionReport {
  std::vector<DecompositionFamily> families;
  std::vector<int> cutoff;  // K_j per coordinate
  DyadicFunction direct;
  DyadicFunction residual;

  bool exact() const { return vanishes(residual); }
};

DecompositionReport commutator_decomposed(const DyadicFunction& b, const std::vector<ScaleParam>& scales,
                                          const DyadicFunction& f);

/// Uniform description of every operator above as a linear map of f.
struct OperatorSpec {
  enum class Kind { Riesz, Multiply, ParaB, ParaBAdjoint, ParaC, ParaD, ParaE, Commutator, Compose };

  Kind kind = Kind::Multiply;
  std::vector<ScaleParam> scales;
  std::size_t coord = 0;
  int k = 0;
  DyadicFunction symbol;
  TensorParaSpec blocks;
  std::vector<OperatorSpec> parts;  // Compose applies the last part first

  static OperatorSpec riesz(const ScaleParam& s, std::size_t coord = 0);
  static OperatorSpec multiply(DyadicFunction b);
  static OperatorSpec para_b(DyadicFunction b);
  static OperatorSpec para_b_adjoint(DyadicFunction b);
  static OperatorSpec para_c(DyadicFunction b);
  static OperatorSpec para_d(int k, DyadicFunction b, std::size_t coord = 0);
  static OperatorSpec para_e(TensorParaSpec spec, DyadicFunction b);
  static OperatorSpec commutator(DyadicFunction b, std::vector<ScaleParam> scales);
  static OperatorSpec compose(std::vector<OperatorSpec> parts);

  std::string str() const;
};

DyadicFunction apply(const OperatorSpec& spec, const DyadicFunction& f);

}  // namespace dyalab

#endif  // DYALAB_OPERATORS_HPP_
