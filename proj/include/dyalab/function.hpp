#ifndef DYALAB_FUNCTION_HPP_
#define DYALAB_FUNCTION_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dyalab/dyadic.hpp"
#include "dyalab/scalar.hpp"
#include "dyalab/scale_param.hpp"

namespace dyalab {

enum class AtomKind { Haar = 0, Indicator = 1, Tail = 2 };

const char* to_string(AtomKind kind);

/// One-dimensional building block of the function algebra.
///
///   Haar      h_I = |I|^{-1/2} (-1_{I-} + 1_{I+})
///   Indicator 1_I
///   Tail      G(I, r) = sum_{k>=1} r^k 1_{I_k}, with I_k the k-th ancestor
///             and 0 < r < 1. The ascending part of the dyadic Riesz
///             potential of 1_I is lambda^{-s} G(I, 1/(2 lambda)).
struct Atom {
  AtomKind kind = AtomKind::Indicator;
  Interval iv;
  mpq_class ratio{0};

  static Atom haar(Interval i) { return {AtomKind::Haar, i, mpq_class(0)}; }
  static Atom indicator(Interval i) { return {AtomKind::Indicator, i, mpq_class(0)}; }
  static Atom tail(Interval i, mpq_class r);

  std::string str() const;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.kind == b.kind && a.iv == b.iv && a.ratio == b.ratio;
  }
  friend bool operator<(const Atom& a, const Atom& b);
};

using Terms1 = std::vector<std::pair<Atom, Scalar>>;

namespace atoms {

// |I|^{-1/2} for |I| = 2^scale.
Scalar haar_amplitude(int scale);

// Value of the atom on the interval k when the atom is constant there.
std::optional<Scalar> value_on(const Atom& a, const Interval& k);
Scalar eval(const Atom& a, const mpq_class& x);

Terms1 multiply(const Atom& a, const Atom& b);
Scalar integral(const Atom& a);
Scalar inner(const Atom& a, const Atom& b);

// Dyadic Riesz potential of one atom, summed over the full dyadic grid.
Terms1 riesz(const Atom& a, const ScaleParam& scale);

// Mean of the atom over the interval k.
Scalar mean_over(const Atom& a, const Interval& k);

}  // namespace atoms

/// Exact finite linear combination of elementary tensors of atoms.
///
/// Terms are kept in a sorted map keyed by the factor tuple, so like terms
/// merge on insertion and the representation is canonical: two functions are
/// equal iff their term maps are equal.
class DyadicFunction {
 public:
  using Factors = std::vector<Atom>;
  using TermMap = std::map<Factors, Scalar>;

  explicit DyadicFunction(std::size_t dim = 1) : dim_(dim) {}

  static DyadicFunction elementary(Factors factors, const Scalar& coeff = Scalar(1));
  static DyadicFunction haar(const Rectangle& r);
  static DyadicFunction indicator(const Rectangle& r);
  static DyadicFunction haar(const Interval& i) { return haar(Rectangle{{i}}); }
  static DyadicFunction indicator(const Interval& i) { return indicator(Rectangle{{i}}); }

  std::size_t dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Factors& factors, const Scalar& coeff);

  // Every factor of every term is a Haar atom.
  bool is_pure_haar() const;
  bool is_pure_haar(std::size_t coord) const;
  bool has_tails() const;

  Scalar eval(const std::vector<mpq_class>& x) const;

  DyadicFunction& operator+=(const DyadicFunction& o);
  DyadicFunction& operator-=(const DyadicFunction& o);
  DyadicFunction& operator*=(const Scalar& s);

  friend DyadicFunction operator+(DyadicFunction a, const DyadicFunction& b) { return a += b; }
  friend DyadicFunction operator-(DyadicFunction a, const DyadicFunction& b) { return a -= b; }
  friend DyadicFunction operator*(DyadicFunction a, const Scalar& s) { return a *= s; }
  friend DyadicFunction operator*(const Scalar& s, DyadicFunction a) { return a *= s; }
  friend bool operator==(const DyadicFunction& a, const DyadicFunction& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  std::string str() const;

 private:
  std::size_t dim_;
  TermMap terms_;
};

// Adds coeff * (tensor product of the per-coordinate combinations) to out.
void add_tensor(DyadicFunction& out, const Scalar& coeff, const std::vector<Terms1>& factors);

// Applies a linear map on atoms to one coordinate of every term.
DyadicFunction map_coordinate(const DyadicFunction& f, std::size_t coord,
                              const std::function<Terms1(const Atom&)>& op);

// Rewrites f in the basis {1_H, h_I for I inside H, G(H, r)} per coordinate and
// half-line, where H is the smallest dyadic interval containing every atom base
// on that half-line. These elements are linearly independent, so the result
// vanishes iff f = 0 as a function, and two functions are equal iff their
// difference canonicalizes to zero.
DyadicFunction canonicalize(const DyadicFunction& f);
bool vanishes(const DyadicFunction& f);
bool equivalent(const DyadicFunction& f, const DyadicFunction& g);

DyadicFunction multiply(const DyadicFunction& f, const DyadicFunction& g);
Scalar inner_product(const DyadicFunction& f, const DyadicFunction& g);
Scalar integral(const DyadicFunction& f);

/// Haar index: eps_j = 0 selects h_{R_j}, eps_j = 1 selects h^1_{R_j} = |R_j|^{-1/2} 1_{R_j}.
struct HaarIndex {
  Rectangle rect;
  std::vector<int> eps;

  std::string str() const;
  friend auto operator<=>(const HaarIndex&, const HaarIndex&) = default;
};

using HaarCoefficients = std::map<Rectangle, Scalar>;

Scalar haar_eval(const HaarIndex& idx, const std::vector<mpq_class>& x);
DyadicFunction haar_function(const HaarIndex& idx);

// Coefficients <f, h_R> of a function whose factors are all Haar atoms.
HaarCoefficients haar_coefficients(const DyadicFunction& f);
DyadicFunction from_haar_coefficients(const HaarCoefficients& coeffs, std::size_t dim);

}  // namespace dyalab

#endif  // DYALAB_FUNCTION_HPP_
