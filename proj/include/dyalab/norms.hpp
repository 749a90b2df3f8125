#ifndef DYALAB_NORMS_HPP_
#define DYALAB_NORMS_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dyalab/function.hpp"
#include "dyalab/grid.hpp"

namespace dyalab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// (sum over cells |v|^p * cell volume)^{1/p}; p = kInfinity gives the max.
double lp_norm(const GridFunction& f, double p);

// L^p norm over a window on the coarsest partition where f is constant in
// each coordinate, so huge windows with few atoms stay cheap.
double lp_norm_adaptive(const DyadicFunction& f, const Rectangle& window, double p);

struct NormReport {
  double value = 0;
  Scalar squared;                   // exact square of value when known
  std::vector<Rectangle> witness;   // maximizing J, rectangle or collection
  std::string method = "exact-enumeration";
  std::size_t budget_used = 0;
};

// Exact; the supremum over dyadic J is attained on the Haar support.
NormReport bmo_dyadic(const HaarCoefficients& b);
NormReport bmo_dyadic(const DyadicFunction& b);

struct ProductSearch {
  std::size_t exact_cap = 14;
  std::size_t budget = 200000;  // ratio evaluations allowed in greedy mode
  int restarts = 8;
  std::uint64_t seed = 1;
};

// Supremum over unions U of support rectangles of |U|^{-1} sum_{R in U} b_R^2.
NormReport bmo_product(const HaarCoefficients& b, const ProductSearch& search = {});
NormReport bmo_product(const DyadicFunction& b, const ProductSearch& search = {});

// Supremum over single dyadic rectangles.
NormReport bmo_rect(const HaarCoefficients& b);
NormReport bmo_rect(const DyadicFunction& b);

// Supremum over collections whose sides outside `in_b` coincide.
NormReport bmo_restricted(const HaarCoefficients& b, const std::vector<bool>& in_b,
                          const ProductSearch& search = {});
NormReport bmo_restricted(const DyadicFunction& b, const std::vector<bool>& in_b,
                          const ProductSearch& search = {});

// max_R |b_R| / sqrt|R|.
NormReport sup_haar_ratio(const HaarCoefficients& b);
NormReport sup_haar_ratio(const DyadicFunction& b);

// L^p norm of (sum over the window basis of |<f, h>|^2 |R|^{-1} 1_R)^{1/2}.
double square_function(const GridFunction& f, double p);

// (|J|^{-1/p} ||b_J||_p, |J|^{-1/q} ||b_J||_q) with b_J = sum_{I in J} b_I h_I.
std::pair<double, double> jn_profile(const DyadicFunction& b, const Interval& j, double p, double q);

// Exact measure of a finite union of rectangles.
mpq_class union_measure(const std::vector<Rectangle>& rects);

}  // namespace dyalab

#endif  // DYALAB_NORMS_HPP_
