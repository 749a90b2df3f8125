#ifndef DYALAB_DYADIC_HPP_
#define DYALAB_DYADIC_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyalab/scalar.hpp"

namespace dyalab {

/// The dyadic interval [pos * 2^scale, (pos + 1) * 2^scale).
struct Interval {
  int scale = 0;
  std::int64_t pos = 0;

  mpq_class length() const { return pow2(scale); }
  mpq_class left() const { return mpq_class(mpz_class(static_cast<long>(pos))) * pow2(scale); }
  mpq_class right() const { return mpq_class(mpz_class(static_cast<long>(pos + 1))) * pow2(scale); }

  // Intervals of [0, inf) and of (-inf, 0) have disjoint ancestor chains.
  bool nonnegative() const { return pos >= 0; }

  Interval parent() const;
  Interval ancestor(int k) const;
  Interval child(int side) const { return {scale - 1, 2 * pos + side}; }

  bool contains(const Interval& j) const;
  bool strictly_contains(const Interval& j) const { return j.scale < scale && contains(j); }
  bool disjoint(const Interval& j) const { return !contains(j) && !j.contains(*this); }
  bool contains_point(const mpq_class& x) const { return left() <= x && x < right(); }

  // For j strictly inside *this: 0 if j lies in the left half, 1 for the right half.
  int half_containing(const Interval& j) const;

  std::string str() const;

  friend auto operator<=>(const Interval&, const Interval&) = default;
};

// The dyadic interval of length 2^scale containing x.
Interval interval_at(int scale, const mpq_class& x);

// Smallest dyadic interval containing both, when they share a half-line.
std::optional<Interval> smallest_common(const Interval& a, const Interval& b);

// Floor division of pos by 2^k, total for every k >= 0.
std::int64_t shift_down(std::int64_t pos, int k);

/// Product of dyadic intervals, one per coordinate.
struct Rectangle {
  std::vector<Interval> sides;

  std::size_t dim() const { return sides.size(); }
  mpq_class volume() const;
  int scale_sum() const;
  bool contains(const Rectangle& r) const;
  bool disjoint(const Rectangle& r) const;
  std::string str() const;

  friend auto operator<=>(const Rectangle&, const Rectangle&) = default;
};

}  // namespace dyalab

#endif  // DYALAB_DYADIC_HPP_
