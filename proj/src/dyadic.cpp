#include "dyalab/dyadic.hpp"

#include <stdexcept>

namespace dyalab {

std::int64_t shift_down(std::int64_t pos, int k) {
  if (k < 0) throw std::invalid_argument("shift_down: negative shift");
  if (k >= 63) return pos < 0 ? -1 : 0;
  return pos >> k;  // arithmetic shift is floor division in C++20
}

Interval Interval::parent() const { return ancestor(1); }

Interval Interval::ancestor(int k) const {
  if (k < 0) throw std::invalid_argument("ancestor: negative generation");
  return {scale + k, shift_down(pos, k)};
}

bool Interval::contains(const Interval& j) const {
  if (j.scale > scale) return false;
  return shift_down(j.pos, scale - j.scale) == pos;
}

int Interval::half_containing(const Interval& j) const {
  return static_cast<int>(shift_down(j.pos, scale - j.scale - 1) & 1);
}

std::string Interval::str() const {
  return "[" + rational_str(left()) + "," + rational_str(right()) + ")";
}

Interval interval_at(int scale, const mpq_class& x) {
  mpq_class scaled = x / pow2(scale);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  return {scale, static_cast<std::int64_t>(fl.get_si())};
}

std::optional<Interval> smallest_common(const Interval& a, const Interval& b) {
  if (a.nonnegative() != b.nonnegative()) return std::nullopt;
  Interval x = a.scale >= b.scale ? a : b;
  const Interval& y = a.scale >= b.scale ? b : a;
  while (!x.contains(y)) x = x.parent();
  return x;
}

mpq_class Rectangle::volume() const { return pow2(scale_sum()); }

int Rectangle::scale_sum() const {
  int s = 0;
  for (const auto& side : sides) s += side.scale;
  return s;
}

bool Rectangle::contains(const Rectangle& r) const {
  for (std::size_t j = 0; j < sides.size(); ++j) {
    if (!sides[j].contains(r.sides[j])) return false;
  }
  return true;
}

bool Rectangle::disjoint(const Rectangle& r) const {
  for (std::size_t j = 0; j < sides.size(); ++j) {
    if (sides[j].disjoint(r.sides[j])) return true;
  }
  return false;
}

std::string Rectangle::str() const {
  std::string out;
  for (std::size_t j = 0; j < sides.size(); ++j) {
    if (j) out += "x";
    out += sides[j].str();
  }
  return out;
}

}  // namespace dyalab
