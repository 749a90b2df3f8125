#ifndef DYALAB_SCALAR_HPP_
#define DYALAB_SCALAR_HPP_

#include <compare>
#include <string>

#include <gmpxx.h>

namespace dyalab {

/// Exact number a + b*sqrt(2) with rational a, b.
///
/// Haar amplitudes |I|^{-1/2} on dyadic intervals are half-integer powers of
/// two, so every coefficient and pointwise value produced by the library lives
/// in this field. Equality and ordering are decidable.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : rational_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(mpq_class a) : rational_(std::move(a)) { rational_.canonicalize(); }  // NOLINT
  Scalar(mpq_class a, mpq_class b) : rational_(std::move(a)), surd_(std::move(b)) {
    rational_.canonicalize();
    surd_.canonicalize();
  }

  // 2^{e/2}.
  static Scalar sqrt2_pow(int e);

  const mpq_class& rational() const { return rational_; }
  const mpq_class& surd() const { return surd_; }

  bool is_zero() const { return sgn(rational_) == 0 && sgn(surd_) == 0; }
  bool is_rational() const { return sgn(surd_) == 0; }
  int sign() const;

  double to_double() const;
  // "a" or "a + b*sqrt2" with rationals printed as num/den.
  std::string str() const;

  Scalar operator-() const { return Scalar(-rational_, -surd_); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.rational_ == b.rational_ && a.surd_ == b.surd_;
  }
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);

 private:
  mpq_class rational_{0};
  mpq_class surd_{0};
};

Scalar abs(const Scalar& x);

// 2^k as an exact rational; k may be negative.
mpq_class pow2(long k);

// base^k for integer k (negative allowed when base != 0).
mpq_class pow_q(const mpq_class& base, long k);

// Parses "n", "n/d" or "n/d + m/e*sqrt2".
Scalar parse_scalar(const std::string& text);
mpq_class parse_rational(const std::string& text);
std::string rational_str(const mpq_class& q);

}  // namespace dyalab

#endif  // DYALAB_SCALAR_HPP_
