#include "dyalab/scalar.hpp"

#include <cmath>
#include <stdexcept>

namespace dyalab {

Scalar Scalar::sqrt2_pow(int e) {
  // 2^{e/2}: integer power of two, or an integer power times sqrt(2).
  if (e % 2 == 0) return Scalar(pow2(e / 2));
  const int half = (e - 1) / 2;  // e odd, exact division
  return Scalar(mpq_class(0), pow2(half));
}

int Scalar::sign() const {
  const int a = sgn(rational_);
  const int b = sgn(surd_);
  if (b == 0) return a;
  if (a == 0) return b;
  if (a == b) return a;
  // Opposite signs: compare a^2 against 2 b^2.
  mpq_class a2 = rational_ * rational_;
  mpq_class b2 = 2 * surd_ * surd_;
  const int c = cmp(a2, b2);
  if (c == 0) return 0;  // unreachable for rationals, sqrt(2) is irrational
  return c > 0 ? a : b;
}

double Scalar::to_double() const {
  return rational_.get_d() + surd_.get_d() * std::sqrt(2.0);
}

std::string Scalar::str() const {
  if (is_rational()) return rational_str(rational_);
  if (sgn(rational_) == 0) return rational_str(surd_) + "*sqrt2";
  return rational_str(rational_) + " + " + rational_str(surd_) + "*sqrt2";
}

Scalar& Scalar::operator+=(const Scalar& o) {
  rational_ += o.rational_;
  surd_ += o.surd_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  rational_ -= o.rational_;
  surd_ -= o.surd_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_rational() && o.is_rational()) {
    rational_ *= o.rational_;
    return *this;
  }
  mpq_class a = rational_ * o.rational_ + 2 * surd_ * o.surd_;
  mpq_class b = rational_ * o.surd_ + surd_ * o.rational_;
  rational_ = std::move(a);
  surd_ = std::move(b);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw std::domain_error("Scalar: division by zero");
  if (o.is_rational()) {
    rational_ /= o.rational_;
    surd_ /= o.rational_;
    return *this;
  }
  // (a + b r2)^{-1} = (a - b r2) / (a^2 - 2 b^2)
  mpq_class norm = o.rational_ * o.rational_ - 2 * o.surd_ * o.surd_;
  Scalar conj(o.rational_ / norm, -o.surd_ / norm);
  return *this *= conj;
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
  const int s = (a - b).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Scalar abs(const Scalar& x) { return x.sign() < 0 ? -x : x; }

mpq_class pow2(long k) {
  mpq_class r(1);
  if (k >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(k));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-k));
  }
  return r;
}

mpq_class pow_q(const mpq_class& base, long k) {
  mpq_class r(1);
  if (k == 0) return r;
  const unsigned long n = static_cast<unsigned long>(k < 0 ? -k : k);
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), n);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), n);
  r.canonicalize();
  if (k < 0) {
    if (sgn(r) == 0) throw std::domain_error("pow_q: zero to a negative power");
    r = 1 / r;
  }
  return r;
}

mpq_class parse_rational(const std::string& raw) {
  std::string text;
  for (char ch : raw) {
    if (ch != ' ' && ch != '\t') text.push_back(ch);
  }
  if (text.empty()) throw std::invalid_argument("empty rational");
  mpq_class q;
  if (q.set_str(text, 10) != 0) {
    throw std::invalid_argument("malformed rational '" + raw + "'");
  }
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator in '" + raw + "'");
  q.canonicalize();
  return q;
}

Scalar parse_scalar(const std::string& raw) {
  std::string text;
  for (char ch : raw) {
    if (ch != ' ' && ch != '\t') text.push_back(ch);
  }
  const std::string tag = "*sqrt2";
  const auto at = text.find(tag);
  if (at == std::string::npos) return Scalar(parse_rational(text));
  if (at + tag.size() != text.size()) throw std::invalid_argument("malformed scalar '" + raw + "'");
  std::string head = text.substr(0, at);
  // Split head into rational part and surd coefficient at the last top-level sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = head.size(); i-- > 1;) {
    if ((head[i] == '+' || head[i] == '-') && head[i - 1] != '/') {
      split = i;
      break;
    }
  }
  // "a + -b" and "a - -b": the operator is the earlier sign.
  if (split != std::string::npos && split > 1 && (head[split - 1] == '+' || head[split - 1] == '-')) --split;
  if (split != std::string::npos && head.substr(split, 2) == "--") head.replace(split, 2, "+");
  if (split == std::string::npos) return Scalar(mpq_class(0), parse_rational(head));
  mpq_class a = parse_rational(head.substr(0, split));
  std::string b_text = head.substr(split);
  if (b_text[0] == '+') b_text = b_text.substr(1);
  return Scalar(a, parse_rational(b_text));
}

std::string rational_str(const mpq_class& q) { return q.get_str(10); }

}  // namespace dyalab
