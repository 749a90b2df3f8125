#ifndef DYALAB_SCALE_PARAM_HPP_
#define DYALAB_SCALE_PARAM_HPP_

#include <string>

#include "dyalab/scalar.hpp"

namespace dyalab {

/// Riesz exponent encoded as lambda = 2^{alpha-1}, a rational in (1/2, 1).
///
/// On a dyadic interval of length 2^s the powers that drive the potential are
/// |I|^{1-alpha} = lambda^{-s} and |I|^{-alpha} = (2 lambda)^{-s}, so a
/// rational lambda keeps every one of them rational.
class ScaleParam {
 public:
  explicit ScaleParam(mpq_class lambda);
  static ScaleParam parse(const std::string& text);

  const mpq_class& lambda() const { return lambda_; }
  // c = sum_{n>=1} lambda^n = lambda / (1 - lambda).
  const mpq_class& c() const { return c_; }
  // chat = sum_{k>=1} (2 lambda)^{-k} = 1 / (2 lambda - 1).
  const mpq_class& chat() const { return chat_; }
  // Ratio of the ascending tail, mu = 1 / (2 lambda).
  const mpq_class& mu() const { return mu_; }

  double alpha() const;

  // |I|^{1-alpha} for |I| = 2^scale.
  mpq_class length_pow_one_minus_alpha(long scale) const { return pow_q(lambda_, -scale); }
  // |I|^{-alpha} for |I| = 2^scale.
  mpq_class length_pow_minus_alpha(long scale) const { return pow_q(2 * lambda_, -scale); }

  std::string str() const { return rational_str(lambda_); }

  friend bool operator==(const ScaleParam& a, const ScaleParam& b) { return a.lambda_ == b.lambda_; }

 private:
  mpq_class lambda_;
  mpq_class c_;
  mpq_class chat_;
  mpq_class mu_;
};

}  // namespace dyalab

#endif  // DYALAB_SCALE_PARAM_HPP_
