#include "dyalab/scale_param.hpp"

#include <cmath>

#include "dyalab/errors.hpp"

namespace dyalab {

ScaleParam::ScaleParam(mpq_class lambda) : lambda_(std::move(lambda)) {
  lambda_.canonicalize();
  if (!(lambda_ > mpq_class(1, 2) && lambda_ < 1)) {
    throw DomainError("scale parameter lambda=" + rational_str(lambda_) + " must lie in (1/2, 1)");
  }
  c_ = lambda_ / (1 - lambda_);
  chat_ = 1 / (2 * lambda_ - 1);
  mu_ = 1 / (2 * lambda_);
}

ScaleParam ScaleParam::parse(const std::string& text) { return ScaleParam(parse_rational(text)); }

double ScaleParam::alpha() const { return 1.0 + std::log2(lambda_.get_d()); }

}  // namespace dyalab
