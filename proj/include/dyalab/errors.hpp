#ifndef DYALAB_ERRORS_HPP_
#define DYALAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dyalab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An atom has a discontinuity strictly inside a grid cell.
class ResolutionTooCoarse : public Error {
 public:
  using Error::Error;
};

// A pairing, integral or potential whose defining series does not converge.
class Divergent : public Error {
 public:
  using Error::Error;
};

// Operands of mismatched dimension, or an operator used outside its domain
// (e.g. a paraproduct symbol without finite Haar support).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ScalingRelationViolated : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dyalab

#endif  // DYALAB_ERRORS_HPP_
