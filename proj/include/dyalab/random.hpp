#ifndef DYALAB_RANDOM_HPP_
#define DYALAB_RANDOM_HPP_

#include <cstdint>

#include "dyalab/function.hpp"

namespace dyalab {

/// PCG32 (XSH-RR output over a 64-bit LCG), O'Neill 2014.
///   state <- state * 6364136223846793005 + inc
///   inc    = (stream << 1) | 1
/// Seeding follows the reference pcg32_srandom_r. All derived draws below use
/// only integer operations on next(), so streams are reproducible anywhere.
class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0xda3e39cb94b95bdbULL);

  std::uint32_t next();
  // Uniform integer in [0, n), rejection sampled.
  std::uint32_t below(std::uint32_t n);
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform in [-1, 1] on the grid k/1024, excluding 0.
  mpq_class coefficient();

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
};

struct SymbolShape {
  std::size_t dim = 1;
  Rectangle window;  // support tree root
  int depth = 4;     // Haar rectangles at most this many levels below the window
  int terms = 6;     // number of Haar terms drawn (duplicates merge)
};

// Finite Haar sum with coefficients from Pcg32::coefficient.
DyadicFunction random_haar_symbol(Pcg32& rng, const SymbolShape& shape);

// Mixed Haar, indicator and (optionally) tail atoms with small rational coefficients.
DyadicFunction random_test_function(Pcg32& rng, const SymbolShape& shape, bool tails);

// Interval of scale window.scale - level, uniformly placed inside the window side.
Interval random_subinterval(Pcg32& rng, const Interval& window, int level);

}  // namespace dyalab

#endif  // DYALAB_RANDOM_HPP_
