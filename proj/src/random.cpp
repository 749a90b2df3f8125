#include "dyalab/random.hpp"

#include "dyalab/errors.hpp"

namespace dyalab {

Pcg32::Pcg32(std::uint64_t seed, std::uint64_t stream) : inc_((stream << 1u) | 1u) {
  next();
  state_ += seed;
  next();
}

std::uint32_t Pcg32::next() {
  const std::uint64_t old = state_;
  state_ = old * 6364136223846793005ULL + inc_;
  const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
  const auto rot = static_cast<std::uint32_t>(old >> 59u);
  return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
}

std::uint32_t Pcg32::below(std::uint32_t n) {
  if (n == 0) throw DomainError("Pcg32::below(0)");
  const std::uint32_t threshold = (-n) % n;
  while (true) {
    const std::uint32_t r = next();
    if (r >= threshold) return r % n;
  }
}

double Pcg32::uniform() {
  const std::uint64_t hi = next();
  const std::uint64_t lo = next();
  const std::uint64_t bits = ((hi << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

mpq_class Pcg32::coefficient() {
  // k in [-1024, 1024] \ {0}
  long k = static_cast<long>(below(2048)) - 1024;
  if (k >= 0) ++k;
  return mpq_class(k, 1024);
}

Interval random_subinterval(Pcg32& rng, const Interval& window, int level) {
  if (level < 0 || level > 30) throw DomainError("random_subinterval: level out of range");
  const std::int64_t count = std::int64_t{1} << level;
  const auto off = static_cast<std::int64_t>(rng.below(static_cast<std::uint32_t>(count)));
  return {window.scale - level, window.pos * count + off};
}

DyadicFunction random_haar_symbol(Pcg32& rng, const SymbolShape& shape) {
  DyadicFunction b(shape.dim);
  for (int t = 0; t < shape.terms; ++t) {
    DyadicFunction::Factors factors;
    for (std::size_t j = 0; j < shape.dim; ++j) {
      const int level = static_cast<int>(rng.below(static_cast<std::uint32_t>(shape.depth + 1)));
      factors.push_back(Atom::haar(random_subinterval(rng, shape.window.sides[j], level)));
    }
    b.add_term(factors, Scalar(rng.coefficient()));
  }
  return b;
}

DyadicFunction random_test_function(Pcg32& rng, const SymbolShape& shape, bool tails) {
  static const mpq_class kTailRatios[] = {mpq_class(1, 4), mpq_class(1, 3)};
  DyadicFunction f(shape.dim);
  for (int t = 0; t < shape.terms; ++t) {
    DyadicFunction::Factors factors;
    for (std::size_t j = 0; j < shape.dim; ++j) {
      const int level = static_cast<int>(rng.below(static_cast<std::uint32_t>(shape.depth + 1)));
      const Interval i = random_subinterval(rng, shape.window.sides[j], level);
      const std::uint32_t kind = rng.below(tails ? 5 : 4);
      if (kind < 2) {
        factors.push_back(Atom::haar(i));
      } else if (kind < 4) {
        factors.push_back(Atom::indicator(i));
      } else {
        factors.push_back(Atom::tail(i, kTailRatios[rng.below(2)]));
      }
    }
    const long num = static_cast<long>(rng.below(9)) - 4;
    const long den = 1 + static_cast<long>(rng.below(4));
    f.add_term(factors, Scalar(mpq_class(num == 0 ? 1 : num, den)));
  }
  return f;
}

}  // namespace dyalab
