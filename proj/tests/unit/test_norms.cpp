#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dyalab/norms.hpp"
#include "dyalab/random.hpp"

using namespace dyalab;
using F = DyadicFunction;

namespace {

mpq_class q(long n, long d = 1) { return mpq_class(n, d); }
Interval iv(int s, std::int64_t p) { return {s, p}; }
Rectangle rect(Interval a, Interval b) { return Rectangle{{a, b}}; }
const Rectangle kUnit1{{iv(0, 0)}};
const Rectangle kUnit2 = rect(iv(0, 0), iv(0, 0));

bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("lp_norm") {
  CHECK(close(lp_norm(to_grid(F::indicator(kUnit1), kUnit1, {-1}), 4), 1.0));
  CHECK(close(lp_norm(to_grid(F::haar(kUnit1), kUnit1, {-1}), 2), 1.0));
  CHECK(close(lp_norm(to_grid(F::haar(iv(-1, 0)), kUnit1, {-2}), 4), std::pow(2.0, 0.25)));
  CHECK(close(lp_norm(to_grid(F::haar(iv(-1, 0)), kUnit1, {-2}), kInfinity), std::sqrt(2.0)));
  // The adaptive partition agrees with the uniform grid.
  Pcg32 rng(2);
  for (int t = 0; t < 10; ++t) {
    const F f = random_test_function(rng, {2, kUnit2, 3, 4}, false);
    const GridFunction g = to_grid(f, kUnit2, uniform_cells(2, 4));
    for (double p : {1.0, 2.0, 3.5, kInfinity}) CHECK(close(lp_norm_adaptive(f, kUnit2, p), lp_norm(g, p), 1e-10));
  }
  // Far-apart atoms on a huge window stay cheap.
  const Rectangle big = rect(iv(33, 0), iv(33, 0));
  const F far = F::indicator(rect(iv(0, 0), iv(0, 0))) + F::indicator(rect(iv(0, 1 << 20), iv(0, 1 << 20)));
  CHECK(close(lp_norm_adaptive(far, big, 2), std::sqrt(2.0)));
}

TEST_CASE("bmo_dyadic") {
  NormReport r = bmo_dyadic(F::haar(kUnit1));
  CHECK(r.value == 1.0);
  CHECK(r.witness == std::vector<Rectangle>{kUnit1});
  r = bmo_dyadic(F::haar(iv(0, 0)) + F::haar(iv(-1, 0)));
  CHECK(r.squared == Scalar(2));
  CHECK(r.witness == std::vector<Rectangle>{Rectangle{{iv(-1, 0)}}});
  CHECK(bmo_dyadic(F(1)).value == 0.0);
  // Exhaustive check over every dyadic J in the window tree.
  Pcg32 rng(4);
  for (int t = 0; t < 20; ++t) {
    const F b = random_haar_symbol(rng, {1, kUnit1, 4, 5});
    const HaarCoefficients c = haar_coefficients(b);
    Scalar best;
    for (int s = 0; s >= -4; --s) {
      for (std::int64_t p = 0; p < (std::int64_t{1} << -s); ++p) {
        const Interval j = iv(s, p);
        Scalar mass;
        for (const auto& [r2, v] : c) {
          if (j.contains(r2.sides[0])) mass += v * v;
        }
        best = std::max(best, mass / Scalar(j.length()));
      }
    }
    CHECK(bmo_dyadic(c).squared == best);
  }
}

TEST_CASE("sup_haar_ratio") {
  CHECK(sup_haar_ratio(F::haar(kUnit1)).value == 1.0);
  CHECK(sup_haar_ratio(F::haar(iv(-2, 0))).squared == Scalar(4));
  F b(1);
  for (int m = 0; m <= 3; ++m) b += Scalar::sqrt2_pow(-m) * F::haar(iv(-m, 0));
  CHECK(sup_haar_ratio(b).squared == Scalar(1));
  Pcg32 rng(6);
  for (int t = 0; t < 20; ++t) {
    const F s = random_haar_symbol(rng, {1, kUnit1, 4, 5});
    CHECK(sup_haar_ratio(s).squared <= bmo_dyadic(s).squared);
  }
}

TEST_CASE("bmo_product") {
  CHECK(bmo_product(F::haar(kUnit2)).value == 1.0);
  CHECK(bmo_product(F(2)).value == 0.0);
  const F two = F::haar(rect(iv(-1, 0), iv(-1, 0))) + F::haar(rect(iv(-1, 1), iv(-1, 1)));
  NormReport r = bmo_product(two);
  CHECK(r.squared == Scalar(4));
  CHECK(r.method == "exact-enumeration");
  // An L-shaped union beats every single rectangle.
  const F ell = F::haar(rect(iv(0, 0), iv(-1, 0))) + F::haar(rect(iv(-1, 0), iv(0, 0)));
  r = bmo_product(ell);
  CHECK(r.squared == Scalar(q(8, 3)));
  CHECK(r.witness.size() == 2);
  CHECK(bmo_rect(ell).squared == Scalar(2));
  // Above the cap the greedy search is a lower bound.
  Pcg32 rng(8);
  const F big = random_haar_symbol(rng, {2, kUnit2, 3, 20});
  const NormReport exact = bmo_product(big, {.exact_cap = 30});
  const NormReport greedy = bmo_product(big, {.exact_cap = 4});
  CHECK(greedy.method == "greedy");
  CHECK(greedy.squared <= exact.squared);
  CHECK(greedy.squared >= sup_haar_ratio(big).squared);
}

TEST_CASE("union_measure") {
  CHECK(union_measure({rect(iv(0, 0), iv(-1, 0)), rect(iv(-1, 0), iv(0, 0))}) == q(3, 4));
  CHECK(union_measure({rect(iv(0, 0), iv(0, 0)), rect(iv(0, 3), iv(1, 0))}) == q(3));
  CHECK(union_measure({}) == 0);
}

TEST_CASE("bmo_rect and bmo_restricted") {
  CHECK(bmo_rect(F::haar(kUnit2)).value == 1.0);
  CHECK(bmo_restricted(F::haar(kUnit2), {true, false}).value == 1.0);
  // Four unit-coefficient halves of the square: the square itself sees all
  // four, while each restricted class sees at most two at once.
  const F halves = F::haar(rect(iv(0, 0), iv(-1, 0))) + F::haar(rect(iv(0, 0), iv(-1, 1))) +
                   F::haar(rect(iv(-1, 0), iv(0, 0))) + F::haar(rect(iv(-1, 1), iv(0, 0)));
  CHECK(bmo_rect(halves).squared == Scalar(4));
  CHECK(bmo_restricted(halves, {true, false}).squared == Scalar(2));
  CHECK(bmo_restricted(halves, {false, true}).squared == Scalar(2));

  Pcg32 rng(10);
  for (int t = 0; t < 15; ++t) {
    const F b = random_haar_symbol(rng, {2, kUnit2, 3, 6});
    const Scalar prod = bmo_product(b).squared;
    const Scalar rec = bmo_rect(b).squared;
    const Scalar r1 = bmo_restricted(b, {true, false}).squared;
    const Scalar r2 = bmo_restricted(b, {false, true}).squared;
    CHECK(rec <= prod);
    CHECK(r1 <= prod);
    CHECK(r2 <= prod);
    CHECK(std::max(r1, r2) <= rec);
    CHECK(bmo_restricted(b, {true, true}).squared == prod);
    CHECK(sup_haar_ratio(b).squared <= rec);
  }
  for (int t = 0; t < 15; ++t) {
    const F b = random_haar_symbol(rng, {1, kUnit1, 4, 6});
    const Scalar d = bmo_dyadic(b).squared;
    CHECK(bmo_product(b).squared == d);
    CHECK(bmo_rect(b).squared == d);
  }
}

TEST_CASE("square_function") {
  CHECK(close(square_function(to_grid(F::haar(kUnit1), kUnit1, {-1}), 4), 1.0));
  CHECK(square_function(to_grid(F(1), kUnit1, {-2}), 3) == 0.0);
  Pcg32 rng(12);
  double lo = 1e9;
  double hi = 0;
  for (int t = 0; t < 20; ++t) {
    const F f = random_test_function(rng, {2, kUnit2, 3, 4}, false);
    const GridFunction g = to_grid(f, kUnit2, uniform_cells(2, 4));
    CHECK(close(square_function(g, 2), lp_norm(g, 2)));
    const double ratio = square_function(g, 4) / lp_norm(g, 4);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo > 0.3);
  CHECK(hi < 3.0);
}

TEST_CASE("jn_profile") {
  auto [a, b] = jn_profile(F::haar(kUnit1), iv(0, 0), 2, 2);
  CHECK(close(a, 1.0));
  CHECK(close(b, 1.0));
  std::tie(a, b) = jn_profile(F::haar(kUnit1), iv(0, 0), 2, 4);
  CHECK(close(a, 1.0));
  CHECK(close(b, 1.0));
  std::tie(a, b) = jn_profile(F(1), iv(0, 0), 2, 4);
  CHECK(a == 0.0);
  CHECK(b == 0.0);
  // Localization drops coefficients outside J.
  std::tie(a, b) = jn_profile(F::haar(iv(1, 0)) + F::haar(iv(-1, 0)), iv(-1, 0), 2, 2);
  CHECK(close(a, std::sqrt(2.0)));
}
