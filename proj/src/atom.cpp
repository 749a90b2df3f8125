#include <stdexcept>

#include "dyalab/errors.hpp"
#include "dyalab/function.hpp"

namespace dyalab {

const char* to_string(AtomKind kind) {
  switch (kind) {
    case AtomKind::Haar:
      return "haar";
    case AtomKind::Indicator:
      return "indicator";
    case AtomKind::Tail:
      return "tail";
  }
  return "?";
}

Atom Atom::tail(Interval i, mpq_class r) {
  r.canonicalize();
  if (!(r > 0 && r < 1)) throw DomainError("tail ratio must lie in (0, 1), got " + rational_str(r));
  return {AtomKind::Tail, i, std::move(r)};
}

std::string Atom::str() const {
  switch (kind) {
    case AtomKind::Haar:
      return "h" + iv.str();
    case AtomKind::Indicator:
      return "1" + iv.str();
    case AtomKind::Tail:
      return "G(" + iv.str() + ";" + rational_str(ratio) + ")";
  }
  return "?";
}

bool operator<(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.iv != b.iv) return a.iv < b.iv;
  return a.ratio < b.ratio;
}

namespace atoms {
namespace {

void push(Terms1& out, const Atom& a, const Scalar& c) {
  if (!c.is_zero()) out.emplace_back(a, c);
}

// h_I restricted to a strict sub-interval j.
Scalar haar_on_sub(const Interval& i, const Interval& j) {
  Scalar amp = haar_amplitude(i.scale);
  return i.half_containing(j) == 1 ? amp : -amp;
}

// Product of a compact atom x with 1_j for j strictly inside x's interval.
Scalar compact_on_sub(const Atom& x, const Interval& j) {
  return x.kind == AtomKind::Haar ? haar_on_sub(x.iv, j) : Scalar(1);
}

// Tail value r^{k0} / (1 - r) where k0 >= 1 is the first generation whose
// ancestor of j contains k; zero when no ancestor does.
Scalar tail_value(const Interval& j, const mpq_class& r, const Interval& k) {
  if (j.nonnegative() != k.nonnegative()) return Scalar(0);
  int gen = std::max(1, k.scale - j.scale);
  Interval anc = j.ancestor(gen);
  while (!anc.contains(k)) {
    anc = anc.parent();
    ++gen;
  }
  return Scalar(mpq_class(pow_q(r, gen) / (1 - r)));
}

Terms1 compact_times_compact(const Atom& a, const Atom& b) {
  Terms1 out;
  const Interval& i = a.iv;
  const Interval& j = b.iv;
  if (i.disjoint(j)) return out;
  const bool ha = a.kind == AtomKind::Haar;
  const bool hb = b.kind == AtomKind::Haar;
  if (i == j) {
    if (ha && hb) {
      push(out, Atom::indicator(i), Scalar(mpq_class(1 / i.length())));
    } else if (ha || hb) {
      push(out, Atom::haar(i), Scalar(1));
    } else {
      push(out, Atom::indicator(i), Scalar(1));
    }
    return out;
  }
  // Nested and distinct: the larger atom is constant on the smaller interval.
  const Atom& big = i.strictly_contains(j) ? a : b;
  const Atom& small = i.strictly_contains(j) ? b : a;
  push(out, small, compact_on_sub(big, small.iv));
  return out;
}

Terms1 compact_times_tail(const Atom& x, const Atom& t) {
  Terms1 out;
  const Interval& k = x.iv;
  const Interval& j = t.iv;
  if (!k.strictly_contains(j)) {
    push(out, x, tail_value(j, t.ratio, k));
    return out;
  }
  const int m = k.scale - j.scale;
  for (int gen = 1; gen < m; ++gen) {
    const Interval jk = j.ancestor(gen);
    push(out, Atom::indicator(jk), Scalar(pow_q(t.ratio, gen)) * compact_on_sub(x, jk));
  }
  push(out, x, Scalar(mpq_class(pow_q(t.ratio, m) / (1 - t.ratio))));
  return out;
}

Terms1 tail_times_tail(const Atom& a, const Atom& b) {
  Terms1 out;
  auto common = smallest_common(a.iv, b.iv);
  if (!common) return out;
  Interval m = *common;
  if (m == a.iv || m == b.iv) m = m.parent();
  const mpq_class& r = a.ratio;
  const mpq_class& s = b.ratio;
  const int ga = m.scale - a.iv.scale;
  const int gb = m.scale - b.iv.scale;
  // Finite parts below m: F_a = sum_{k<ga} r^k 1_{a_k}, F_b likewise.
  Terms1 fa;
  Terms1 fb;
  for (int k = 1; k < ga; ++k) fa.emplace_back(Atom::indicator(a.iv.ancestor(k)), Scalar(pow_q(r, k)));
  for (int k = 1; k < gb; ++k) fb.emplace_back(Atom::indicator(b.iv.ancestor(k)), Scalar(pow_q(s, k)));
  const mpq_class ra = pow_q(r, ga);
  const mpq_class sb = pow_q(s, gb);
  for (const auto& [x, cx] : fa) {
    for (const auto& [y, cy] : fb) {
      for (const auto& [z, cz] : compact_times_compact(x, y)) push(out, z, cx * cy * cz);
    }
    push(out, x, cx * Scalar(mpq_class(sb / (1 - s))));
  }
  for (const auto& [y, cy] : fb) push(out, y, cy * Scalar(mpq_class(ra / (1 - r))));
  // (1_m + G(m,r)) (1_m + G(m,s)) = kappa (1_m + G(m, r s)).
  const mpq_class kappa = 1 / (1 - s) + r / (1 - r);
  const Scalar top(mpq_class(ra * sb * kappa));
  push(out, Atom::indicator(m), top);
  push(out, Atom::tail(m, mpq_class(r * s)), top);
  return out;
}

}  // namespace

Scalar haar_amplitude(int scale) { return Scalar::sqrt2_pow(-scale); }

std::optional<Scalar> value_on(const Atom& a, const Interval& k) {
  switch (a.kind) {
    case AtomKind::Haar:
      if (a.iv.strictly_contains(k)) return haar_on_sub(a.iv, k);
      if (a.iv.disjoint(k)) return Scalar(0);
      return std::nullopt;
    case AtomKind::Indicator:
      if (a.iv.contains(k)) return Scalar(1);
      if (a.iv.disjoint(k)) return Scalar(0);
      return std::nullopt;
    case AtomKind::Tail:
      if (k.strictly_contains(a.iv)) return std::nullopt;
      return tail_value(a.iv, a.ratio, k);
  }
  return std::nullopt;
}

Scalar eval(const Atom& a, const mpq_class& x) {
  switch (a.kind) {
    case AtomKind::Haar: {
      if (!a.iv.contains_point(x)) return Scalar(0);
      const Interval sub = interval_at(a.iv.scale - 1, x);
      return haar_on_sub(a.iv, sub);
    }
    case AtomKind::Indicator:
      return a.iv.contains_point(x) ? Scalar(1) : Scalar(0);
    case AtomKind::Tail:
      return tail_value(a.iv, a.ratio, interval_at(a.iv.scale, x));
  }
  return Scalar(0);
}

Terms1 multiply(const Atom& a, const Atom& b) {
  const bool ta = a.kind == AtomKind::Tail;
  const bool tb = b.kind == AtomKind::Tail;
  if (ta && tb) return tail_times_tail(a, b);
  if (ta) return compact_times_tail(b, a);
  if (tb) return compact_times_tail(a, b);
  return compact_times_compact(a, b);
}

Scalar integral(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Haar:
      return Scalar(0);
    case AtomKind::Indicator:
      return Scalar(a.iv.length());
    case AtomKind::Tail: {
      const mpq_class two_r = 2 * a.ratio;
      if (two_r >= 1) throw Divergent("integral of tail " + a.str() + " diverges (2r >= 1)");
      return Scalar(mpq_class(a.iv.length() * two_r / (1 - two_r)));
    }
  }
  return Scalar(0);
}

Scalar inner(const Atom& a, const Atom& b) {
  // Fast paths for the pairings that dominate paraproduct evaluation.
  if (a.kind != AtomKind::Tail && b.kind != AtomKind::Tail) {
    if (a.iv.disjoint(b.iv)) return Scalar(0);
    if (a.kind == AtomKind::Haar && b.kind == AtomKind::Haar) return a.iv == b.iv ? Scalar(1) : Scalar(0);
  }
  Scalar total;
  for (const auto& [atom, c] : multiply(a, b)) {
    if (atom.kind == AtomKind::Haar) continue;
    total += c * integral(atom);
  }
  return total;
}

Scalar mean_over(const Atom& a, const Interval& k) {
  return inner(a, Atom::indicator(k)) / Scalar(k.length());
}

Terms1 riesz(const Atom& a, const ScaleParam& scale) {
  Terms1 out;
  const mpq_class len_pow = scale.length_pow_one_minus_alpha(a.iv.scale);
  switch (a.kind) {
    case AtomKind::Haar:
      push(out, a, Scalar(mpq_class(scale.c() * len_pow)));
      break;
    case AtomKind::Indicator:
      // Sub-intervals contribute c |I|^{1-a}, I itself |I|^{1-a}, ancestors the tail.
      push(out, a, Scalar(mpq_class((1 + scale.c()) * len_pow)));
      push(out, Atom::tail(a.iv, scale.mu()), Scalar(len_pow));
      break;
    case AtomKind::Tail: {
      const mpq_class rho = a.ratio / scale.lambda();
      if (rho >= 1) {
        throw Divergent("Riesz potential of " + a.str() + " diverges (ratio >= lambda)");
      }
      const mpq_class& mu = scale.mu();
      if (rho == mu) {
        throw DomainError("Riesz potential of " + a.str() + " leaves the atom algebra (ratio = 1/2)");
      }
      // sum_k r^k I(1_{J_k}) resummed into two geometric tails.
      const mpq_class coeff_rho = len_pow * ((1 + scale.c()) - mu / (mu - rho));
      const mpq_class coeff_mu = len_pow * rho / (mu - rho);
      push(out, Atom::tail(a.iv, rho), Scalar(coeff_rho));
      push(out, Atom::tail(a.iv, mu), Scalar(coeff_mu));
      break;
    }
  }
  return out;
}

}  // namespace atoms
}  // namespace dyalab
