#include "dyalab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "dyalab/errors.hpp"
#include "dyalab/random.hpp"

namespace dyalab {
namespace {

double scalar_sqrt(const Scalar& s) { return std::sqrt(std::max(0.0, s.to_double())); }

// Packed cell sets over the compressed grid spanned by a rectangle family.
using Bits = std::vector<std::uint64_t>;

struct CompressedFamily {
  std::size_t dim = 0;
  std::vector<std::vector<mpq_class>> breaks;  // per axis, sorted
  std::vector<std::size_t> extent;              // segments per axis
  std::vector<std::int64_t> cell_units;         // volume of each cell in units
  mpq_class unit;                               // volume of one unit
  std::vector<Bits> masks;                      // cells covered by each rectangle
  std::size_t words = 0;

  explicit CompressedFamily(const std::vector<Rectangle>& rects) {
    dim = rects.empty() ? 0 : rects.front().dim();
    breaks.resize(dim);
    extent.resize(dim);
    std::vector<int> min_scale(dim, 0);
    for (std::size_t j = 0; j < dim; ++j) {
      std::set<mpq_class> pts;
      for (const auto& r : rects) {
        pts.insert(r.sides[j].left());
        pts.insert(r.sides[j].right());
        min_scale[j] = &r == &rects.front() ? r.sides[j].scale : std::min(min_scale[j], r.sides[j].scale);
      }
      breaks[j].assign(pts.begin(), pts.end());
      extent[j] = breaks[j].size() - 1;
    }
    std::size_t cells = 1;
    for (std::size_t j = 0; j < dim; ++j) cells *= extent[j];
    if (cells > (std::size_t{1} << 24)) throw DomainError("product BMO search: compressed grid too large");
    unit = 1;
    std::vector<std::vector<std::int64_t>> seg(dim);
    double log_range = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      const mpq_class u = pow2(min_scale[j]);
      unit *= u;
      log_range += std::log2(mpq_class((breaks[j].back() - breaks[j].front()) / u).get_d());
      for (std::size_t i = 0; i < extent[j]; ++i) {
        seg[j].push_back(mpq_class((breaks[j][i + 1] - breaks[j][i]) / u).get_num().get_si());
      }
    }
    if (log_range > 62) throw DomainError("product BMO search: scale range exceeds 64-bit cell units");
    cell_units.assign(cells, 1);
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t rest = c;
      for (std::size_t j = dim; j-- > 0;) {
        cell_units[c] *= seg[j][rest % extent[j]];
        rest /= extent[j];
      }
    }
    words = (cells + 63) / 64;
    for (const auto& r : rects) {
      Bits m(words, 0);
      std::vector<std::size_t> lo(dim);
      std::vector<std::size_t> hi(dim);
      for (std::size_t j = 0; j < dim; ++j) {
        lo[j] = std::lower_bound(breaks[j].begin(), breaks[j].end(), r.sides[j].left()) - breaks[j].begin();
        hi[j] = std::lower_bound(breaks[j].begin(), breaks[j].end(), r.sides[j].right()) - breaks[j].begin();
      }
      std::vector<std::size_t> idx = lo;
      while (true) {
        std::size_t flat = 0;
        for (std::size_t j = 0; j < dim; ++j) flat = flat * extent[j] + idx[j];
        m[flat / 64] |= std::uint64_t{1} << (flat % 64);
        std::size_t j = dim;
        while (j-- > 0) {
          if (++idx[j] < hi[j]) break;
          idx[j] = lo[j];
        }
        if (j == static_cast<std::size_t>(-1)) break;
      }
      masks.push_back(std::move(m));
    }
  }

  std::int64_t measure(const Bits& u) const {
    std::int64_t total = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t bits = u[w];
      while (bits) {
        const int b = __builtin_ctzll(bits);
        total += cell_units[w * 64 + b];
        bits &= bits - 1;
      }
    }
    return total;
  }

  bool inside(std::size_t r, const Bits& u) const {
    for (std::size_t w = 0; w < words; ++w) {
      if (masks[r][w] & ~u[w]) return false;
    }
    return true;
  }
};

struct UnionCandidate {
  Scalar mass;
  std::int64_t units = 0;
  std::vector<std::size_t> members;  // rectangles contained in the union
};

// a.mass / a.units > b.mass / b.units, exactly.
bool better(const UnionCandidate& a, const UnionCandidate& b) {
  if (b.units == 0) return a.units > 0 && a.mass.sign() > 0;
  if (a.units == 0) return false;
  return a.mass * Scalar(b.units) > b.mass * Scalar(a.units);
}

UnionCandidate evaluate(const CompressedFamily& fam, const std::vector<Scalar>& weights, const Bits& u) {
  UnionCandidate c;
  c.units = fam.measure(u);
  for (std::size_t r = 0; r < weights.size(); ++r) {
    if (fam.inside(r, u)) {
      c.mass += weights[r];
      c.members.push_back(r);
    }
  }
  return c;
}

struct UnionSearchResult {
  UnionCandidate best;
  mpq_class unit;
  std::string method;
  std::size_t evaluations = 0;
};

UnionSearchResult search_unions(const std::vector<Rectangle>& rects, const std::vector<Scalar>& weights,
                                const ProductSearch& search) {
  UnionSearchResult res;
  res.method = "exact-enumeration";
  if (rects.empty()) return res;
  CompressedFamily fam(rects);
  res.unit = fam.unit;
  const std::size_t n = rects.size();
  if (n <= search.exact_cap) {
    for (std::size_t subset = 1; subset < (std::size_t{1} << n); ++subset) {
      Bits u(fam.words, 0);
      for (std::size_t r = 0; r < n; ++r) {
        if (subset >> r & 1) {
          for (std::size_t w = 0; w < fam.words; ++w) u[w] |= fam.masks[r][w];
        }
      }
      UnionCandidate c = evaluate(fam, weights, u);
      ++res.evaluations;
      if (better(c, res.best)) res.best = std::move(c);
    }
    return res;
  }
  // Greedy growth from several starts; restart 0 begins at the best single rectangle.
  res.method = "greedy";
  for (int restart = 0; restart < search.restarts && res.evaluations < search.budget; ++restart) {
    std::size_t start = 0;
    if (restart == 0) {
      UnionCandidate single;
      for (std::size_t r = 0; r < n; ++r) {
        UnionCandidate c = evaluate(fam, weights, fam.masks[r]);
        ++res.evaluations;
        if (better(c, single)) {
          single = std::move(c);
          start = r;
        }
      }
    } else {
      Pcg32 rng(search.seed, static_cast<std::uint64_t>(restart));
      start = rng.below(static_cast<std::uint32_t>(n));
    }
    Bits u = fam.masks[start];
    UnionCandidate cur = evaluate(fam, weights, u);
    if (better(cur, res.best)) res.best = cur;
    while (cur.members.size() < n && res.evaluations < search.budget) {
      UnionCandidate step;
      Bits step_u;
      bool found = false;
      for (std::size_t r = 0; r < n; ++r) {
        if (fam.inside(r, u)) continue;
        Bits v = u;
        for (std::size_t w = 0; w < fam.words; ++w) v[w] |= fam.masks[r][w];
        UnionCandidate c = evaluate(fam, weights, v);
        ++res.evaluations;
        if (!found || better(c, step)) {
          step = std::move(c);
          step_u = std::move(v);
          found = true;
        }
      }
      if (!found) break;
      u = std::move(step_u);
      cur = std::move(step);
      if (better(cur, res.best)) res.best = cur;
    }
  }
  return res;
}

std::vector<std::pair<Rectangle, Scalar>> support(const HaarCoefficients& b) {
  std::vector<std::pair<Rectangle, Scalar>> out;
  for (const auto& [r, c] : b) {
    if (!c.is_zero()) out.emplace_back(r, c);
  }
  return out;
}

std::size_t dim_of(const HaarCoefficients& b) { return b.empty() ? 0 : b.begin()->first.dim(); }

// Tie-break order for witnesses: smaller total scale first, then position.
bool witness_before(const Rectangle& a, const Rectangle& b) {
  if (a.scale_sum() != b.scale_sum()) return a.scale_sum() < b.scale_sum();
  return a < b;
}

NormReport from_ratio(const Scalar& ratio, std::vector<Rectangle> witness) {
  NormReport rep;
  rep.squared = ratio;
  rep.value = scalar_sqrt(ratio);
  rep.witness = std::move(witness);
  return rep;
}

std::vector<double> breakpoints(const Atom& a, const Interval& w) {
  std::vector<mpq_class> pts{a.iv.left(), a.iv.right()};
  if (a.kind == AtomKind::Haar) pts.push_back((a.iv.left() + a.iv.right()) / 2);
  if (a.kind == AtomKind::Tail) {
    Interval anc = a.iv;
    for (int k = 0; k < 400 && !anc.contains(w) && anc.nonnegative() == a.iv.nonnegative(); ++k) {
      anc = anc.parent();
      pts.push_back(anc.left());
      pts.push_back(anc.right());
    }
  }
  std::vector<double> out;
  for (const auto& p : pts) {
    if (p > w.left() && p < w.right()) out.push_back(p.get_d());
  }
  return out;
}

}  // namespace

double lp_norm(const GridFunction& f, double p) {
  if (p < 1) throw DomainError("lp_norm: p must be at least 1");
  if (std::isinf(p)) {
    double m = 0;
    for (const auto& c : f.cells()) m = std::max(m, std::abs(c.to_double()));
    return m;
  }
  if (p == 2) {
    Scalar total;
    for (const auto& c : f.cells()) total += c * c;
    return scalar_sqrt(total * Scalar(f.cell_volume()));
  }
  double total = 0;
  for (const auto& c : f.cells()) total += std::pow(std::abs(c.to_double()), p);
  return std::pow(total * f.cell_volume().get_d(), 1.0 / p);
}

double lp_norm_adaptive(const DyadicFunction& f, const Rectangle& window, double p) {
  const std::size_t d = f.dim();
  if (window.dim() != d) throw DomainError("lp_norm_adaptive: dimension mismatch");
  std::vector<std::vector<double>> cuts(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::set<double> pts{window.sides[j].left().get_d(), window.sides[j].right().get_d()};
    for (const auto& [factors, c] : f.terms()) {
      for (double x : breakpoints(factors[j], window.sides[j])) pts.insert(x);
    }
    cuts[j].assign(pts.begin(), pts.end());
  }
  std::vector<std::size_t> extent(d);
  std::size_t cells = 1;
  for (std::size_t j = 0; j < d; ++j) {
    extent[j] = cuts[j].size() - 1;
    cells *= extent[j];
  }
  if (cells > (std::size_t{1} << 26)) throw DomainError("lp_norm_adaptive: partition too fine");
  std::vector<double> values(cells, 0.0);
  std::vector<std::map<Atom, std::vector<double>>> cache(d);
  std::vector<const std::vector<double>*> per(d);
  for (const auto& [factors, c] : f.terms()) {
    for (std::size_t j = 0; j < d; ++j) {
      auto it = cache[j].find(factors[j]);
      if (it == cache[j].end()) {
        std::vector<double> v(extent[j]);
        for (std::size_t i = 0; i < extent[j]; ++i) {
          v[i] = atoms::eval(factors[j], mpq_class(cuts[j][i])).to_double();
        }
        it = cache[j].emplace(factors[j], std::move(v)).first;
      }
      per[j] = &it->second;
    }
    const double coeff = c.to_double();
    for (std::size_t cell = 0; cell < cells; ++cell) {
      std::size_t rest = cell;
      double v = coeff;
      for (std::size_t j = d; j-- > 0 && v != 0.0;) {
        v *= (*per[j])[rest % extent[j]];
        rest /= extent[j];
      }
      values[cell] += v;
    }
  }
  double total = 0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t rest = cell;
    double vol = 1;
    for (std::size_t j = d; j-- > 0;) {
      const std::size_t i = rest % extent[j];
      vol *= cuts[j][i + 1] - cuts[j][i];
      rest /= extent[j];
    }
    const double a = std::abs(values[cell]);
    if (std::isinf(p)) {
      total = std::max(total, a);
    } else {
      total += std::pow(a, p) * vol;
    }
  }
  return std::isinf(p) ? total : std::pow(total, 1.0 / p);
}

NormReport bmo_dyadic(const HaarCoefficients& b) {
  if (dim_of(b) > 1) throw DomainError("bmo_dyadic: one-dimensional symbols only");
  const auto supp = support(b);
  Scalar best;
  Rectangle witness;
  bool have = false;
  for (const auto& [j, cj] : supp) {
    Scalar mass;
    for (const auto& [r, c] : supp) {
      if (j.sides[0].contains(r.sides[0])) mass += c * c;
    }
    const Scalar ratio = mass / Scalar(j.volume());
    if (!have || ratio > best || (ratio == best && witness_before(j, witness))) {
      best = ratio;
      witness = j;
      have = true;
    }
  }
  NormReport rep = from_ratio(best, have ? std::vector<Rectangle>{witness} : std::vector<Rectangle>{});
  rep.budget_used = supp.size();
  return rep;
}

NormReport bmo_dyadic(const DyadicFunction& b) { return bmo_dyadic(haar_coefficients(b)); }

NormReport bmo_product(const HaarCoefficients& b, const ProductSearch& search) {
  const auto supp = support(b);
  std::vector<Rectangle> rects;
  std::vector<Scalar> weights;
  for (const auto& [r, c] : supp) {
    rects.push_back(r);
    weights.push_back(c * c);
  }
  UnionSearchResult res = search_unions(rects, weights, search);
  NormReport rep;
  rep.method = res.method;
  rep.budget_used = res.evaluations;
  if (res.best.units == 0) return rep;
  rep.squared = res.best.mass / Scalar(mpq_class(res.unit * res.best.units));
  rep.value = scalar_sqrt(rep.squared);
  for (std::size_t r : res.best.members) rep.witness.push_back(rects[r]);
  return rep;
}

NormReport bmo_product(const DyadicFunction& b, const ProductSearch& search) {
  return bmo_product(haar_coefficients(b), search);
}

NormReport bmo_rect(const HaarCoefficients& b) {
  const auto supp = support(b);
  const std::size_t d = dim_of(b);
  std::vector<std::vector<Interval>> sides(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::set<Interval> s;
    for (const auto& [r, c] : supp) s.insert(r.sides[j]);
    sides[j].assign(s.begin(), s.end());
  }
  NormReport rep;
  if (supp.empty()) return rep;
  Scalar best;
  Rectangle witness;
  bool have = false;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    Rectangle s;
    for (std::size_t j = 0; j < d; ++j) s.sides.push_back(sides[j][idx[j]]);
    Scalar mass;
    for (const auto& [r, c] : supp) {
      if (s.contains(r)) mass += c * c;
    }
    ++rep.budget_used;
    if (!mass.is_zero()) {
      const Scalar ratio = mass / Scalar(s.volume());
      if (!have || ratio > best || (ratio == best && witness_before(s, witness))) {
        best = ratio;
        witness = s;
        have = true;
      }
    }
    std::size_t j = d;
    while (j-- > 0) {
      if (++idx[j] < sides[j].size()) break;
      idx[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  const std::size_t used = rep.budget_used;
  rep = from_ratio(best, {witness});
  rep.budget_used = used;
  return rep;
}

NormReport bmo_rect(const DyadicFunction& b) { return bmo_rect(haar_coefficients(b)); }

NormReport bmo_restricted(const HaarCoefficients& b, const std::vector<bool>& in_b, const ProductSearch& search) {
  const auto supp = support(b);
  const std::size_t d = dim_of(b);
  NormReport rep;
  if (supp.empty()) return rep;
  if (in_b.size() != d) throw DomainError("bmo_restricted: coordinate mask does not match dimension");
  // Group by the frozen sides; each group is a product search over the free sides.
  std::map<std::vector<Interval>, std::vector<std::pair<Rectangle, Scalar>>> groups;
  for (const auto& [r, c] : supp) {
    std::vector<Interval> frozen;
    Rectangle free;
    for (std::size_t j = 0; j < d; ++j) {
      if (in_b[j]) {
        free.sides.push_back(r.sides[j]);
      } else {
        frozen.push_back(r.sides[j]);
      }
    }
    groups[frozen].emplace_back(free, c * c);
  }
  Scalar best;
  bool have = false;
  std::string method = "exact-enumeration";
  for (const auto& [frozen, members] : groups) {
    mpq_class frozen_volume = 1;
    for (const auto& i : frozen) frozen_volume *= i.length();
    std::vector<Rectangle> witness;
    Scalar ratio;
    if (members.front().first.dim() == 0) {
      ratio = members.front().second / Scalar(frozen_volume);
      ++rep.budget_used;
    } else {
      std::vector<Rectangle> rects;
      std::vector<Scalar> weights;
      for (const auto& [r, w] : members) {
        rects.push_back(r);
        weights.push_back(w);
      }
      UnionSearchResult res = search_unions(rects, weights, search);
      rep.budget_used += res.evaluations;
      if (res.method != "exact-enumeration") method = res.method;
      if (res.best.units == 0) continue;
      ratio = res.best.mass / Scalar(mpq_class(res.unit * res.best.units * frozen_volume));
      for (std::size_t m : res.best.members) witness.push_back(rects[m]);
    }
    if (!have || ratio > best) {
      best = ratio;
      have = true;
      rep.witness.clear();
      for (const auto& w : witness) {
        Rectangle full;
        std::size_t fi = 0;
        std::size_t di = 0;
        for (std::size_t j = 0; j < d; ++j) full.sides.push_back(in_b[j] ? w.sides[fi++] : frozen[di++]);
        rep.witness.push_back(std::move(full));
      }
      if (witness.empty()) {
        for (const auto& [r, c] : supp) {
          std::vector<Interval> fr;
          for (std::size_t j = 0; j < d; ++j) {
            if (!in_b[j]) fr.push_back(r.sides[j]);
          }
          if (fr == frozen) rep.witness.push_back(r);
        }
      }
    }
  }
  rep.squared = best;
  rep.value = scalar_sqrt(best);
  rep.method = method;
  return rep;
}

NormReport bmo_restricted(const DyadicFunction& b, const std::vector<bool>& in_b, const ProductSearch& search) {
  return bmo_restricted(haar_coefficients(b), in_b, search);
}

NormReport sup_haar_ratio(const HaarCoefficients& b) {
  Scalar best;
  Rectangle witness;
  bool have = false;
  for (const auto& [r, c] : support(b)) {
    const Scalar ratio = c * c / Scalar(r.volume());
    if (!have || ratio > best || (ratio == best && witness_before(r, witness))) {
      best = ratio;
      witness = r;
      have = true;
    }
  }
  NormReport rep = from_ratio(best, have ? std::vector<Rectangle>{witness} : std::vector<Rectangle>{});
  rep.budget_used = b.size();
  return rep;
}

NormReport sup_haar_ratio(const DyadicFunction& b) { return sup_haar_ratio(haar_coefficients(b)); }

double square_function(const GridFunction& f, double p) {
  const HaarAnalysis coeffs = haar_analyze(f);
  if (p == 2) {
    Scalar total;
    for (const auto& [idx, c] : coeffs) total += c * c;
    return scalar_sqrt(total);
  }
  std::vector<double> s2(f.size(), 0.0);
  for (const auto& [idx, c] : coeffs) {
    const double w = (c * c).to_double() / idx.rect.volume().get_d();
    // Cells of the grid inside idx.rect form a box in index space.
    std::vector<std::size_t> lo(f.dim());
    std::vector<std::size_t> hi(f.dim());
    for (std::size_t j = 0; j < f.dim(); ++j) {
      const Interval& side = idx.rect.sides[j];
      const int levels = f.window().sides[j].scale - f.cell_scale()[j];
      const int below = side.scale - f.cell_scale()[j];
      lo[j] = static_cast<std::size_t>((side.pos << below) - (f.window().sides[j].pos << levels));
      hi[j] = lo[j] + (std::size_t{1} << below);
    }
    std::vector<std::size_t> i = lo;
    while (true) {
      s2[f.flatten(i)] += w;
      std::size_t j = f.dim();
      while (j-- > 0) {
        if (++i[j] < hi[j]) break;
        i[j] = lo[j];
      }
      if (j == static_cast<std::size_t>(-1)) break;
    }
  }
  const double vol = f.cell_volume().get_d();
  double total = 0;
  for (double v : s2) {
    const double s = std::sqrt(v);
    if (std::isinf(p)) {
      total = std::max(total, s);
    } else {
      total += std::pow(s, p) * vol;
    }
  }
  return std::isinf(p) ? total : std::pow(total, 1.0 / p);
}

std::pair<double, double> jn_profile(const DyadicFunction& b, const Interval& j, double p, double q) {
  if (b.dim() != 1) throw DomainError("jn_profile: one-dimensional symbols only");
  DyadicFunction local(1);
  int finest = j.scale;
  for (const auto& [r, c] : haar_coefficients(b)) {
    if (j.contains(r.sides[0])) {
      local += DyadicFunction::haar(r) * c;
      finest = std::min(finest, r.sides[0].scale);
    }
  }
  if (local.is_zero()) return {0.0, 0.0};
  const GridFunction g = to_grid(local, Rectangle{{j}}, {finest - 1});
  const double len = j.length().get_d();
  return {std::pow(len, -1.0 / p) * lp_norm(g, p), std::pow(len, -1.0 / q) * lp_norm(g, q)};
}

mpq_class union_measure(const std::vector<Rectangle>& rects) {
  if (rects.empty()) return 0;
  CompressedFamily fam(rects);
  Bits u(fam.words, 0);
  for (const auto& m : fam.masks) {
    for (std::size_t w = 0; w < fam.words; ++w) u[w] |= m[w];
  }
  return fam.unit * fam.measure(u);
}

}  // namespace dyalab
