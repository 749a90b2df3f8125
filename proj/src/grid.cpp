#include "dyalab/grid.hpp"

#include <bit>

#include "dyalab/errors.hpp"

namespace dyalab {
namespace {

Interval heap_interval(const Interval& w, std::size_t k) {
  const int level = static_cast<int>(std::bit_width(k)) - 1;
  const std::int64_t first = std::int64_t{1} << level;
  return {w.scale - level, w.pos * first + static_cast<std::int64_t>(k) - first};
}

std::size_t heap_index(const Interval& w, const Interval& i) {
  if (!w.contains(i)) throw DomainError("Haar index " + i.str() + " lies outside window side " + w.str());
  const int level = w.scale - i.scale;
  const std::int64_t first = std::int64_t{1} << level;
  return static_cast<std::size_t>(first + i.pos - w.pos * first);
}

// In place: cell values -> [h^1_W coefficient, Haar coefficients in heap order].
void forward_1d(std::vector<Scalar>& v, const Interval& w) {
  const std::size_t n = v.size();
  std::vector<Scalar> out(n);
  std::vector<Scalar> means = v;
  int scale = w.scale - static_cast<int>(std::bit_width(n)) + 1;
  for (std::size_t m = n; m > 1; m /= 2) {
    ++scale;
    const Scalar root = Scalar::sqrt2_pow(scale) * Scalar(mpq_class(1, 2));
    const std::size_t half = m / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const Scalar& left = means[2 * k];
      const Scalar& right = means[2 * k + 1];
      out[half + k] = root * (right - left);
      means[k] = (left + right) * Scalar(mpq_class(1, 2));
    }
  }
  out[0] = Scalar::sqrt2_pow(w.scale) * means[0];
  v = std::move(out);
}

void inverse_1d(std::vector<Scalar>& v, const Interval& w) {
  const std::size_t n = v.size();
  std::vector<Scalar> means(n);
  means[0] = Scalar::sqrt2_pow(-w.scale) * v[0];
  int scale = w.scale;
  for (std::size_t m = 1; m < n; m *= 2) {
    const Scalar amp = Scalar::sqrt2_pow(-scale);
    for (std::size_t k = m; k-- > 0;) {
      const Scalar mean = means[k];
      const Scalar step = amp * v[m + k];
      means[2 * k] = mean - step;
      means[2 * k + 1] = mean + step;
    }
    --scale;
  }
  v = std::move(means);
}

template <typename Fn>
void for_each_fiber(GridFunction& g, std::size_t axis, Fn&& fn) {
  std::size_t stride = 1;
  for (std::size_t j = g.dim(); j-- > axis + 1;) stride *= g.extent(j);
  const std::size_t n = g.extent(axis);
  const std::size_t block = stride * n;
  std::vector<Scalar> fiber(n);
  for (std::size_t base = 0; base < g.size(); base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      for (std::size_t i = 0; i < n; ++i) fiber[i] = g[base + off + i * stride];
      fn(fiber);
      for (std::size_t i = 0; i < n; ++i) g[base + off + i * stride] = fiber[i];
    }
  }
}

}  // namespace

GridFunction::GridFunction(Rectangle window, std::vector<int> cell_scale)
    : window_(std::move(window)), cell_scale_(std::move(cell_scale)) {
  if (cell_scale_.size() != window_.dim()) throw DomainError("grid: cell scale count does not match window");
  std::size_t total = 1;
  for (std::size_t j = 0; j < window_.dim(); ++j) {
    const int levels = window_.sides[j].scale - cell_scale_[j];
    if (levels < 0) throw DomainError("grid: cells larger than the window");
    if (levels > 24) throw DomainError("grid: more than 2^24 cells along one coordinate");
    extent_.push_back(std::size_t{1} << levels);
    total *= extent_.back();
  }
  cells_.assign(total, Scalar());
}

mpq_class GridFunction::cell_volume() const {
  long s = 0;
  for (int c : cell_scale_) s += c;
  return pow2(s);
}

std::vector<std::size_t> GridFunction::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(dim());
  for (std::size_t j = dim(); j-- > 0;) {
    idx[j] = flat % extent_[j];
    flat /= extent_[j];
  }
  return idx;
}

std::size_t GridFunction::flatten(const std::vector<std::size_t>& idx) const {
  std::size_t flat = 0;
  for (std::size_t j = 0; j < dim(); ++j) flat = flat * extent_[j] + idx[j];
  return flat;
}

Interval GridFunction::cell_interval(std::size_t j, std::size_t i) const {
  const Interval& w = window_.sides[j];
  const int levels = w.scale - cell_scale_[j];
  return {cell_scale_[j], (w.pos << levels) + static_cast<std::int64_t>(i)};
}

Rectangle GridFunction::cell_rect(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Rectangle r;
  for (std::size_t j = 0; j < dim(); ++j) r.sides.push_back(cell_interval(j, idx[j]));
  return r;
}

std::vector<double> GridFunction::to_doubles() const {
  std::vector<double> out;
  out.reserve(cells_.size());
  for (const auto& c : cells_) out.push_back(c.to_double());
  return out;
}

std::vector<int> uniform_cells(std::size_t dim, int resolution) { return std::vector<int>(dim, -resolution); }

std::vector<Scalar> sample_atom(const Atom& a, const Interval& window, int cell_scale) {
  const int levels = window.scale - cell_scale;
  const std::size_t n = std::size_t{1} << levels;
  std::vector<Scalar> out(n);
  // Compact atoms vanish away from their interval; only touch overlapping cells.
  std::size_t lo = 0;
  std::size_t hi = n;
  if (a.kind != AtomKind::Tail) {
    if (a.iv.disjoint(window)) return out;
    if (window.strictly_contains(a.iv)) {
      if (a.iv.scale < cell_scale) {
        throw ResolutionTooCoarse("atom " + a.str() + " is finer than grid cells of scale " +
                                  std::to_string(cell_scale));
      }
      const Interval first = a.iv.scale == cell_scale ? a.iv : Interval{cell_scale, a.iv.pos << (a.iv.scale - cell_scale)};
      lo = static_cast<std::size_t>(first.pos - (window.pos << levels));
      hi = lo + (std::size_t{1} << (a.iv.scale - cell_scale));
    }
  }
  for (std::size_t i = lo; i < hi; ++i) {
    const Interval cell{cell_scale, (window.pos << levels) + static_cast<std::int64_t>(i)};
    auto v = atoms::value_on(a, cell);
    if (!v) {
      throw ResolutionTooCoarse("atom " + a.str() + " is not constant on cell " + cell.str());
    }
    out[i] = std::move(*v);
  }
  return out;
}

GridFunction to_grid(const DyadicFunction& f, const Rectangle& window, const std::vector<int>& cell_scale) {
  if (f.dim() != window.dim()) throw DomainError("to_grid: dimension mismatch");
  GridFunction g(window, cell_scale);
  const std::size_t d = f.dim();
  std::map<Atom, std::vector<std::pair<std::size_t, Scalar>>> cache[8];
  if (d > 8) throw DomainError("to_grid: dimension above 8");
  std::vector<const std::vector<std::pair<std::size_t, Scalar>>*> per(d);
  std::vector<std::size_t> pos(d);
  for (const auto& [factors, coeff] : f.terms()) {
    bool empty = false;
    for (std::size_t j = 0; j < d; ++j) {
      auto it = cache[j].find(factors[j]);
      if (it == cache[j].end()) {
        std::vector<std::pair<std::size_t, Scalar>> nz;
        auto vals = sample_atom(factors[j], window.sides[j], cell_scale[j]);
        for (std::size_t i = 0; i < vals.size(); ++i) {
          if (!vals[i].is_zero()) nz.emplace_back(i, std::move(vals[i]));
        }
        it = cache[j].emplace(factors[j], std::move(nz)).first;
      }
      per[j] = &it->second;
      if (per[j]->empty()) empty = true;
    }
    if (empty) continue;
    // Odometer over the nonzero cells of each factor.
    std::fill(pos.begin(), pos.end(), 0);
    while (true) {
      Scalar v = coeff;
      std::size_t flat = 0;
      for (std::size_t j = 0; j < d; ++j) {
        const auto& [i, val] = (*per[j])[pos[j]];
        v *= val;
        flat = flat * g.extent(j) + i;
      }
      g[flat] += v;
      std::size_t j = d;
      while (j-- > 0) {
        if (++pos[j] < per[j]->size()) break;
        pos[j] = 0;
      }
      if (j == static_cast<std::size_t>(-1)) break;
    }
  }
  return g;
}

HaarAnalysis haar_analyze(const GridFunction& f) {
  GridFunction g = f;
  for (std::size_t axis = 0; axis < g.dim(); ++axis) {
    const Interval w = g.window().sides[axis];
    for_each_fiber(g, axis, [&](std::vector<Scalar>& fiber) { forward_1d(fiber, w); });
  }
  HaarAnalysis out;
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    if (g[flat].is_zero()) continue;
    const auto idx = g.unflatten(flat);
    HaarIndex h;
    for (std::size_t j = 0; j < g.dim(); ++j) {
      const Interval& w = g.window().sides[j];
      h.rect.sides.push_back(idx[j] == 0 ? w : heap_interval(w, idx[j]));
      h.eps.push_back(idx[j] == 0 ? 1 : 0);
    }
    out.emplace(std::move(h), g[flat]);
  }
  return out;
}

GridFunction haar_synthesize(const HaarAnalysis& coeffs, const Rectangle& window,
                             const std::vector<int>& cell_scale) {
  GridFunction g(window, cell_scale);
  std::vector<std::size_t> idx(g.dim());
  for (const auto& [h, c] : coeffs) {
    if (h.rect.dim() != g.dim()) throw DomainError("haar_synthesize: index dimension mismatch");
    for (std::size_t j = 0; j < g.dim(); ++j) {
      const Interval& w = window.sides[j];
      if (h.eps[j] == 1) {
        if (h.rect.sides[j] != w) throw DomainError("haar_synthesize: h^1 factor must be the window side");
        idx[j] = 0;
      } else {
        if (h.rect.sides[j].scale <= cell_scale[j]) {
          throw ResolutionTooCoarse("haar_synthesize: " + h.str() + " is finer than the grid");
        }
        idx[j] = heap_index(w, h.rect.sides[j]);
      }
    }
    g[g.flatten(idx)] += c;
  }
  for (std::size_t axis = 0; axis < g.dim(); ++axis) {
    const Interval w = window.sides[axis];
    for_each_fiber(g, axis, [&](std::vector<Scalar>& fiber) { inverse_1d(fiber, w); });
  }
  return g;
}

}  // namespace dyalab
