#include "dyalab/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "dyalab/errors.hpp"

namespace dyalab {
namespace {

// Flat indices of every cell line running along `coord`.
std::vector<std::vector<std::size_t>> lines_along(const GridFunction& f, std::size_t coord) {
  std::size_t stride = 1;
  for (std::size_t j = coord + 1; j < f.dim(); ++j) stride *= f.extent(j);
  const std::size_t n = f.extent(coord);
  std::vector<std::vector<std::size_t>> lines;
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    if ((flat / stride) % n != 0) continue;
    std::vector<std::size_t> line(n);
    for (std::size_t i = 0; i < n; ++i) line[i] = flat + i * stride;
    lines.push_back(std::move(line));
  }
  return lines;
}

using Axis = std::vector<std::pair<std::size_t, Scalar>>;  // nonzero cells of one coordinate

Axis nonzero(const std::vector<Scalar>& v) {
  Axis out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_zero()) out.emplace_back(i, v[i]);
  }
  return out;
}

struct Kernel {
  Axis w;
  Axis v;
};

Kernel kernel_b(const Interval& r, const Interval& window, int cell) {
  std::vector<Scalar> w = sample_atom(Atom::indicator(r), window, cell);
  const Scalar inv(mpq_class(1 / r.length()));
  for (auto& x : w) x *= inv;
  return {nonzero(w), nonzero(sample_atom(Atom::haar(r), window, cell))};
}

Kernel kernel_d(const Interval& r, int k, const Interval& window, int cell) {
  const Interval up = r.ancestor(k);
  std::vector<Scalar> w = sample_atom(Atom::haar(up), window, cell);
  std::vector<Scalar> v = sample_atom(Atom::haar(r), window, cell);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= w[i];
  return {nonzero(w), nonzero(v)};
}

Kernel kernel_c(const Interval& r, const Interval& window, int cell) {
  std::vector<Scalar> h = sample_atom(Atom::haar(r), window, cell);
  std::vector<Scalar> v = h;
  const Scalar amp = Scalar::sqrt2_pow(-r.scale);
  for (auto& x : v) x *= amp;
  return {nonzero(h), nonzero(v)};
}

// Visits the product of sparse axes, passing the flat index and the product weight.
template <typename Fn>
void for_each_product(const GridFunction& g, const std::vector<const Axis*>& axes, Fn&& fn) {
  const std::size_t d = axes.size();
  for (const auto* a : axes) {
    if (a->empty()) return;
  }
  std::vector<std::size_t> pos(d, 0);
  std::vector<std::size_t> idx(d);
  while (true) {
    Scalar w(1);
    for (std::size_t j = 0; j < d; ++j) {
      idx[j] = (*axes[j])[pos[j]].first;
      w *= (*axes[j])[pos[j]].second;
    }
    fn(g.flatten(idx), w);
    std::size_t j = d;
    while (j-- > 0) {
      if (++pos[j] < axes[j]->size()) break;
      pos[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) return;
  }
}

}  // namespace

OracleResult riesz_oracle(const GridFunction& f, const ScaleParam& scale, const TruncationSpec& trunc,
                          std::size_t coord) {
  if (coord >= f.dim()) throw DomainError("riesz_oracle: coordinate out of range");
  const int cell = f.cell_scale()[coord];
  const int top = f.window().sides[coord].scale;
  if (trunc.s_min > cell || trunc.s_max < top) {
    throw DomainError("riesz_oracle: truncation must cover the cell and window scales");
  }
  const mpq_class& lam = scale.lambda();
  const mpq_class cell_len = pow2(cell);
  // Levels finer than a cell see a constant value: sum_s lambda^{-s}.
  mpq_class fine = 0;
  for (int s = trunc.s_min; s < cell; ++s) fine += pow_q(lam, -s);

  OracleResult res{GridFunction(f.window(), f.cell_scale()), 0.0};
  double sup = 0;
  double max_line_integral = 0;
  for (const auto& line : lines_along(f, coord)) {
    const std::size_t n = line.size();
    for (std::size_t i = 0; i < n; ++i) {
      res.value[line[i]] += f[line[i]] * Scalar(fine);
      sup = std::max(sup, std::abs(f[line[i]].to_double()));
    }
    for (int s = cell; s <= top; ++s) {
      const std::size_t block = std::size_t{1} << (s - cell);
      const Scalar weight(mpq_class(cell_len * scale.length_pow_minus_alpha(s)));
      for (std::size_t start = 0; start < n; start += block) {
        Scalar mass;
        for (std::size_t i = start; i < start + block; ++i) mass += f[line[i]];
        mass *= weight;
        for (std::size_t i = start; i < start + block; ++i) res.value[line[i]] += mass;
      }
    }
    Scalar total;
    for (std::size_t i = 0; i < n; ++i) total += f[line[i]];
    total *= Scalar(cell_len);
    max_line_integral = std::max(max_line_integral, std::abs(total.to_double()));
    Scalar above;
    for (int s = top + 1; s <= trunc.s_max; ++s) above += Scalar(scale.length_pow_minus_alpha(s));
    above *= total;
    for (std::size_t i = 0; i < n; ++i) res.value[line[i]] += above;
  }
  const double l = lam.get_d();
  const double mu = scale.mu().get_d();
  res.tail_bound = sup * std::pow(l, 1 - trunc.s_min) / (1 - l) +
                   max_line_integral * std::pow(mu, trunc.s_max + 1) / (1 - mu);
  return res;
}

double exterior_tail_bound(const ScaleParam& scale, int window_scale) {
  const double mu = scale.mu().get_d();
  return std::pow(mu, window_scale + 1) / (1 - mu);
}

GridFunction para_oracle(const ParaOracleSpec& spec, const HaarCoefficients& b, const GridFunction& f) {
  const std::size_t d = f.dim();
  if ((spec.kind == ParaKind::C || spec.kind == ParaKind::D) && d != 1) {
    throw DomainError("para_oracle: C and D_k are one-dimensional");
  }
  if (spec.kind == ParaKind::E && (spec.in_b.size() != d || spec.shift.size() != d)) {
    throw DomainError("para_oracle: E needs a block choice per coordinate");
  }
  GridFunction out(f.window(), f.cell_scale());
  const Scalar vol(f.cell_volume());
  for (const auto& [r, coeff] : b) {
    if (r.dim() != d) throw DomainError("para_oracle: symbol dimension mismatch");
    std::vector<Kernel> ker;
    for (std::size_t j = 0; j < d; ++j) {
      const Interval& w = f.window().sides[j];
      const int cell = f.cell_scale()[j];
      switch (spec.kind) {
        case ParaKind::B:
          ker.push_back(kernel_b(r.sides[j], w, cell));
          break;
        case ParaKind::C:
          ker.push_back(kernel_c(r.sides[j], w, cell));
          break;
        case ParaKind::D:
          ker.push_back(kernel_d(r.sides[j], spec.k, w, cell));
          break;
        case ParaKind::E:
          ker.push_back(spec.in_b[j] ? kernel_b(r.sides[j], w, cell) : kernel_d(r.sides[j], spec.shift[j], w, cell));
          break;
      }
    }
    std::vector<const Axis*> ws;
    std::vector<const Axis*> vs;
    for (const auto& k : ker) {
      ws.push_back(&k.w);
      vs.push_back(&k.v);
    }
    Scalar pairing;
    for_each_product(f, ws, [&](std::size_t flat, const Scalar& w) { pairing += f[flat] * w; });
    if (pairing.is_zero()) continue;
    const Scalar amount = coeff * pairing * vol;
    for_each_product(out, vs, [&](std::size_t flat, const Scalar& v) { out[flat] += amount * v; });
  }
  return out;
}

std::vector<ConvergenceRow> convergence_study(const GridFunction& f, const GridFunction& closed,
                                              const ScaleParam& scale, const std::vector<int>& depths,
                                              std::size_t coord) {
  if (!f.same_layout(closed)) throw DomainError("convergence_study: grid layouts differ");
  std::vector<ConvergenceRow> rows;
  for (int depth : depths) {
    const TruncationSpec trunc{f.cell_scale()[coord] - depth, f.window().sides[coord].scale + depth};
    const OracleResult o = riesz_oracle(f, scale, trunc, coord);
    ConvergenceRow row;
    row.depth = depth;
    row.tail_bound = o.tail_bound;
    for (std::size_t i = 0; i < f.size(); ++i) {
      row.error = std::max(row.error, std::abs((o.value[i] - closed[i]).to_double()));
    }
    if (!rows.empty() && rows.back().error > 0 && row.error > 0) {
      row.ratio = std::pow(row.error / rows.back().error, 1.0 / (depth - rows.back().depth));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dyalab
