#include "dyalab/normest.hpp"

#include <algorithm>
#include <cmath>

#include "dyalab/errors.hpp"
#include "dyalab/oracle.hpp"
#include "dyalab/random.hpp"

namespace dyalab {
namespace {

constexpr std::size_t kExactEntries = std::size_t{1} << 20;

void riesz_bounds(const OperatorSpec& spec, const Rectangle& window, double& bound) {
  switch (spec.kind) {
    case OperatorSpec::Kind::Riesz:
      bound = std::max(bound, exterior_tail_bound(spec.scales.at(0), window.sides.at(spec.coord).scale));
      break;
    case OperatorSpec::Kind::Commutator:
      for (std::size_t j = 0; j < spec.scales.size(); ++j) {
        bound = std::max(bound, exterior_tail_bound(spec.scales[j], window.sides.at(j).scale));
      }
      break;
    case OperatorSpec::Kind::Compose:
      for (const auto& part : spec.parts) riesz_bounds(part, window, bound);
      break;
    default:
      break;
  }
}

std::vector<double> apply_t(const TruncatedOperator& t, const std::vector<double>& x) {
  std::vector<double> y(t.n, 0.0);
  for (std::size_t r = 0; r < t.n; ++r) {
    const double* row = &t.matrix[r * t.n];
    double s = 0;
    for (std::size_t c = 0; c < t.n; ++c) s += row[c] * x[c];
    y[r] = s;
  }
  return y;
}

std::vector<double> apply_transpose(const TruncatedOperator& t, const std::vector<double>& y) {
  std::vector<double> x(t.n, 0.0);
  for (std::size_t r = 0; r < t.n; ++r) {
    const double* row = &t.matrix[r * t.n];
    const double yr = y[r];
    if (yr == 0.0) continue;
    for (std::size_t c = 0; c < t.n; ++c) x[c] += row[c] * yr;
  }
  return x;
}

double lp(const std::vector<double>& x, double p) {
  if (std::isinf(p)) {
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0;
  for (double v : x) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

// sign(v) |v|^e, elementwise.
std::vector<double> signed_power(const std::vector<double>& v, double e) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(v[i]), e), v[i]);
  }
  return out;
}

std::vector<double> random_start(std::uint64_t seed, std::uint64_t stream, std::size_t n) {
  Pcg32 rng(seed, stream);
  std::vector<double> x(n);
  for (auto& v : x) v = 2 * rng.uniform() - 1;
  return x;
}

GridFunction to_witness(const TruncatedOperator& t, std::vector<double> x, double p) {
  const double scale = lp(x, p) * std::pow(t.cell_volume.get_d(), 1.0 / p);
  GridFunction g(t.window, t.cell_scale);
  if (scale == 0.0) return g;
  for (std::size_t i = 0; i < t.n; ++i) g[i] = Scalar(mpq_class(x[i] / scale));
  return g;
}

}  // namespace

TruncatedOperator assemble(const OperatorSpec& spec, const Rectangle& window, const std::vector<int>& cell_scale) {
  TruncatedOperator t;
  t.spec = spec;
  t.window = window;
  t.cell_scale = cell_scale;
  GridFunction layout(window, cell_scale);
  t.n = layout.size();
  t.cell_volume = layout.cell_volume();
  const bool keep_exact = t.n * t.n <= kExactEntries;
  if (keep_exact) t.exact.assign(t.n * t.n, Scalar());
  t.matrix.assign(t.n * t.n, 0.0);
  for (std::size_t col = 0; col < t.n; ++col) {
    const GridFunction image = to_grid(apply(spec, DyadicFunction::indicator(layout.cell_rect(col))), window, cell_scale);
    for (std::size_t row = 0; row < t.n; ++row) {
      if (image[row].is_zero()) continue;
      t.matrix[row * t.n + col] = image[row].to_double();
      if (keep_exact) t.exact[row * t.n + col] = image[row];
    }
  }
  riesz_bounds(spec, window, t.exterior_bound);
  return t;
}

TruncatedOperator scaled(const TruncatedOperator& t, const Scalar& c) {
  TruncatedOperator out = t;
  for (auto& e : out.exact) e *= c;
  if (!out.exact.empty()) {
    for (std::size_t i = 0; i < out.exact.size(); ++i) out.matrix[i] = out.exact[i].to_double();
  } else {
    const double cd = c.to_double();
    for (auto& e : out.matrix) e *= cd;
  }
  return out;
}

double norm_ratio(const TruncatedOperator& t, const std::vector<double>& x, double p, double q) {
  const double den = lp(x, p);
  if (den == 0.0) return 0.0;
  const double vol = t.cell_volume.get_d();
  const double weight = std::pow(vol, (std::isinf(q) ? 0.0 : 1.0 / q) - (std::isinf(p) ? 0.0 : 1.0 / p));
  return weight * lp(apply_t(t, x), q) / den;
}

NormEstimate opnorm_22(const TruncatedOperator& t, std::uint64_t seed) {
  NormEstimate est;
  est.seed = seed;
  est.restarts = 1;
  std::vector<double> x = random_start(seed, 0, t.n);
  double prev = -1;
  for (est.iterations = 1; est.iterations <= 10000; ++est.iterations) {
    const double nx = lp(x, 2);
    for (auto& v : x) v /= nx;
    const std::vector<double> y = apply_t(t, x);
    const double sigma2 = lp(y, 2) * lp(y, 2);
    if (sigma2 == 0.0) {
      est.converged = true;
      break;
    }
    if (prev >= 0 && std::abs(sigma2 - prev) <= 1e-10 * sigma2) {
      est.converged = true;
      break;
    }
    prev = sigma2;
    x = apply_transpose(t, y);
  }
  est.iterations = std::min(est.iterations, 10000);
  est.value = norm_ratio(t, x, 2, 2);
  est.witness = to_witness(t, x, 2);
  return est;
}

NormEstimate opnorm_pq(const TruncatedOperator& t, double p, double q, const AscentParams& params) {
  if (!(p > 1 && q > 1 && !std::isinf(p) && !std::isinf(q))) throw DomainError("opnorm_pq: need 1 < p, q < inf");
  NormEstimate best;
  best.p = p;
  best.q = q;
  best.seed = params.seed;
  best.restarts = params.restarts;
  best.witness = GridFunction(t.window, t.cell_scale);
  std::vector<double> best_x(t.n, 0.0);
  bool all_converged = true;
  const double dual = 1.0 / (p - 1);
  for (int r = 0; r < params.restarts; ++r) {
    std::vector<double> x = random_start(params.seed, static_cast<std::uint64_t>(r), t.n);
    double value = norm_ratio(t, x, p, q);
    std::vector<double> run_best = x;
    double run_value = value;
    bool converged = false;
    int it = 0;
    for (; it < params.iters; ++it) {
      const std::vector<double> z = apply_transpose(t, signed_power(apply_t(t, x), q - 1));
      std::vector<double> next = signed_power(z, dual);
      const double nn = lp(next, p);
      if (nn == 0.0) {
        converged = true;
        break;
      }
      for (auto& v : next) v /= nn;
      const double next_value = norm_ratio(t, next, p, q);
      x = std::move(next);
      if (next_value > run_value) {
        run_value = next_value;
        run_best = x;
      }
      if (std::abs(next_value - value) <= params.tol * std::max(next_value, 1e-300)) {
        converged = true;
        value = next_value;
        break;
      }
      value = next_value;
    }
    all_converged = all_converged && converged;
    best.iterations += it;
    if (r == 0 || run_value > best.value) {
      best.value = run_value;
      best_x = run_best;
    }
  }
  best.converged = all_converged;
  best.value = norm_ratio(t, best_x, p, q);
  best.witness = to_witness(t, best_x, p);
  return best;
}

double scaling_q(const std::vector<ScaleParam>& scales, double p) {
  double alpha = 0;
  for (const auto& s : scales) alpha += s.alpha();
  const double inv_q = 1.0 / p - 1.0 + alpha;
  if (inv_q <= 0) throw ScalingRelationViolated("no finite q solves the scaling relation for this p");
  return 1.0 / inv_q;
}

void check_scaling(const std::vector<ScaleParam>& scales, double p, double q) {
  double alpha = 0;
  for (const auto& s : scales) alpha += s.alpha();
  const double gap = 1.0 - alpha + 1.0 / q - 1.0 / p;
  if (std::abs(gap) > 1e-12) {
    throw ScalingRelationViolated("1 - sum alpha + 1/q - 1/p = " + std::to_string(gap));
  }
}

RatioTable ratio_experiment(const std::vector<DyadicFunction>& symbols, const RatioSetup& setup) {
  if (symbols.empty()) throw DomainError("ratio_experiment: empty corpus");
  if (!setup.scales.empty()) check_scaling(setup.scales, setup.p, setup.q);
  RatioTable table;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    RatioRow row;
    row.symbol_id = i;
    const TruncatedOperator t = assemble(setup.op(symbols[i]), setup.window, setup.cell_scale);
    row.estimate = (setup.p == 2 && setup.q == 2) ? opnorm_22(t, setup.ascent.seed)
                                                  : opnorm_pq(t, setup.p, setup.q, setup.ascent);
    row.opnorm = row.estimate.value;
    row.denom = setup.denom(symbols[i]);
    row.ratio = row.denom == 0.0 ? 0.0 : row.opnorm / row.denom;
    if (i == 0 || row.ratio < table.min_ratio) table.min_ratio = row.ratio;
    if (i == 0 || row.ratio > table.max_ratio) table.max_ratio = row.ratio;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace dyalab
