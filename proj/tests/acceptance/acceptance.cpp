// Runs acceptance criteria 1-13 and prints one PASS/FAIL line per criterion.
// Scenario parameters come from the checked-in configs/ directory.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dyalab/errors.hpp"
#include "dyalab/operators.hpp"
#include "dyalab/oracle.hpp"
#include "dyalab/random.hpp"
#include "dyalab/scenario.hpp"

#ifndef DYALAB_CONFIG_DIR
#error "DYALAB_CONFIG_DIR must point at the configs directory"
#endif

namespace {

using namespace dyalab;
using F = DyadicFunction;
using Clock = std::chrono::steady_clock;

// Regression baselines frozen from the first audited run.
constexpr double kChanilloRatioMin = 5.00778074268;
constexpr double kChanilloRatioMax = 7.93644775127;
constexpr double kMultiUpperC = 55.7300173592;
constexpr double kBaselineTolerance = 0.10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

ScenarioConfig config(const std::string& stem) { return load_config(std::string(DYALAB_CONFIG_DIR) + "/" + stem + ".ini"); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double bracket(const ReportRecord& r, const std::string& key) {
  const auto it = r.brackets.find(key);
  if (it == r.brackets.end()) throw Error(r.scenario + ": missing bracket " + key);
  return it->second;
}

bool near_baseline(double value, double frozen) { return std::abs(value - frozen) <= kBaselineTolerance * frozen; }

Outcome decomposition() {
  const auto t0 = Clock::now();
  const ReportRecord one = run(config("verify-decomposition-1d"));
  const ReportRecord two = run(config("verify-decomposition-2d"));
  const double secs = seconds_since(t0);
  const double cases = bracket(one, "cases") + bracket(two, "cases");
  const double failures = bracket(one, "failures") + bracket(two, "failures");
  const bool pass = cases == 150 && failures == 0 && secs < 60;
  return {pass, fmt("%.0f cases (100 in d=1, 50 in d=2), %.0f nonzero residuals, %.1f s", cases, failures, secs)};
}

Outcome eigenrelation() {
  Pcg32 rng(2);
  const mpq_class lambdas[] = {mpq_class(5, 8), mpq_class(3, 4), mpq_class(7, 8)};
  int exact = 0;
  for (int t = 0; t < 50; ++t) {
    const ScaleParam sp(lambdas[t % 3]);
    const int s = -8 + static_cast<int>(rng.below(13));
    const Interval i{s, static_cast<std::int64_t>(rng.below(64)) - 32};
    const F lhs = riesz_apply(sp, F::haar(i));
    const F rhs = F::haar(i) * Scalar(mpq_class(sp.c() * sp.length_pow_one_minus_alpha(s)));
    if (lhs == rhs) ++exact;
  }
  return {exact == 50, fmt("%.0f of 50 intervals satisfy I h_I = c |I|^{1-alpha} h_I exactly", exact)};
}

Outcome oracle_agreement() {
  const ReportRecord study = run(config("oracle"));
  const double violations = bracket(study, "bound_violations");
  const double gap = bracket(study, "worst_relative_rate_gap");

  // Random inputs at 60 truncation levels on each side of the grid.
  const Rectangle unit{{Interval{0, 0}}};
  const Rectangle unit2{{Interval{0, 0}, Interval{0, 0}}};
  Pcg32 rng(3);
  int misses = 0;
  int checks = 0;
  const mpq_class lambdas[] = {mpq_class(5, 8), mpq_class(3, 4), mpq_class(7, 8)};
  for (int t = 0; t < 15; ++t) {
    const ScaleParam sp(lambdas[t % 3]);
    const F f = random_test_function(rng, {1, unit, 3, 4}, false);
    const GridFunction g = to_grid(f, unit, {-4});
    const OracleResult o = riesz_oracle(g, sp, {-64, 60});
    const GridFunction closed = to_grid(riesz_apply(sp, f), unit, {-4});
    double err = 0;
    for (std::size_t c = 0; c < g.size(); ++c) err = std::max(err, std::abs((o.value[c] - closed[c]).to_double()));
    ++checks;
    if (err > o.tail_bound * (1 + 1e-12)) ++misses;

    const F b = random_haar_symbol(rng, {1, unit, 3, 4});
    const HaarCoefficients bc = haar_coefficients(b);
    const F h = random_test_function(rng, {1, unit, 3, 4}, false);
    const GridFunction hg = to_grid(h, unit, {-4});
    checks += 5;
    if (!(para_oracle({ParaKind::B}, bc, hg) == to_grid(para_B(b, h), unit, {-4}))) ++misses;
    if (!(para_oracle({ParaKind::C}, bc, hg) == to_grid(para_C(b, h), unit, {-4}))) ++misses;
    for (int k = 0; k <= 2; ++k) {
      if (!(para_oracle({ParaKind::D, k}, bc, hg) == to_grid(para_D(k, b, h), unit, {-4}))) ++misses;
    }

    const F b2 = random_haar_symbol(rng, {2, unit2, 2, 3});
    const F h2 = random_test_function(rng, {2, unit2, 2, 3}, false);
    const TensorParaSpec e{{t % 2 == 0, t % 2 == 1}, {t % 3, t % 2}};
    ++checks;
    if (!(para_oracle({ParaKind::E, 0, e.in_b, e.shift}, haar_coefficients(b2), to_grid(h2, unit2, {-3, -3})) ==
          to_grid(para_E(e, b2, h2), unit2, {-3, -3}))) {
      ++misses;
    }
  }
  const bool pass = violations == 0 && gap <= 0.10 && misses == 0;
  return {pass, fmt("study bound violations %.0f, worst rate gap %.3f (limit 0.10), %.0f of %.0f random checks off",
                    violations, gap, misses, checks)};
}

Outcome chanillo(ReportRecord& r) {
  const auto t0 = Clock::now();
  r = run(config("chanillo-1d"));
  const double secs = seconds_since(t0);
  const double lo = bracket(r, "ratio_min");
  const double hi = bracket(r, "ratio_max");
  const double chain = bracket(r, "chain_ratio_min");
  const bool pass = r.rows.rows.size() == 30 && lo > 0 && near_baseline(lo, kChanilloRatioMin) &&
                    near_baseline(hi, kChanilloRatioMax) && chain >= 0.1 && secs < 600;
  return {pass, fmt("ratio bracket [%.4f, %.4f] vs frozen [%.4f, %.4f] +-10%%, ", lo, hi, kChanilloRatioMin,
                    kChanilloRatioMax) +
                    fmt("min ||[M_b,I]1_J||_q / |J|^{1/p} = %.3f (need >= 0.1), %.1f s", chain, secs)};
}

Outcome firstlower(ReportRecord& r) {
  r = run(config("firstlower"));
  const double failures = bracket(r, "failures");
  return {failures == 0 && r.rows.rows.size() == 20,
          fmt("%.0f of 20 below half the single-Haar value; kappa in [%.3f, %.3f]", failures, bracket(r, "kappa_min"),
              bracket(r, "kappa_max"))};
}

Outcome dk_bound(ReportRecord& r) {
  r = run(config("dk-bound"));
  std::string per;
  for (int k = 0; k <= 3; ++k) per += fmt(" C_%.0f=%.4f", k, bracket(r, "C_" + std::to_string(k)));
  bool grows = false;
  double running = 0;
  for (int k = 0; k <= 3; ++k) {
    const double ck = bracket(r, "C_" + std::to_string(k));
    if (k > 0 && ck > 1.1 * running) grows = true;
    running = std::max(running, ck);
  }
  return {!grows && std::isfinite(running), "C=" + fmt("%.4f", running) + ";" + per};
}

Outcome para_bmo(std::vector<ReportRecord>& rs) {
  bool pass = true;
  std::string detail;
  for (const char* stem : {"para-bmo-1d-p2", "para-bmo-1d-p3", "para-bmo-2d-p2", "para-bmo-2d-p3"}) {
    rs.push_back(run(config(stem)));
    const double lo = bracket(rs.back(), "ratio_min");
    const double hi = bracket(rs.back(), "ratio_max");
    pass = pass && lo > 0 && std::isfinite(hi);
    detail += std::string(detail.empty() ? "" : "; ") + stem + fmt(" [%.4f, %.4f]", lo, hi);
  }
  return {pass, detail};
}

Outcome atom_duality(ReportRecord& r) {
  r = run(config("atom-duality"));
  const double failures = bracket(r, "failures");
  const double breaks = bracket(r, "chain_breaks");
  const bool pass = failures == 0 && breaks == 0 && r.rows.rows.size() == 50;
  return {pass, fmt("%.0f of 50 exceed 1.0001 bmo_product, %.0f Cauchy-Schwarz chain breaks, max l1/bmo %.4f", failures,
                    breaks, bracket(r, "l1_over_bmo_max"))};
}

Outcome multi_upper(ReportRecord& r) {
  r = run(config("multi-upper"));
  const double c = bracket(r, "ratio_max");
  return {near_baseline(c, kMultiUpperC) && std::isfinite(c),
          fmt("C = max opnorm/bmo_product = %.4f vs frozen %.4f +-10%%", c, kMultiUpperC)};
}

Outcome rect_lower(ReportRecord& r) {
  r = run(config("rect-lower"));
  const double c = bracket(r, "ratio_min");
  return {c > 0, fmt("c = min opnorm/bmo_rect = %.4f (need > 0)", c)};
}

Outcome separated(ReportRecord& r) {
  r = run(config("separated-rectangles"));
  const double err = bracket(r, "slope_error");
  const bool unit = r.rows.rows.front()[4].get<double>() == 1.0;
  return {err <= 0.1 && unit, fmt("slope %.4f vs 1/q - 1/p = %.4f, error %.4f (limit 0.1)", bracket(r, "slope"),
                                  bracket(r, "expected_slope"), err)};
}

Outcome riesz_indicator() {
  const ReportRecord r = run(config("riesz-indicator-diagnostic"));
  bool direct = bracket(r, "direct_mismatches") == 0;
  bool flagged = true;
  bool six = false;
  for (const auto& row : r.rows.rows) {
    if (row[1] != "exact") continue;
    flagged = flagged && row[7] == 1;
    if (row[0] == "3/4" && row[3] == "6") six = true;
  }
  direct = direct && six;
  const auto& f = r.rows.rows.back();
  return {direct && flagged, std::string("computed = 1+c+chat on every exact row, 6 at lambda=3/4: ") +
                                 (direct ? "yes" : "no") + "; flag raised for each lambda != 2^-1/2: " +
                                 (flagged ? "yes" : "no") + "; at 2^-1/2 computed " + f[3].get<std::string>() +
                                 ", stated 1+c " + f[5].get<std::string>() + ", 1+chat " + f[6].get<std::string>()};
}

Outcome determinism(const std::vector<ReportRecord>& first) {
  int mismatched = 0;
  std::string which;
  for (const ReportRecord& a : first) {
    // Rebuild the config from the serialized params.
    std::string text = "[scenario]\n";
    for (const auto& [k, v] : a.params.items()) text += k + " = " + v.get<std::string>() + "\n";
    const ReportRecord b = run(parse_config(text));
    bool same = to_csv(a.rows) == to_csv(b.rows) && to_json(a).dump() == to_json(b).dump();
    for (std::size_t t = 0; same && t < a.extra.size(); ++t) same = to_csv(a.extra[t]) == to_csv(b.extra[t]);
    if (!same) {
      ++mismatched;
      which += " " + a.scenario;
    }
  }
  return {mismatched == 0,
          fmt("%.0f of %.0f reruns byte-identical", static_cast<double>(first.size()) - mismatched, first.size()) +
              (which.empty() ? "" : "; differs:" + which)};
}

}  // namespace

int main() {
  int failed = 0;
  const auto report = [&](int n, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  };

  std::vector<ReportRecord> records(7);
  std::vector<ReportRecord> para;
  report(1, decomposition);
  report(2, eigenrelation);
  report(3, oracle_agreement);
  report(4, [&] { return chanillo(records[0]); });
  report(5, [&] { return firstlower(records[1]); });
  report(6, [&] { return dk_bound(records[2]); });
  report(7, [&] { return para_bmo(para); });
  report(8, [&] { return atom_duality(records[3]); });
  report(9, [&] { return multi_upper(records[4]); });
  report(10, [&] { return rect_lower(records[5]); });
  report(11, [&] { return separated(records[6]); });
  report(12, riesz_indicator);
  report(13, [&] {
    std::vector<ReportRecord> all;
    for (const auto& r : records) {
      if (!r.scenario.empty()) all.push_back(r);
    }
    all.insert(all.end(), para.begin(), para.end());
    return determinism(all);
  });
  std::printf("%d of 13 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
