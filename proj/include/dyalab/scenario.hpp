#ifndef DYALAB_SCENARIO_HPP_
#define DYALAB_SCENARIO_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dyalab/scalar.hpp"

namespace dyalab {

/// Flat `key = value` configuration under a single [scenario] section.
/// Lambda lists use ',' between coordinates and ';' between alternative sets.
struct ScenarioConfig {
  std::string name;
  std::size_t dimension = 1;
  std::vector<std::vector<mpq_class>> lambdas{{mpq_class(3, 4)}};
  double p = 2;
  std::optional<double> q;          // unset: solved from the scaling relation
  int window = 0;                   // window [0, 2^window)^d
  int resolution = 6;               // cells 2^{-resolution} times the window side
  int depth = 0;                    // symbol depth below the window; 0 means resolution - 1
  int terms = 6;                    // Haar terms drawn per random symbol
  std::uint64_t seed = 1;
  int corpus_size = 20;
  int restarts = 8;
  int iters = 500;
  std::size_t budget = 200000;      // product-BMO greedy evaluations
  double eta = 0.45;
  int k_max = 3;
  std::vector<int> n_values{1, 2, 4, 8};
  int spacing = 10;                 // log2 of the gap between separated rectangles
  std::vector<int> depths{10, 20, 30, 40, 50, 60};
  bool strict_convergence = false;  // non-convergence becomes exit status 4
  std::string op = "commutator";    // estimate: commutator|riesz|para-b|para-c|para-d|multiply
  std::string input;                // estimate: symbol JSON path
  int k = 0;                        // estimate: shift for para-d
  std::string output_dir = ".";

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

const std::vector<std::string>& scenario_names();

// Throws ConfigError with the offending line or key.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;  // one value per column
};

struct FitPlot {
  std::string x;       // column names of the primary table
  std::string y;
  bool log_axes = false;
  std::optional<double> slope;
  std::optional<double> intercept;
};

struct ReportRecord {
  std::string scenario;
  nlohmann::json params;
  Table rows;
  std::vector<Table> extra;
  std::map<std::string, double> brackets;
  std::vector<std::string> flags;
  std::uint64_t seed = 0;
  int status = 0;  // 0 ok, 3 identity failure, 4 non-convergence under strict policy
  std::optional<FitPlot> plot;
};

ReportRecord run(const ScenarioConfig& cfg);
// Convergence of the Riesz oracle against the closed form on 1_W and h_W.
ReportRecord run_oracle_study(const ScenarioConfig& cfg);
// Norm estimate of one operator built from the symbol in cfg.input.
ReportRecord run_estimate(const ScenarioConfig& cfg);

std::string to_csv(const Table& t);
nlohmann::json to_json(const ReportRecord& r);
std::string to_svg(const ReportRecord& r);

// Writes <scenario>.csv (plus <scenario>_<table>.csv), .json and .svg as
// requested; returns the paths. Throws std::runtime_error on I/O failure.
std::vector<std::string> emit(const ReportRecord& r, const std::string& dir, const std::vector<std::string>& formats);

}  // namespace dyalab

#endif  // DYALAB_SCENARIO_HPP_
