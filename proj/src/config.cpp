#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "dyalab/errors.hpp"
#include "dyalab/scale_param.hpp"
#include "dyalab/scenario.hpp"

namespace dyalab {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split(v, ',')) out.push_back(static_cast<int>(to_int(key, item)));
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

bool is_commutator_scenario(const std::string& name) {
  static const std::set<std::string> names{"chanillo-1d", "firstlower", "eta-lower", "multi-upper", "rect-lower",
                                           "separated-rectangles"};
  return names.count(name) > 0;
}

void validate(const ScenarioConfig& c) {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), c.name) == names.end()) {
    throw ConfigError("name: unknown scenario '" + c.name + "'");
  }
  if (c.dimension < 1 || c.dimension > 3) throw ConfigError("dimension: must be 1, 2 or 3");
  if (c.lambdas.empty()) throw ConfigError("lambda: at least one set is required");
  for (const auto& set : c.lambdas) {
    if (set.size() != c.dimension) throw ConfigError("lambda: each set needs one value per coordinate");
    for (const auto& l : set) {
      try {
        ScaleParam{l};
      } catch (const std::exception& e) {
        throw ConfigError(std::string("lambda: ") + e.what());
      }
    }
  }
  if (c.p < 1) throw ConfigError("p: must be at least 1");
  if (c.q && *c.q < 1) throw ConfigError("q: must be at least 1");
  if (c.resolution < 1 || c.resolution > 20) throw ConfigError("resolution: must be in 1..20");
  if (c.depth < 0 || c.depth >= c.resolution + 1) throw ConfigError("depth: must be in 0..resolution");
  if (c.corpus_size < 0 || c.restarts < 1 || c.iters < 1 || c.terms < 1) {
    throw ConfigError("corpus_size, restarts, iters and terms must be positive");
  }
  if (c.eta <= 0) throw ConfigError("eta: must be positive");
  if (c.n_values.empty()) throw ConfigError("n_values: at least one value is required");
  if (is_commutator_scenario(c.name) && c.q) {
    double alpha = 0;
    for (const auto& l : c.lambdas.front()) alpha += ScaleParam(l).alpha();
    const double gap = 1 - alpha + 1 / *c.q - 1 / c.p;
    if (std::abs(gap) > 1e-12) {
      throw ConfigError("p, q: scaling relation 1 - sum alpha + 1/q = 1/p fails by " + fmt_double(gap));
    }
  }
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"verify-decomposition",
                                              "chanillo-1d",
                                              "firstlower",
                                              "eta-lower",
                                              "dk-bound",
                                              "para-bmo-equivalence",
                                              "atom-duality",
                                              "multi-upper",
                                              "rect-lower",
                                              "separated-rectangles",
                                              "riesz-indicator-diagnostic",
                                              "oracle",
                                              "estimate"};
  return names;
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string line;
  bool in_section = false;
  bool seen_section = false;
  bool seen_dimension = false;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[scenario]") throw ConfigError("line " + std::to_string(lineno) + ": unknown section " + line);
      if (seen_section) throw ConfigError("line " + std::to_string(lineno) + ": duplicate [scenario] section");
      in_section = seen_section = true;
      continue;
    }
    if (!in_section) throw ConfigError("line " + std::to_string(lineno) + ": key outside [scenario]");
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(key + ": given twice");
    if (key == "name") {
      c.name = v;
    } else if (key == "dimension") {
      c.dimension = static_cast<std::size_t>(to_int(key, v));
      seen_dimension = true;
    } else if (key == "lambda") {
      c.lambdas.clear();
      for (const auto& set : split(v, ';')) {
        std::vector<mpq_class> vals;
        for (const auto& item : split(set, ',')) {
          try {
            vals.push_back(parse_rational(item));
          } catch (const std::exception&) {
            throw ConfigError("lambda: malformed rational '" + item + "'");
          }
        }
        c.lambdas.push_back(std::move(vals));
      }
    } else if (key == "p") {
      c.p = to_double(key, v);
    } else if (key == "q") {
      if (v == "auto") {
        c.q.reset();
      } else {
        c.q = to_double(key, v);
      }
    } else if (key == "window") {
      c.window = static_cast<int>(to_int(key, v));
    } else if (key == "resolution") {
      c.resolution = static_cast<int>(to_int(key, v));
    } else if (key == "depth") {
      c.depth = static_cast<int>(to_int(key, v));
    } else if (key == "terms") {
      c.terms = static_cast<int>(to_int(key, v));
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(to_int(key, v));
    } else if (key == "corpus_size") {
      c.corpus_size = static_cast<int>(to_int(key, v));
    } else if (key == "restarts") {
      c.restarts = static_cast<int>(to_int(key, v));
    } else if (key == "iters") {
      c.iters = static_cast<int>(to_int(key, v));
    } else if (key == "budget") {
      c.budget = static_cast<std::size_t>(to_int(key, v));
    } else if (key == "eta") {
      c.eta = to_double(key, v);
    } else if (key == "k_max") {
      c.k_max = static_cast<int>(to_int(key, v));
    } else if (key == "n_values") {
      c.n_values = to_int_list(key, v);
    } else if (key == "spacing") {
      c.spacing = static_cast<int>(to_int(key, v));
    } else if (key == "depths") {
      c.depths = to_int_list(key, v);
    } else if (key == "strict_convergence") {
      if (v != "true" && v != "false") throw ConfigError("strict_convergence: expected true or false");
      c.strict_convergence = v == "true";
    } else if (key == "operator") {
      c.op = v;
    } else if (key == "input") {
      c.input = v;
    } else if (key == "k") {
      c.k = static_cast<int>(to_int(key, v));
    } else if (key == "output_dir") {
      c.output_dir = v;
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (!seen_section) throw ConfigError("missing [scenario] section");
  if (c.name.empty()) throw ConfigError("name: required");
  // A bare dimension change widens the default lambda to every coordinate.
  if (seen_dimension && !seen.count("lambda")) c.lambdas = {std::vector<mpq_class>(c.dimension, mpq_class(3, 4))};
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::string lam;
  for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
    if (i) lam += ";";
    for (std::size_t j = 0; j < c.lambdas[i].size(); ++j) lam += (j ? "," : "") + rational_str(c.lambdas[i][j]);
  }
  std::string out = "[scenario]\n";
  auto put = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  put("name", c.name);
  put("dimension", std::to_string(c.dimension));
  put("lambda", lam);
  put("p", fmt_double(c.p));
  put("q", c.q ? fmt_double(*c.q) : "auto");
  put("window", std::to_string(c.window));
  put("resolution", std::to_string(c.resolution));
  put("depth", std::to_string(c.depth));
  put("terms", std::to_string(c.terms));
  put("seed", std::to_string(c.seed));
  put("corpus_size", std::to_string(c.corpus_size));
  put("restarts", std::to_string(c.restarts));
  put("iters", std::to_string(c.iters));
  put("budget", std::to_string(c.budget));
  put("eta", fmt_double(c.eta));
  put("k_max", std::to_string(c.k_max));
  put("n_values", join_ints(c.n_values));
  put("spacing", std::to_string(c.spacing));
  put("depths", join_ints(c.depths));
  put("strict_convergence", c.strict_convergence ? "true" : "false");
  put("operator", c.op);
  if (!c.input.empty()) put("input", c.input);
  put("k", std::to_string(c.k));
  put("output_dir", c.output_dir);
  return out;
}

}  // namespace dyalab
