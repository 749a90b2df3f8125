#include "dyalab/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dyalab/errors.hpp"

namespace dyalab {
namespace {

std::string text_of(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw DomainError("function JSON: coefficients and ratios must be strings or integers");
}

}  // namespace

nlohmann::json function_to_json(const DyadicFunction& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [factors, c] : f.terms()) {
    nlohmann::json term;
    term["coeff"] = c.str();
    nlohmann::json fs = nlohmann::json::array();
    for (const auto& a : factors) {
      nlohmann::json fa;
      fa["kind"] = to_string(a.kind);
      fa["scale"] = a.iv.scale;
      fa["pos"] = a.iv.pos;
      if (a.kind == AtomKind::Tail) fa["ratio"] = rational_str(a.ratio);
      fs.push_back(std::move(fa));
    }
    term["factors"] = std::move(fs);
    out.push_back(std::move(term));
  }
  return out;
}

DyadicFunction function_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw DomainError("function JSON: expected a nonempty list of terms");
  const std::size_t dim = j.at(0).at("factors").size();
  if (dim == 0) throw DomainError("function JSON: terms need at least one factor");
  DyadicFunction f(dim);
  for (const auto& term : j) {
    Scalar coeff = parse_scalar(text_of(term.at("coeff")));
    DyadicFunction::Factors factors;
    const auto& fs = term.at("factors");
    if (fs.size() != dim) throw DomainError("function JSON: terms disagree on dimension");
    for (const auto& fa : fs) {
      const Interval iv{fa.at("scale").get<int>(), fa.at("pos").get<std::int64_t>()};
      if (!fa.contains("kind")) {
        const int eps = fa.at("eps").get<int>();
        if (eps == 0) {
          factors.push_back(Atom::haar(iv));
        } else if (eps == 1) {
          factors.push_back(Atom::indicator(iv));
          coeff *= Scalar::sqrt2_pow(-iv.scale);
        } else {
          throw DomainError("function JSON: eps must be 0 or 1");
        }
        continue;
      }
      const std::string kind = fa.at("kind").get<std::string>();
      if (kind == "haar") {
        factors.push_back(Atom::haar(iv));
      } else if (kind == "indicator") {
        factors.push_back(Atom::indicator(iv));
      } else if (kind == "tail") {
        factors.push_back(Atom::tail(iv, parse_rational(text_of(fa.at("ratio")))));
      } else {
        throw DomainError("function JSON: unknown factor kind '" + kind + "'");
      }
    }
    f.add_term(factors, coeff);
  }
  return f;
}

nlohmann::json grid_to_json(const GridFunction& g) {
  nlohmann::json out;
  nlohmann::json window = nlohmann::json::array();
  for (const auto& s : g.window().sides) window.push_back({{"scale", s.scale}, {"pos", s.pos}});
  out["window"] = std::move(window);
  out["cell_scale"] = g.cell_scale();
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : g.cells()) cells.push_back(c.str());
  out["cells"] = std::move(cells);
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace dyalab
