#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "dyalab/io.hpp"
#include "dyalab/scenario.hpp"

namespace dyalab {
namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell(const json& v) {
  if (v.is_string()) return quote(v.get<std::string>());
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json o = json::object();
    for (std::size_t i = 0; i < t.columns.size() && i < row.size(); ++i) o[t.columns[i]] = row[i];
    rows.push_back(std::move(o));
  }
  return rows;
}

std::optional<std::size_t> column(const Table& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  if (it == t.columns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - t.columns.begin());
}

std::string esc(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '<') {
      out += "&lt;";
    } else if (ch == '>') {
      out += "&gt;";
    } else if (ch == '&') {
      out += "&amp;";
    } else {
      out += ch;
    }
  }
  return out;
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + quote(t.columns[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell(row[i]);
    out += "\n";
  }
  return out;
}

json to_json(const ReportRecord& r) {
  json j;
  j["scenario"] = r.scenario;
  j["version"] = kVersion;
  j["ambient"] = "full dyadic grid on R^d, closed-form tails";
  j["params"] = r.params;
  j["seed"] = r.seed;
  j["status"] = r.status;
  j["columns"] = r.rows.columns;
  j["rows"] = table_json(r.rows);
  j["brackets"] = json::object();
  for (const auto& [k, v] : r.brackets) j["brackets"][k] = v;
  j["flags"] = r.flags;
  j["tables"] = json::object();
  for (const auto& t : r.extra) j["tables"][t.name] = table_json(t);
  if (r.plot) {
    json p{{"x", r.plot->x}, {"y", r.plot->y}, {"log_axes", r.plot->log_axes}};
    if (r.plot->slope) p["slope"] = *r.plot->slope;
    if (r.plot->intercept) p["intercept"] = *r.plot->intercept;
    j["plot"] = p;
  }
  return j;
}

std::string to_svg(const ReportRecord& r) {
  const double w = 480;
  const double h = 360;
  const double m = 50;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"360\">\n";
  out += "<rect width=\"480\" height=\"360\" fill=\"white\"/>\n";
  out += "<text x=\"240\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + esc(r.scenario) + "</text>\n";
  std::vector<std::pair<double, double>> pts;
  std::string xl;
  std::string yl;
  bool logs = false;
  if (r.plot) {
    xl = r.plot->x;
    yl = r.plot->y;
    logs = r.plot->log_axes;
    const auto xi = column(r.rows, xl);
    const auto yi = column(r.rows, yl);
    if (xi && yi) {
      for (const auto& row : r.rows.rows) {
        if (!row[*xi].is_number() || !row[*yi].is_number()) continue;
        double x = row[*xi].get<double>();
        double y = row[*yi].get<double>();
        if (logs) {
          if (x <= 0 || y <= 0) continue;
          x = std::log(x);
          y = std::log(y);
        }
        if (std::isfinite(x) && std::isfinite(y)) pts.emplace_back(x, y);
      }
    }
  }
  out += "<line x1=\"50\" y1=\"310\" x2=\"450\" y2=\"310\" stroke=\"black\"/>\n";
  out += "<line x1=\"50\" y1=\"310\" x2=\"50\" y2=\"30\" stroke=\"black\"/>\n";
  const std::string pre = logs ? "log " : "";
  out += "<text x=\"250\" y=\"345\" text-anchor=\"middle\" font-size=\"12\">" + esc(pre + xl) + "</text>\n";
  out += "<text x=\"15\" y=\"170\" font-size=\"12\" transform=\"rotate(-90 15 170)\">" + esc(pre + yl) + "</text>\n";
  if (!pts.empty()) {
    double x0 = pts[0].first, x1 = x0, y0 = pts[0].second, y1 = y0;
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const auto sx = [&](double x) { return m + (x - x0) / (x1 - x0) * (w - 2 * m); };
    const auto sy = [&](double y) { return h - m - (y - y0) / (y1 - y0) * (h - 2 * m - 30); };
    for (const auto& [x, y] : pts) {
      out += "<circle cx=\"" + fmt(sx(x)) + "\" cy=\"" + fmt(sy(y)) + "\" r=\"3\" fill=\"steelblue\"/>\n";
    }
    if (r.plot->slope && r.plot->intercept) {
      const double a = *r.plot->slope;
      const double b = *r.plot->intercept;
      out += "<line x1=\"" + fmt(sx(x0)) + "\" y1=\"" + fmt(sy(a * x0 + b)) + "\" x2=\"" + fmt(sx(x1)) + "\" y2=\"" +
             fmt(sy(a * x1 + b)) + "\" stroke=\"firebrick\"/>\n";
      out += "<text x=\"440\" y=\"45\" text-anchor=\"end\" font-size=\"12\">slope " + fmt(a) + "</text>\n";
    }
    out += "<text x=\"50\" y=\"325\" font-size=\"10\">" + fmt(x0) + "</text>\n";
    out += "<text x=\"450\" y=\"325\" text-anchor=\"end\" font-size=\"10\">" + fmt(x1) + "</text>\n";
    out += "<text x=\"45\" y=\"310\" text-anchor=\"end\" font-size=\"10\">" + fmt(y0) + "</text>\n";
    out += "<text x=\"45\" y=\"60\" text-anchor=\"end\" font-size=\"10\">" + fmt(y1) + "</text>\n";
  } else {
    out += "<text x=\"250\" y=\"170\" text-anchor=\"middle\" font-size=\"12\">no plot</text>\n";
  }
  return out + "</svg>\n";
}

std::vector<std::string> emit(const ReportRecord& r, const std::string& dir, const std::vector<std::string>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  std::vector<std::string> paths;
  const auto put = [&](const std::string& name, const std::string& text) {
    const std::string p = (base / name).string();
    write_text_file(p, text);
    paths.push_back(p);
  };
  for (const auto& f : formats) {
    if (f == "csv") {
      put(r.scenario + ".csv", to_csv(r.rows));
      for (const auto& t : r.extra) put(r.scenario + "_" + t.name + ".csv", to_csv(t));
    } else if (f == "json") {
      put(r.scenario + ".json", to_json(r).dump(2) + "\n");
    } else if (f == "svg") {
      put(r.scenario + ".svg", to_svg(r));
    } else {
      throw std::runtime_error("unknown format '" + f + "'");
    }
  }
  return paths;
}

}  // namespace dyalab
