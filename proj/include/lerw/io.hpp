#ifndef LERW_IO_HPP
#define LERW_IO_HPP

#include <charconv>
#include <cmath>
#include <filesystem>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "lerw/erasure.hpp"
#include "lerw/graph_io.hpp"
#include "lerw/harmonic.hpp"
#include "lerw/loewner.hpp"
#include "lerw/stats.hpp"
#include "lerw/walk.hpp"

namespace lerw {

/// Raised on unparsable input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that parses back to the same double; "nan"/"inf" otherwise.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw FormatError("not a number: '" + std::string(s) + "'");
  return x;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i)
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  return out;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace detail

inline std::string curve_csv(const Curve& c) {
  std::string s = "k,x,y\n";
  for (std::size_t k = 0; k < c.size(); ++k)
    s += std::to_string(k) + ',' + format_double(c.points[k].real()) + ',' + format_double(c.points[k].imag()) + '\n';
  return s;
}

inline void save_curve(const Curve& c, const std::filesystem::path& path) { detail::write_text(path, curve_csv(c)); }

inline Curve load_curve(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || lines.front() != "k,x,y") throw FormatError(path.string() + ": expected header k,x,y");
  Curve c;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_fields(lines[i]);
    if (f.size() != 3) throw FormatError(path.string() + ": line " + std::to_string(i + 1) + " needs 3 fields");
    if (f[0] != std::to_string(i - 1)) throw FormatError(path.string() + ": line " + std::to_string(i + 1) + " has wrong index");
    c.points.emplace_back(parse_double(f[1]), parse_double(f[2]));
  }
  return c;
}

/// Walk positions as "k,x,y" rows, then the exit point as "E,x,y".
inline std::string walk_csv(const WalkPath& w, const EmbeddedGraph& g) {
  std::string s = "k,x,y\n";
  for (std::size_t k = 0; k < w.vertices.size(); ++k) {
    const Point p = g.position(w.vertices[k]);
    s += std::to_string(k) + ',' + format_double(p.real()) + ',' + format_double(p.imag()) + '\n';
  }
  if (w.exit_edge) s += "E," + format_double(w.exit_point.real()) + ',' + format_double(w.exit_point.imag()) + '\n';
  return s;
}

inline nlohmann::json walk_metadata(const WalkPath& w, const EmbeddedGraph& g, const Domain& d) {
  nlohmann::json j{{"seed", w.seed}, {"replica", w.replica}, {"domain", d.describe()}, {"graph_hash", graph_hash(g)},
                   {"steps", w.steps()}};
  if (w.exit_edge) j["exit_edge"] = {w.exit_edge->from, w.exit_edge->to};
  return j;
}

/// Writes path (CSV) and path with extension .json (metadata).
inline void save_walk(const WalkPath& w, const EmbeddedGraph& g, const Domain& d, const std::filesystem::path& path) {
  detail::write_text(path, walk_csv(w, g));
  auto meta = path;
  meta.replace_extension(".json");
  detail::write_text(meta, walk_metadata(w, g, d).dump(2) + '\n');
}

/// Positions of a walk CSV; the exit row, when present, is appended last.
inline Curve load_walk_points(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || lines.front() != "k,x,y") throw FormatError(path.string() + ": expected header k,x,y");
  Curve c;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_fields(lines[i]);
    if (f.size() != 3) throw FormatError(path.string() + ": line " + std::to_string(i + 1) + " needs 3 fields");
    if (f[0] == "E" && i + 1 != lines.size()) throw FormatError(path.string() + ": exit row must be last");
    if (f[0] != "E" && f[0] != std::to_string(i - 1))
      throw FormatError(path.string() + ": line " + std::to_string(i + 1) + " has wrong index");
    c.points.emplace_back(parse_double(f[1]), parse_double(f[2]));
  }
  return c;
}

inline std::string driving_csv(const DrivingFunction& d) {
  std::string s = "t,theta\n";
  for (std::size_t k = 0; k < d.size(); ++k) s += format_double(d.times[k]) + ',' + format_double(d.angles[k]) + '\n';
  return s;
}

inline DrivingFunction parse_driving_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || lines.front() != "t,theta") throw FormatError(path.string() + ": expected header t,theta");
  DrivingFunction d;
  d.times.clear();
  d.angles.clear();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_fields(lines[i]);
    if (f.size() != 2) throw FormatError(path.string() + ": line " + std::to_string(i + 1) + " needs 2 fields");
    d.times.push_back(parse_double(f[0]));
    d.angles.push_back(parse_double(f[1]));
  }
  if (d.times.empty()) throw FormatError(path.string() + ": no samples");
  return d;
}

inline std::string summary_csv(const EnsembleSummary& s) {
  std::string out = "t,mean,var,se,ks\n";
  for (std::size_t j = 0; j < s.grid.size(); ++j)
    out += format_double(s.grid[j]) + ',' + format_double(s.mean[j]) + ',' + format_double(s.var[j]) + ',' +
           format_double(s.se[j]) + ',' + format_double(s.ks[j]) + '\n';
  return out;
}

namespace detail {
inline nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }
}  // namespace detail

inline nlohmann::json summary_json(const EnsembleSummary& s) {
  nlohmann::json ks = nlohmann::json::array();
  nlohmann::json ks_p = nlohmann::json::array();
  for (std::size_t j = 0; j < s.grid.size(); ++j) {
    ks.push_back(detail::finite_or_null(s.ks[j]));
    ks_p.push_back(detail::finite_or_null(s.ks_p[j]));
  }
  return {{"samples", s.samples},
          {"kappa_hat", s.kappa_hat},
          {"kappa_se", s.kappa_se},
          {"kappa_ci", {s.kappa_lo, s.kappa_hi}},
          {"increment_autocorrelation", s.increment_autocorrelation},
          {"grid", s.grid},
          {"mean", s.mean},
          {"var", s.var},
          {"se", s.se},
          {"ks", ks},
          {"ks_p", ks_p}};
}

inline nlohmann::json kernel_report_json(const KernelReport& r) {
  nlohmann::json arcs = nlohmann::json::array();
  for (const auto& a : r.arcs)
    arcs.push_back({{"lo", a.lo},
                    {"hi", a.hi},
                    {"edges", a.edges},
                    {"h_a", a.h_a},
                    {"h_0", a.h_0},
                    {"ratio", a.ratio},
                    {"lambda_bar", a.lambda_bar},
                    {"deviation", a.deviation}});
  return {{"a", r.a},
          {"a_position", {r.a_position.real(), r.a_position.imag()}},
          {"mesh", r.mesh},
          {"mode", r.exact ? "exact" : "monte-carlo"},
          {"samples", r.samples},
          {"residual", r.residual},
          {"max_deviation", r.max_deviation},
          {"arcs", arcs}};
}

inline std::string martingale_csv(const MartingaleReport& r) {
  std::string s = "n,M_n,E[M_{n+1}|F_n]\n";
  for (const auto& row : r.rows)
    s += std::to_string(row.n) + ',' + format_double(row.m_n) + ',' + format_double(row.expected_next) + '\n';
  return s;
}

/// SVG of the unit circle, an optional walk in gray and curves in black.
/// Coordinates are in units of the disc radius.
inline std::string render_svg(const std::vector<Curve>& curves, const Curve* walk = nullptr, int size = 800) {
  const double half = 0.5 * size;
  const double scale = 0.45 * size;
  auto px = [&](Point p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f,%.3f", half + scale * p.real(), half - scale * p.imag());
    return std::string(buf);
  };
  auto polyline = [&](const Curve& c, const char* colour, double width) {
    std::string s = "<polyline fill=\"none\" stroke=\"";
    s += colour;
    s += "\" stroke-width=\"" + format_double(width) + "\" stroke-linejoin=\"round\" points=\"";
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) s += ' ';
      s += px(c.points[k]);
    }
    return s + "\"/>\n";
  };
  const std::string dim = std::to_string(size);
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + dim + "\" height=\"" + dim + "\" viewBox=\"0 0 " + dim +
       ' ' + dim + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<circle cx=\"" + format_double(half) + "\" cy=\"" + format_double(half) + "\" r=\"" + format_double(scale) +
       "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  if (walk && !walk->empty()) s += polyline(*walk, "#a0a0a0", 0.6);
  for (const auto& c : curves)
    if (!c.empty()) s += polyline(c, "black", 1.4);
  s += "</svg>\n";
  return s;
}

}  // namespace lerw

#endif  // LERW_IO_HPP
