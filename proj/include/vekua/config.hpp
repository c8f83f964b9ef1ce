#pragma once

// Problem description files and grid output records.
//
//   # comment
//   [system]
//   a11 = "1 + x^2"        (a11, a22 required; others default to "0")
//   [region]
//   x_min = 0
//   x_max = 1
//   y_min = 0
//   y_max = 1
//   nx = 20
//   ny = 20
//   [solution]             (optional)
//   u = "x"
//   v = "y"
//   [verify]               (optional)
//   tolerance = 1e-10

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vekua/ellsys.hpp"
#include "vekua/errors.hpp"
#include "vekua/expr.hpp"
#include "vekua/format.hpp"
#include "vekua/parallel.hpp"
#include "vekua/rewrite.hpp"
#include "vekua/verify.hpp"

namespace vekua {

struct SolutionText {
  std::string u;
  std::string v;
};

struct ProblemConfig {
  // Expression text per field, in kSystemFields order.
  std::array<std::string, 10> system_text{"0", "0", "0", "0", "0", "0", "0", "0", "0", "0"};
  EllipticSystem system;
  Region region;
  std::optional<SolutionText> solution_text;
  std::optional<SolutionPair> solution;
  double tolerance = kDefaultTolerance;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::size_t field_index(std::string_view name) {
  for (std::size_t k = 0; k < std::size(kSystemFields); ++k) {
    if (kSystemFields[k] == name) return k;
  }
  return std::size(kSystemFields);
}

[[noreturn]] inline void config_fail(std::size_t line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

// Strips a trailing comment outside quotes and splits "key = value".
inline bool split_entry(std::string_view line, std::string_view& key, std::string_view& value, bool& quoted,
                        std::size_t line_no) {
  bool in_quotes = false;
  std::size_t end = line.size();
  for (std::size_t k = 0; k < line.size(); ++k) {
    if (line[k] == '"') in_quotes = !in_quotes;
    if (line[k] == '#' && !in_quotes) {
      end = k;
      break;
    }
  }
  if (in_quotes) config_fail(line_no, "unterminated string");
  line = trim(line.substr(0, end));
  if (line.empty()) return false;
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) config_fail(line_no, "expected 'key = value'");
  key = trim(line.substr(0, eq));
  value = trim(line.substr(eq + 1));
  quoted = false;
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    value = value.substr(1, value.size() - 2);
    quoted = true;
  } else if (value.find('"') != std::string_view::npos) {
    config_fail(line_no, "malformed quoted value for '" + std::string(key) + "'");
  }
  if (key.empty()) config_fail(line_no, "missing key");
  return true;
}

inline Expr parse_field(std::string_view text, std::string_view field, std::size_t line_no) {
  try {
    return parse_expr(text);
  } catch (const SyntaxError& e) {
    config_fail(line_no, "field " + std::string(field) + ": " + e.what());
  }
}

}  // namespace detail

/// Parses the config text. Throws ConfigError naming the line and field.
inline ProblemConfig parse_config(std::string_view text) {
  ProblemConfig cfg;
  std::array<std::size_t, 10> field_line{};
  std::map<std::string, double, std::less<>> region_values;
  std::optional<std::string> u_text, v_text;
  std::size_t u_line = 0, v_line = 0;
  std::string section;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string_view::npos) detail::config_fail(line_no, "unterminated section header");
      section = std::string(detail::trim(line.substr(1, close - 1)));
      if (section != "system" && section != "region" && section != "solution" && section != "verify") {
        detail::config_fail(line_no, "unknown section [" + section + "]");
      }
      if (!detail::trim(line.substr(close + 1)).empty() && detail::trim(line.substr(close + 1)).front() != '#') {
        detail::config_fail(line_no, "trailing characters after section header");
      }
      continue;
    }

    std::string_view key, value;
    bool quoted = false;
    if (!detail::split_entry(line, key, value, quoted, line_no)) continue;
    const std::string k(key);

    if (section == "system") {
      const std::size_t idx = detail::field_index(key);
      if (idx == std::size(kSystemFields)) detail::config_fail(line_no, "unknown system field '" + k + "'");
      if (field_line[idx] != 0) detail::config_fail(line_no, "duplicate field " + k);
      field_line[idx] = line_no;
      cfg.system_text[idx] = std::string(value);
      system_field(cfg.system, key) = detail::parse_field(value, key, line_no);
    } else if (section == "region" || section == "verify") {
      const bool known = section == "verify" ? k == "tolerance"
                                             : (k == "x_min" || k == "x_max" || k == "y_min" || k == "y_max" ||
                                                k == "nx" || k == "ny");
      if (!known) detail::config_fail(line_no, "unknown " + section + " key '" + k + "'");
      double v = 0.0;
      if (!parse_double(value, v) || !std::isfinite(v)) detail::config_fail(line_no, "expected a number for " + k);
      if (section == "verify") {
        if (!(v > 0.0)) detail::config_fail(line_no, "tolerance must be positive");
        cfg.tolerance = v;
      } else {
        if (region_values.count(k)) detail::config_fail(line_no, "duplicate key " + k);
        region_values[k] = v;
      }
    } else if (section == "solution") {
      if (k == "u") {
        u_text = std::string(value);
        u_line = line_no;
      } else if (k == "v") {
        v_text = std::string(value);
        v_line = line_no;
      } else {
        detail::config_fail(line_no, "unknown solution key '" + k + "'");
      }
    } else {
      detail::config_fail(line_no, "entry outside of a section");
    }
  }

  for (std::string_view required : {"a11", "a22"}) {
    if (field_line[detail::field_index(required)] == 0) {
      throw ConfigError("missing required field " + std::string(required) + " in [system]");
    }
  }

  for (const char* key : {"x_min", "x_max", "y_min", "y_max", "nx", "ny"}) {
    if (!region_values.count(key)) throw ConfigError(std::string("missing region key ") + key);
  }
  auto grid_count = [&](const char* key) {
    const double v = region_values.at(key);
    if (v != std::floor(v) || v < 2.0 || v > 1e7) throw ConfigError(std::string(key) + " must be an integer >= 2");
    return static_cast<std::size_t>(v);
  };
  cfg.region = Region{region_values.at("x_min"), region_values.at("x_max"), region_values.at("y_min"),
                      region_values.at("y_max"),  grid_count("nx"),          grid_count("ny")};
  if (!cfg.region.valid()) throw ConfigError("invalid region: need x_min < x_max and y_min < y_max");

  if (u_text || v_text) {
    if (!u_text || !v_text) throw ConfigError("[solution] needs both u and v");
    cfg.solution_text = SolutionText{*u_text, *v_text};
    cfg.solution = SolutionPair{detail::parse_field(*u_text, "u", u_line), detail::parse_field(*v_text, "v", v_line)};
  }
  return cfg;
}

inline ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

inline std::string write_config(const ProblemConfig& cfg) {
  std::ostringstream os;
  os << "[system]\n";
  for (std::size_t k = 0; k < std::size(kSystemFields); ++k) {
    os << kSystemFields[k] << " = \"" << cfg.system_text[k] << "\"\n";
  }
  const Region& r = cfg.region;
  os << "\n[region]\n"
     << "x_min = " << format_double(r.x_min) << "\n"
     << "x_max = " << format_double(r.x_max) << "\n"
     << "y_min = " << format_double(r.y_min) << "\n"
     << "y_max = " << format_double(r.y_max) << "\n"
     << "nx = " << r.nx << "\n"
     << "ny = " << r.ny << "\n";
  if (cfg.solution_text) {
    os << "\n[solution]\n"
       << "u = \"" << cfg.solution_text->u << "\"\n"
       << "v = \"" << cfg.solution_text->v << "\"\n";
  }
  if (cfg.tolerance != kDefaultTolerance) {
    os << "\n[verify]\ntolerance = " << format_double(cfg.tolerance) << "\n";
  }
  return os.str();
}

/// Builds a config around an already-constructed system; field text is the
/// canonical printed form of each expression.
inline ProblemConfig make_config(const EllipticSystem& sys, const Region& region) {
  ProblemConfig cfg;
  cfg.system = sys;
  cfg.region = region;
  for (std::size_t k = 0; k < std::size(kSystemFields); ++k) {
    cfg.system_text[k] = system_field(sys, kSystemFields[k]).to_string();
  }
  return cfg;
}

inline constexpr std::array<std::string_view, 13> kRecordColumns{
    "x", "y", "alpha", "beta", "A_re", "A_im", "B_re", "B_im", "F_re", "F_im", "delta", "residual_re", "residual_im"};

struct OutputRecord {
  double x = 0.0;
  double y = 0.0;
  std::optional<std::string> error;
  double alpha = 0.0;
  double beta = 0.0;
  GC A;
  GC B;
  GC F;
  double delta = 0.0;
  std::optional<GC> residual;
};

inline OutputRecord make_record(const EllipticSystem& sys, const std::optional<SolutionPair>& solution, Point p) {
  OutputRecord rec;
  rec.x = p.x;
  rec.y = p.y;
  try {
    const VekuaPointData d = rewrite_at(sys, p.x, p.y);
    rec.alpha = d.s.alpha;
    rec.beta = d.s.beta;
    rec.A = d.A;
    rec.B = d.B;
    rec.F = d.F;
    rec.delta = delta(sys, p.x, p.y);
    if (solution) rec.residual = vekua_residual(sys, *solution, p.x, p.y);
    const bool finite = std::isfinite(rec.alpha) && std::isfinite(rec.beta) && rec.A.finite() && rec.B.finite() &&
                        rec.F.finite() && std::isfinite(rec.delta) && (!rec.residual || rec.residual->finite());
    if (!finite) rec.error = "non-finite value";
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

/// One record per node, in row-major grid order regardless of thread count.
inline std::vector<OutputRecord> transform_grid(const EllipticSystem& sys, const std::optional<SolutionPair>& solution,
                                                const Region& r, std::size_t threads = 1) {
  require_valid(r);
  std::vector<OutputRecord> records(r.size());
  parallel_for(r.size(), [&](std::size_t k) { records[k] = make_record(sys, solution, r.node(k)); }, threads);
  return records;
}

inline void write_csv_header(std::ostream& os) {
  for (std::size_t k = 0; k < kRecordColumns.size(); ++k) os << (k ? "," : "") << kRecordColumns[k];
  os << "\n";
}

inline void write_csv_row(std::ostream& os, const OutputRecord& r) {
  os << format_double(r.x) << "," << format_double(r.y);
  if (r.error) {
    for (std::size_t k = 2; k < kRecordColumns.size(); ++k) os << ",";
    os << "\n";
    return;
  }
  for (double v : {r.alpha, r.beta, r.A.re, r.A.im, r.B.re, r.B.im, r.F.re, r.F.im, r.delta}) os << "," << format_double(v);
  if (r.residual) {
    os << "," << format_double(r.residual->re) << "," << format_double(r.residual->im);
  } else {
    os << ",,";
  }
  os << "\n";
}

inline nlohmann::ordered_json record_json(const OutputRecord& r) {
  nlohmann::ordered_json j;
  j["x"] = r.x;
  j["y"] = r.y;
  if (r.error) {
    j["error"] = *r.error;
    return j;
  }
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["A_re"] = r.A.re;
  j["A_im"] = r.A.im;
  j["B_re"] = r.B.re;
  j["B_im"] = r.B.im;
  j["F_re"] = r.F.re;
  j["F_im"] = r.F.im;
  j["delta"] = r.delta;
  if (r.residual) {
    j["residual_re"] = r.residual->re;
    j["residual_im"] = r.residual->im;
  } else {
    j["residual_re"] = nullptr;
    j["residual_im"] = nullptr;
  }
  return j;
}

inline nlohmann::ordered_json report_json(const GridReport& rep) {
  nlohmann::ordered_json j;
  j["max_abs_residual"] = rep.max_abs_residual;
  j["mean_abs_residual"] = rep.mean_abs_residual;
  j["max_raw_residual"] = rep.max_raw_residual;
  j["solution_scale"] = rep.solution_scale;
  j["worst_point"] = {rep.worst_point.x, rep.worst_point.y};
  j["points_evaluated"] = rep.points_evaluated;
  j["tolerance"] = rep.tolerance;
  j["pass"] = rep.pass;
  auto skipped = nlohmann::ordered_json::array();
  for (const auto& s : rep.skipped) {
    skipped.push_back({{"x", s.point.x}, {"y", s.point.y}, {"reason", s.reason}});
  }
  j["skipped"] = std::move(skipped);
  return j;
}

}  // namespace vekua
