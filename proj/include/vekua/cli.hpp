#pragma once

// Command-line front end: classify | transform | verify | generate-family.
// Exit codes: 0 success, 1 usage or config error, 2 ellipticity failure,
// 3 verification failure.

#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vekua/config.hpp"
#include "vekua/ellsys.hpp"
#include "vekua/errors.hpp"
#include "vekua/format.hpp"
#include "vekua/parallel.hpp"
#include "vekua/verify.hpp"

namespace vekua::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNotElliptic = 2, kVerifyFailed = 3 };

struct Options {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::optional<double> tol;
  std::string grid;
  double alpha0 = 0.0;
  double beta0 = 0.0;
  std::string lambda;
  std::string mu;
};

inline void apply_grid(const std::string& grid, Region& r) {
  if (grid.empty()) return;
  static const std::regex kGrid(R"(^(\d+)[xX](\d+)$)");
  std::smatch m;
  if (!std::regex_match(grid, m, kGrid)) throw ConfigError("--grid expects NXxNY, got '" + grid + "'");
  const unsigned long nx = std::stoul(m[1].str());
  const unsigned long ny = std::stoul(m[2].str());
  if (nx < 2 || ny < 2) throw ConfigError("--grid needs at least 2 nodes per axis");
  r.nx = nx;
  r.ny = ny;
}

inline std::string point_text(Point p) { return "(" + format_double(p.x) + ", " + format_double(p.y) + ")"; }

// Returns the ellipticity exit code and prints the verdict.
inline int report_classification(const ProblemConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Classification c = classify(cfg.system, cfg.region);
    if (c.elliptic()) {
      out << "Elliptic\n";
      return kOk;
    }
    out << "NotElliptic at " << point_text(c.witness->point) << ": " << describe(c.witness->reason) << "\n";
    return kNotElliptic;
  } catch (const EvalError& e) {
    err << "NotElliptic: coefficient evaluation failed: " << e.what() << "\n";
    out << "NotElliptic at " << point_text(e.point().value_or(Point{})) << ": evaluation failed\n";
    return kNotElliptic;
  }
}

inline ProblemConfig load(const Options& o) {
  ProblemConfig cfg = load_config(o.config);
  apply_grid(o.grid, cfg.region);
  return cfg;
}

inline int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  return report_classification(load(o), out, err);
}

inline int cmd_transform(const Options& o, std::ostream& out, std::ostream& err) {
  const ProblemConfig cfg = load(o);
  if (o.format != "csv" && o.format != "jsonl") throw ConfigError("--format must be csv or jsonl");
  std::ostringstream verdict;
  if (const int code = report_classification(cfg, verdict, err); code != kOk) {
    err << verdict.str();
    return code;
  }
  const auto records = transform_grid(cfg.system, cfg.solution, cfg.region, default_thread_count());

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw ConfigError("cannot write '" + o.out + "'");
  }
  std::ostream& sink = o.out.empty() ? out : file;
  std::size_t errors = 0;
  if (o.format == "csv") write_csv_header(sink);
  for (const auto& r : records) {
    if (r.error) ++errors;
    if (o.format == "csv") {
      write_csv_row(sink, r);
    } else {
      sink << record_json(r).dump() << "\n";
    }
  }
  err << "transform: " << records.size() << " records, " << errors << " error records";
  if (!o.out.empty()) err << ", written to " << o.out;
  err << "\n";
  for (const auto& r : records) {
    if (r.error) err << "  error at " << point_text({r.x, r.y}) << ": " << *r.error << "\n";
  }
  return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  ProblemConfig cfg = load(o);
  if (!cfg.solution) {
    err << "verify: config has no [solution] block\n";
    return kUsage;
  }
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw ConfigError("--tol must be positive");
    cfg.tolerance = *o.tol;
  }
  std::ostringstream verdict;
  if (const int code = report_classification(cfg, verdict, err); code != kOk) {
    err << verdict.str();
    return code;
  }
  const GridReport rep = grid_verify(cfg.system, *cfg.solution, cfg.region, cfg.tolerance, default_thread_count());
  out << (rep.pass ? "PASS" : "FAIL") << "\n"
      << "  max residual:    " << format_double(rep.max_abs_residual) << " at " << point_text(rep.worst_point) << "\n"
      << "  mean residual:   " << format_double(rep.mean_abs_residual) << "\n"
      << "  tolerance:       " << format_double(rep.tolerance) << "\n"
      << "  points:          " << rep.points_evaluated << " evaluated, " << rep.skipped.size() << " skipped\n";
  for (const auto& s : rep.skipped) out << "  skipped " << point_text(s.point) << ": " << s.reason << "\n";
  out << report_json(rep).dump() << "\n";
  return rep.pass ? kOk : kVerifyFailed;
}

inline int cmd_generate_family(const Options& o, std::ostream& out, std::ostream& err) {
  const Expr lambda = [&] {
    try {
      return parse_expr(o.lambda);
    } catch (const SyntaxError& e) {
      throw ConfigError(std::string("--lambda: ") + e.what());
    }
  }();
  const Expr mu = [&] {
    try {
      return parse_expr(o.mu);
    } catch (const SyntaxError& e) {
      throw ConfigError(std::string("--mu: ") + e.what());
    }
  }();
  EllipticSystem sys;
  try {
    sys = make_constant_structure_family(o.alpha0, o.beta0, lambda, mu);
  } catch (const NotElliptic& e) {
    err << "generate-family: " << e.what() << " (got " << format_double(discriminant({o.alpha0, o.beta0})) << ")\n";
    return kNotElliptic;
  }
  Region region{0.0, 1.0, 0.0, 1.0, 20, 20};
  apply_grid(o.grid, region);
  const std::string text = write_config(make_config(sys, region));
  if (o.out.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream file(o.out);
  if (!file) throw ConfigError("cannot write '" + o.out + "'");
  file << text;
  err << "generate-family: wrote " << o.out << "\n";
  return kOk;
}

/// Parses arguments and dispatches. Never throws.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Rewrite elliptic first-order systems in the plane as Vekua-type equations", "vekua-forge"};
  app.require_subcommand(1);
  Options o;

  auto* classify_cmd = app.add_subcommand("classify", "Certify ellipticity on the config grid");
  classify_cmd->add_option("--config", o.config, "Problem config file")->required();
  classify_cmd->add_option("--grid", o.grid, "Override grid resolution, NXxNY");

  auto* transform_cmd = app.add_subcommand("transform", "Write Vekua coefficients at every grid node");
  transform_cmd->add_option("--config", o.config, "Problem config file")->required();
  transform_cmd->add_option("--out", o.out, "Output file (default: stdout)");
  transform_cmd->add_option("--format", o.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  transform_cmd->add_option("--grid", o.grid, "Override grid resolution, NXxNY");

  auto* verify_cmd = app.add_subcommand("verify", "Check the Vekua residual on the manufactured solution");
  verify_cmd->add_option("--config", o.config, "Problem config file")->required();
  verify_cmd->add_option("--tol", o.tol, "Residual tolerance (overrides config)");
  verify_cmd->add_option("--grid", o.grid, "Override grid resolution, NXxNY");

  auto* family_cmd = app.add_subcommand("generate-family", "Write a config with constant structure parameters");
  family_cmd->add_option("--alpha0", o.alpha0, "Constant alpha")->required();
  family_cmd->add_option("--beta0", o.beta0, "Constant beta")->required();
  family_cmd->add_option("--lambda", o.lambda, "Positive expression for a11")->required();
  family_cmd->add_option("--mu", o.mu, "Expression for a12")->default_val("0");
  family_cmd->add_option("--out", o.out, "Output config file (default: stdout)");
  family_cmd->add_option("--grid", o.grid, "Grid resolution written to the config, NXxNY");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(o, out, err);
    if (transform_cmd->parsed()) return cmd_transform(o, out, err);
    if (verify_cmd->parsed()) return cmd_verify(o, out, err);
    if (family_cmd->parsed()) return cmd_generate_family(o, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace vekua::cli
