#pragma once

// Residual checks: the generalized Cauchy-Riemann operator applied to a pair,
// manufactured right-hand sides, and the Vekua residual of the rewritten
// equation evaluated on a manufactured exact solution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vekua/ellsys.hpp"
#include "vekua/errors.hpp"
#include "vekua/expr.hpp"
#include "vekua/gcnum.hpp"
#include "vekua/parallel.hpp"
#include "vekua/rewrite.hpp"

namespace vekua {

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kFiniteDifferenceTolerance = 1e-5;

/// Components of 2 d_zbar w for w = u + iv:
/// (u_x - alpha v_y, u_y + v_x - beta v_y).
inline GC cr_residual(const SolutionPair& p, StructureParams s, double x, double y) {
  return detail::at_point(x, y, [&] {
    const Jet2 u = eval_jet(p.u, x, y);
    const Jet2 v = eval_jet(p.v, x, y);
    return GC{u.dx - s.alpha * v.dy, u.dy + v.dx - s.beta * v.dy};
  });
}

/// Left-hand sides of the system evaluated on (u, v), so that the pair solves
/// the system exactly with these right-hand sides.
inline Rhs manufacture_rhs(const EllipticSystem& sys, const SolutionPair& p, double x, double y) {
  return detail::at_point(x, y, [&] {
    const Jet2 u = eval_jet(p.u, x, y);
    const Jet2 v = eval_jet(p.v, x, y);
    const auto c = [&](const Expr& e) { return eval(e, x, y); };
    return Rhs{-v.dy + c(sys.a11) * u.dx + c(sys.a12) * u.dy + c(sys.a1) * u.value + c(sys.b1) * v.value,
               v.dx + c(sys.a21) * u.dx + c(sys.a22) * u.dy + c(sys.a2) * u.value + c(sys.b2) * v.value};
  });
}

/// d_zbar W = (W_x + i W_y) / 2 in the algebra with structure s.
inline GC dzbar(const WJet& w, StructureParams s) {
  return gc_scale(0.5, gc_add(w.dx(), gc_mul(GC{0.0, 1.0}, w.dy(), s)));
}

/// d_zbar W + A W + B conj(W) - F for precomputed coefficients.
inline GC vekua_residual_from(const VekuaPointData& d, const WJet& w) {
  const GC W = w.value();
  const GC lhs = gc_add(dzbar(w, d.s), gc_add(gc_mul(d.A, W, d.s), gc_mul(d.B, gc_conj(W), d.s)));
  return gc_sub(lhs, d.F);
}

/// Largest absolute component of W and its first partials.
inline double solution_scale(const WJet& w) {
  return std::max({std::abs(w.re.value), std::abs(w.im.value), std::abs(w.re.dx), std::abs(w.re.dy),
                   std::abs(w.im.dx), std::abs(w.im.dy)});
}

struct ResidualSample {
  GC residual;
  double scale = 0.0;
};

inline ResidualSample vekua_residual_sample(const EllipticSystem& sys, const SolutionPair& p, double x, double y) {
  const Rhs rhs = detail::in_stage("manufacture_rhs", [&] { return manufacture_rhs(sys, p, x, y); });
  const VekuaPointData data = rewrite_at(sys, x, y, rhs);
  const WJet w = detail::in_stage("push_forward", [&] { return push_forward_jet(p, sys, x, y); });
  return {vekua_residual_from(data, w), solution_scale(w)};
}

/// Residual of the rewritten equation on the pushed-forward pair, with F
/// built from manufactured right-hand sides. Vanishes up to rounding.
inline GC vekua_residual(const EllipticSystem& sys, const SolutionPair& p, double x, double y) {
  return vekua_residual_sample(sys, p, x, y).residual;
}

struct SkippedPoint {
  Point point;
  std::string reason;
};

/// Residuals are normalized per node by (1 + solution scale), with the
/// componentwise maximum as the magnitude.
struct GridReport {
  double max_abs_residual = 0.0;
  double mean_abs_residual = 0.0;
  double max_raw_residual = 0.0;
  double solution_scale = 0.0;
  Point worst_point;
  std::size_t points_evaluated = 0;
  double tolerance = kDefaultTolerance;
  bool pass = false;
  std::vector<SkippedPoint> skipped;
};

/// Aggregates a per-node residual functor (x, y) -> ResidualSample over the
/// grid. Nodes whose evaluation throws are recorded as skipped.
template <typename ResidualFn>
GridReport grid_verify_with(ResidualFn&& residual, const Region& r, double tol, std::size_t threads = 1) {
  require_valid(r);
  struct Slot {
    bool ok = false;
    ResidualSample sample;
    std::string error;
  };
  std::vector<Slot> slots(r.size());
  parallel_for(
      r.size(),
      [&](std::size_t k) {
        const Point p = r.node(k);
        try {
          slots[k].sample = residual(p.x, p.y);
          slots[k].ok = true;
        } catch (const std::exception& e) {
          slots[k].error = e.what();
        }
      },
      threads);

  GridReport report;
  report.tolerance = tol;
  double sum = 0.0;
  bool first = true;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const Slot& slot = slots[k];
    const Point p = r.node(k);
    if (!slot.ok) {
      report.skipped.push_back({p, slot.error});
      continue;
    }
    const double raw = std::max(std::abs(slot.sample.residual.re), std::abs(slot.sample.residual.im));
    double normalized = raw / (1.0 + slot.sample.scale);
    if (std::isnan(normalized)) normalized = INFINITY;
    ++report.points_evaluated;
    sum += normalized;
    report.max_raw_residual = std::max(report.max_raw_residual, raw);
    report.solution_scale = std::max(report.solution_scale, slot.sample.scale);
    if (first || normalized > report.max_abs_residual) {
      report.max_abs_residual = normalized;
      report.worst_point = p;
      first = false;
    }
  }
  if (report.points_evaluated > 0) report.mean_abs_residual = sum / static_cast<double>(report.points_evaluated);
  report.pass = report.points_evaluated > 0 && report.max_abs_residual <= tol;
  return report;
}

inline GridReport grid_verify(const EllipticSystem& sys, const SolutionPair& p, const Region& r,
                              double tol = kDefaultTolerance, std::size_t threads = 1) {
  if (!(tol > 0.0)) throw std::invalid_argument("grid_verify: tolerance must be positive");
  return grid_verify_with([&](double x, double y) { return vekua_residual_sample(sys, p, x, y); }, r, tol, threads);
}

}  // namespace vekua
