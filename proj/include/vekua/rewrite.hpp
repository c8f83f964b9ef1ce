#pragma once

// Pointwise rewriting of an elliptic system as a Vekua-type equation
//
//   d_zbar W + A W + B conj(W) = F,   d_zbar = (d_x + i d_y) / 2,
//
// over the algebra with i^2 = -beta i - alpha. The substitution is
// U = a22 u, V = v - a12 u, followed by two row operations that bring the
// principal part to the generalized Cauchy-Riemann operator.

#include <optional>
#include <string>

#include "vekua/ellsys.hpp"
#include "vekua/errors.hpp"
#include "vekua/expr.hpp"
#include "vekua/gcnum.hpp"
#include "vekua/jet.hpp"

namespace vekua {

/// Point values of the system in (U, V) after the substitution:
///   -V_y + inv_alpha_coeff U_x + a* U + b* V = f1
///    V_x + mixed_coeff U_x + U_y + c* U + d* V = f2
struct IntermediateSystem {
  double a_star = 0.0;
  double b_star = 0.0;
  double c_star = 0.0;
  double d_star = 0.0;
  double inv_alpha_coeff = 0.0;
  double mixed_coeff = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  // Values of a22 and a12 used by the substitution.
  double a22 = 0.0;
  double a12 = 0.0;
};

/// Coefficients of the canonical form at a point:
///   -alpha V_y + U_x + a U + b V = f
///    V_x - beta V_y + U_y + c U + d V = g
struct CanonicalPoint {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double f = 0.0;
  double g = 0.0;
};

struct VekuaCoefficients {
  GC A;
  GC B;
  GC F;
};

struct VekuaPointData {
  StructureParams s;
  IntermediateSystem intermediate;
  CanonicalPoint canonical;
  GC A;
  GC B;
  GC F;
  // Substitution record: the values of a22 and a12 used at this point.
  double a22 = 0.0;
  double a12 = 0.0;
};

/// Right-hand sides replacing f1, f2 of the system at a point.
struct Rhs {
  double f1 = 0.0;
  double f2 = 0.0;
};

/// Expands U = a22 u, V = v - a12 u with the product rule. Derivatives of a22
/// and a12 enter the zeroth-order coefficients.
inline IntermediateSystem substitute(const EllipticSystem& sys, double x, double y) {
  return detail::at_point(x, y, [&] {
    const double a11 = eval(sys.a11, x, y);
    const Jet2 a22 = eval_jet(sys.a22, x, y);
    const Jet2 a12 = eval_jet(sys.a12, x, y);
    const double a21 = eval(sys.a21, x, y);
    if (!(a22.value > kPositiveEpsilon)) throw NonPositiveLeadingCoefficient("a22 <= 0");
    const double a1 = eval(sys.a1, x, y);
    const double a2 = eval(sys.a2, x, y);
    const double b1 = eval(sys.b1, x, y);
    const double b2 = eval(sys.b2, x, y);
    const double a22_sq = a22.value * a22.value;

    IntermediateSystem out;
    out.a_star = (a1 - a12.dy + b1 * a12.value) / a22.value - a11 * a22.dx / a22_sq;
    out.b_star = b1;
    out.c_star = (a2 + a12.dx + b2 * a12.value) / a22.value - a22.dy / a22.value -
                 (a12.value + a21) * a22.dx / a22_sq;
    out.d_star = b2;
    out.inv_alpha_coeff = a11 / a22.value;
    out.mixed_coeff = (a21 + a12.value) / a22.value;
    out.f1 = eval(sys.f1, x, y);
    out.f2 = eval(sys.f2, x, y);
    out.a22 = a22.value;
    out.a12 = a12.value;
    return out;
  });
}

inline void require_elliptic(StructureParams s) {
  if (!s.finite() || !is_elliptic(s)) throw NotElliptic("structure parameters are not elliptic (4 alpha - beta^2 <= 0)");
  if (!(s.alpha > kPositiveEpsilon)) throw NotElliptic("alpha <= 0");
}

/// Adds beta times line 1 to line 2 (cancelling U_x there), then scales line 1 by alpha.
inline CanonicalPoint row_reduce(const IntermediateSystem& in, StructureParams s) {
  require_elliptic(s);
  return {s.alpha * in.a_star,          s.alpha * in.b_star, in.c_star + s.beta * in.a_star,
          in.d_star + s.beta * in.b_star, s.alpha * in.f1,    in.f2 + s.beta * in.f1};
}

/// U_x coefficient of line 2 after the first row operation; zero by construction.
inline double residual_mixed_coeff(const IntermediateSystem& in, StructureParams s) {
  return s.beta * in.inv_alpha_coeff + in.mixed_coeff;
}

/// A = (a - (beta/alpha) b + d + i (c - b/alpha)) / 4
/// B = (a + (beta/alpha) b - d + i (c + b/alpha)) / 4
/// F = (f + i g) / 2
inline VekuaCoefficients assemble_vekua(const CanonicalPoint& cp, StructureParams s) {
  require_elliptic(s);
  const double r = s.beta / s.alpha;
  const double b_over_alpha = cp.b / s.alpha;
  return {GC{0.25 * (cp.a - r * cp.b + cp.d), 0.25 * (cp.c - b_over_alpha)},
          GC{0.25 * (cp.a + r * cp.b - cp.d), 0.25 * (cp.c + b_over_alpha)},
          GC{0.5 * cp.f, 0.5 * cp.g}};
}

namespace detail {

template <typename F>
auto in_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (Error& e) {
    e.add_context(stage);
    throw;
  }
}

}  // namespace detail

/// Full pipeline at one point. When `rhs` is given it replaces the system's
/// f1, f2 before the row operations.
inline VekuaPointData rewrite_at(const EllipticSystem& sys, double x, double y,
                                 const std::optional<Rhs>& rhs = std::nullopt) {
  VekuaPointData out;
  out.s = detail::in_stage("structure_params", [&] {
    const StructureParams s = structure_params(sys, x, y);
    try {
      require_elliptic(s);
    } catch (Error& e) {
      e.set_point({x, y});
      throw;
    }
    return s;
  });
  out.intermediate = detail::in_stage("substitute", [&] { return substitute(sys, x, y); });
  if (rhs) {
    out.intermediate.f1 = rhs->f1;
    out.intermediate.f2 = rhs->f2;
  }
  out.canonical = detail::in_stage("row_reduce", [&] { return row_reduce(out.intermediate, out.s); });
  const VekuaCoefficients c = detail::in_stage("assemble_vekua", [&] { return assemble_vekua(out.canonical, out.s); });
  out.A = c.A;
  out.B = c.B;
  out.F = c.F;
  out.a22 = out.intermediate.a22;
  out.a12 = out.intermediate.a12;
  return out;
}

/// W = U + iV with U = a22 u and V = v - a12 u, as jets.
struct WJet {
  Jet2 re;
  Jet2 im;

  GC value() const noexcept { return {re.value, im.value}; }
  GC dx() const noexcept { return {re.dx, im.dx}; }
  GC dy() const noexcept { return {re.dy, im.dy}; }
};

inline WJet push_forward_jet(const SolutionPair& p, const EllipticSystem& sys, double x, double y) {
  return detail::at_point(x, y, [&] {
    const Jet2 u = eval_jet(p.u, x, y);
    const Jet2 v = eval_jet(p.v, x, y);
    const Jet2 a22 = eval_jet(sys.a22, x, y);
    const Jet2 a12 = eval_jet(sys.a12, x, y);
    return WJet{a22 * u, v - a12 * u};
  });
}

/// (a22 u, v - a12 u) at the point.
inline GC push_forward_solution(const SolutionPair& p, const EllipticSystem& sys, double x, double y) {
  return detail::at_point(x, y, [&] {
    const double u = eval(p.u, x, y);
    return GC{eval(sys.a22, x, y) * u, eval(p.v, x, y) - eval(sys.a12, x, y) * u};
  });
}

}  // namespace vekua
