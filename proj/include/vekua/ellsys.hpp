#pragma once

// First-order systems in the plane
//
//   -v_y + a11 u_x + a12 u_y + a1 u + b1 v = f1
//    v_x + a21 u_x + a22 u_y + a2 u + b2 v = f2
//
// with grid-certified ellipticity, the induced structure parameters, and the
// generator for variable-coefficient systems with constant (alpha, beta).

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vekua/errors.hpp"
#include "vekua/expr.hpp"
#include "vekua/gcnum.hpp"

namespace vekua {

inline constexpr double kPositiveEpsilon = 1e-12;

struct EllipticSystem {
  Expr a11 = Expr::number(1.0);
  Expr a12 = Expr::number(0.0);
  Expr a21 = Expr::number(0.0);
  Expr a22 = Expr::number(1.0);
  Expr a1 = Expr::number(0.0);
  Expr a2 = Expr::number(0.0);
  Expr b1 = Expr::number(0.0);
  Expr b2 = Expr::number(0.0);
  Expr f1 = Expr::number(0.0);
  Expr f2 = Expr::number(0.0);
};

/// Field names in the canonical order used by config files.
inline constexpr std::string_view kSystemFields[] = {"a11", "a12", "a21", "a22", "a1",
                                                     "a2",  "b1",  "b2",  "f1",  "f2"};

inline Expr& system_field(EllipticSystem& sys, std::string_view name) {
  if (name == "a11") return sys.a11;
  if (name == "a12") return sys.a12;
  if (name == "a21") return sys.a21;
  if (name == "a22") return sys.a22;
  if (name == "a1") return sys.a1;
  if (name == "a2") return sys.a2;
  if (name == "b1") return sys.b1;
  if (name == "b2") return sys.b2;
  if (name == "f1") return sys.f1;
  if (name == "f2") return sys.f2;
  throw std::invalid_argument("unknown system field '" + std::string(name) + "'");
}

inline const Expr& system_field(const EllipticSystem& sys, std::string_view name) {
  return system_field(const_cast<EllipticSystem&>(sys), name);
}

struct SolutionPair {
  Expr u;
  Expr v;
};

/// Rectangle sampled on a node-inclusive uniform nx-by-ny grid.
struct Region {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  std::size_t nx = 2;
  std::size_t ny = 2;

  bool valid() const noexcept { return x_min < x_max && y_min < y_max && nx >= 2 && ny >= 2; }

  std::size_t size() const noexcept { return nx * ny; }

  /// Node k in row-major order: y is the slow index, x the fast one.
  Point node(std::size_t k) const noexcept {
    const std::size_t i = k % nx;
    const std::size_t j = k / nx;
    return {x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(nx - 1),
            y_min + (y_max - y_min) * static_cast<double>(j) / static_cast<double>(ny - 1)};
  }
};

inline void require_valid(const Region& r) {
  if (!r.valid()) throw std::invalid_argument("invalid region: need x_min < x_max, y_min < y_max, nx, ny >= 2");
}

namespace detail {

// Evaluates with the point attached to any failure.
template <typename F>
auto at_point(double x, double y, F&& f) {
  try {
    return f();
  } catch (Error& e) {
    e.set_point({x, y});
    throw;
  }
}

}  // namespace detail

namespace detail {

inline bool is_number(const Expr& e, double v) { return e.op() == Op::Number && e.value() == v; }

// k * e with constant folding.
inline Expr scaled(double k, const Expr& e) {
  if (k == 0.0) return Expr::number(0.0);
  if (k == 1.0) return e;
  if (e.op() == Op::Number) return Expr::number(k * e.value());
  return Expr::number(k) * e;
}

// a - b with constant folding.
inline Expr difference(const Expr& a, const Expr& b) {
  if (a.op() == Op::Number && b.op() == Op::Number) return Expr::number(a.value() - b.value());
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return -b;
  return a - b;
}

}  // namespace detail

/// a11 a22 - (a12 + a21)^2 / 4.
inline double delta(const EllipticSystem& sys, double x, double y) {
  return detail::at_point(x, y, [&] {
    const double s = eval(sys.a12, x, y) + eval(sys.a21, x, y);
    return eval(sys.a11, x, y) * eval(sys.a22, x, y) - 0.25 * s * s;
  });
}

enum class EllipticityFailure { A11NonPositive, A22NonPositive, DeltaNonPositive };

inline std::string_view describe(EllipticityFailure f) {
  switch (f) {
    case EllipticityFailure::A11NonPositive:
      return "a11 <= 0";
    case EllipticityFailure::A22NonPositive:
      return "a22 <= 0";
    case EllipticityFailure::DeltaNonPositive:
      return "delta <= 0";
  }
  return "?";
}

struct Witness {
  Point point;
  EllipticityFailure reason;
};

/// Outcome of grid certification. An empty witness means elliptic.
struct Classification {
  std::optional<Witness> witness;

  bool elliptic() const noexcept { return !witness.has_value(); }
};

/// Pointwise ellipticity test; returns the first violated condition, if any.
inline std::optional<EllipticityFailure> ellipticity_failure_at(const EllipticSystem& sys, double x, double y) {
  return detail::at_point(x, y, [&]() -> std::optional<EllipticityFailure> {
    if (!(eval(sys.a11, x, y) > kPositiveEpsilon)) return EllipticityFailure::A11NonPositive;
    if (!(eval(sys.a22, x, y) > kPositiveEpsilon)) return EllipticityFailure::A22NonPositive;
    if (!(delta(sys, x, y) > 0.0)) return EllipticityFailure::DeltaNonPositive;
    return std::nullopt;
  });
}

/// Checks every grid node in row-major order and reports the first failure.
/// Throws EvalError (carrying the point) if a coefficient cannot be evaluated.
inline Classification classify(const EllipticSystem& sys, const Region& r) {
  require_valid(r);
  for (std::size_t k = 0; k < r.size(); ++k) {
    const Point p = r.node(k);
    if (auto failure = ellipticity_failure_at(sys, p.x, p.y)) return {Witness{p, *failure}};
  }
  return {};
}

/// alpha = a22 / a11, beta = -(a21 + a12) / a11.
inline StructureParams structure_params(const EllipticSystem& sys, double x, double y) {
  return detail::at_point(x, y, [&] {
    const double a11 = eval(sys.a11, x, y);
    if (!(a11 > kPositiveEpsilon)) throw NonPositiveLeadingCoefficient("a11 <= 0");
    // + 0.0 maps -0 to 0 for symmetric systems.
    return StructureParams{eval(sys.a22, x, y) / a11, -(eval(sys.a21, x, y) + eval(sys.a12, x, y)) / a11 + 0.0};
  });
}

/// Homogeneous system with a11 = lambda, a22 = alpha0 lambda, a12 = mu,
/// a21 = -beta0 lambda - mu, so that (alpha, beta) = (alpha0, beta0) wherever
/// lambda > 0. mu is a free off-diagonal split.
inline EllipticSystem make_constant_structure_family(double alpha0, double beta0, const Expr& lambda, const Expr& mu) {
  const StructureParams s{alpha0, beta0};
  if (!s.finite() || !is_elliptic(s)) {
    throw NotElliptic("constant structure family requires 4 alpha0 - beta0^2 > 0");
  }
  EllipticSystem sys;
  sys.a11 = lambda;
  sys.a22 = detail::scaled(alpha0, lambda);
  sys.a12 = mu;
  sys.a21 = detail::difference(detail::scaled(-beta0, lambda), mu);
  return sys;
}

}  // namespace vekua
