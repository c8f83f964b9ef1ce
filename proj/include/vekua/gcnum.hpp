#pragma once

// Arithmetic in the two-dimensional commutative algebra R[X]/(X^2 + beta X + alpha).
// The imaginary unit satisfies i^2 = -beta i - alpha. Structure parameters are
// passed per operation since they vary with position.

#include <cmath>

#include "vekua/errors.hpp"

namespace vekua {

struct StructureParams {
  double alpha = 1.0;
  double beta = 0.0;

  bool finite() const noexcept { return std::isfinite(alpha) && std::isfinite(beta); }
  friend bool operator==(const StructureParams&, const StructureParams&) = default;
};

inline constexpr StructureParams kClassical{1.0, 0.0};

/// Element u + iv of the algebra. Equality is componentwise.
struct GC {
  double re = 0.0;
  double im = 0.0;

  bool finite() const noexcept { return std::isfinite(re) && std::isfinite(im); }
  friend bool operator==(const GC&, const GC&) = default;
};

inline constexpr double kDetEpsilon = 1e-12;

constexpr GC gc_add(GC a, GC b) noexcept { return {a.re + b.re, a.im + b.im}; }
constexpr GC gc_sub(GC a, GC b) noexcept { return {a.re - b.re, a.im - b.im}; }
constexpr GC gc_scale(double k, GC a) noexcept { return {k * a.re, k * a.im}; }
constexpr GC gc_conj(GC w) noexcept { return {w.re, -w.im}; }

constexpr GC gc_mul(GC a, GC b, StructureParams s) noexcept {
  const double vv = a.im * b.im;
  return {a.re * b.re - s.alpha * vv, (a.re * b.im + b.re * a.im) - s.beta * vv};
}

/// Norm form u^2 - beta u v + alpha v^2; determinant of multiplication by w.
constexpr double gc_det(GC w, StructureParams s) noexcept {
  return w.re * w.re - s.beta * w.re * w.im + s.alpha * w.im * w.im;
}

/// Multiplicative inverse. Throws DegenerateElement when the norm form is
/// numerically zero relative to u^2 + v^2 + 1.
inline GC gc_inv(GC w, StructureParams s) {
  const double det = gc_det(w, s);
  if (!(std::abs(det) >= kDetEpsilon * (w.re * w.re + w.im * w.im + 1.0))) {
    throw DegenerateElement("element is not invertible in this algebra");
  }
  return {(w.re - s.beta * w.im) / det, -w.im / det};
}

constexpr double discriminant(StructureParams s) noexcept { return 4.0 * s.alpha - s.beta * s.beta; }

constexpr bool is_elliptic(StructureParams s) noexcept { return discriminant(s) > 0.0; }

}  // namespace vekua
