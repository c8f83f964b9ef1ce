#pragma once

#include <cmath>

namespace vekua {

// First-order jet in two variables: a value and its partials in x and y.
struct Jet2 {
  double value = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  static constexpr Jet2 constant(double c) noexcept { return {c, 0.0, 0.0}; }
  static constexpr Jet2 var_x(double x) noexcept { return {x, 1.0, 0.0}; }
  static constexpr Jet2 var_y(double y) noexcept { return {y, 0.0, 1.0}; }

  bool finite() const noexcept {
    return std::isfinite(value) && std::isfinite(dx) && std::isfinite(dy);
  }
  friend bool operator==(const Jet2&, const Jet2&) = default;
};

constexpr Jet2 operator-(Jet2 a) noexcept { return {-a.value, -a.dx, -a.dy}; }
constexpr Jet2 operator+(Jet2 a, Jet2 b) noexcept { return {a.value + b.value, a.dx + b.dx, a.dy + b.dy}; }
constexpr Jet2 operator-(Jet2 a, Jet2 b) noexcept { return {a.value - b.value, a.dx - b.dx, a.dy - b.dy}; }
constexpr Jet2 operator*(Jet2 a, Jet2 b) noexcept {
  return {a.value * b.value, a.dx * b.value + a.value * b.dx, a.dy * b.value + a.value * b.dy};
}
constexpr Jet2 operator*(double k, Jet2 a) noexcept { return {k * a.value, k * a.dx, k * a.dy}; }
constexpr Jet2 operator*(Jet2 a, double k) noexcept { return k * a; }
constexpr Jet2 operator+(Jet2 a, double k) noexcept { return {a.value + k, a.dx, a.dy}; }
constexpr Jet2 operator+(double k, Jet2 a) noexcept { return a + k; }
constexpr Jet2 operator-(Jet2 a, double k) noexcept { return {a.value - k, a.dx, a.dy}; }
constexpr Jet2 operator-(double k, Jet2 a) noexcept { return {k - a.value, -a.dx, -a.dy}; }

// Quotient rule. The caller is responsible for b.value != 0.
constexpr Jet2 operator/(Jet2 a, Jet2 b) noexcept {
  const double q = a.value / b.value;
  return {q, (a.dx - q * b.dx) / b.value, (a.dy - q * b.dy) / b.value};
}

// Applies a scalar function with known derivative through the chain rule.
constexpr Jet2 chain(Jet2 a, double f, double df) noexcept { return {f, df * a.dx, df * a.dy}; }

inline Jet2 sin(Jet2 a) { return chain(a, std::sin(a.value), std::cos(a.value)); }
inline Jet2 cos(Jet2 a) { return chain(a, std::cos(a.value), -std::sin(a.value)); }
inline Jet2 tan(Jet2 a) {
  const double t = std::tan(a.value);
  return chain(a, t, 1.0 + t * t);
}
inline Jet2 exp(Jet2 a) {
  const double e = std::exp(a.value);
  return chain(a, e, e);
}
inline Jet2 log(Jet2 a) { return chain(a, std::log(a.value), 1.0 / a.value); }
inline Jet2 sqrt(Jet2 a) {
  const double r = std::sqrt(a.value);
  return chain(a, r, 0.5 / r);
}
inline Jet2 tanh(Jet2 a) {
  const double t = std::tanh(a.value);
  return chain(a, t, 1.0 - t * t);
}
inline Jet2 abs(Jet2 a) { return chain(a, std::abs(a.value), a.value < 0.0 ? -1.0 : 1.0); }

// a^c for constant c.
inline Jet2 pow(Jet2 a, double c) {
  if (c == 0.0) return Jet2::constant(1.0);
  return chain(a, std::pow(a.value, c), c * std::pow(a.value, c - 1.0));
}

// a^b for a > 0, through exp(b log a).
inline Jet2 pow(Jet2 a, Jet2 b) { return exp(b * log(a)); }

}  // namespace vekua
