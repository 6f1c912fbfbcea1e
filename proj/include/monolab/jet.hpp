#pragma once

#include <cmath>

namespace monolab {

/// Value of a radial function together with its first and second
/// derivative in r. Arithmetic propagates derivatives by the product and
/// chain rules (second-order forward-mode differentiation).
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static constexpr Jet2 constant(double v) { return {v, 0.0, 0.0}; }
  static constexpr Jet2 variable(double r) { return {r, 1.0, 0.0}; }
};

constexpr Jet2 operator-(const Jet2& a) { return {-a.value, -a.d1, -a.d2}; }

constexpr Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2};
}

constexpr Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2};
}

constexpr Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
          a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
}

constexpr Jet2 operator*(double s, const Jet2& a) {
  return {s * a.value, s * a.d1, s * a.d2};
}

// Caller guarantees b.value != 0.
constexpr Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double q = a.value / b.value;
  const double q1 = (a.d1 - q * b.d1) / b.value;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.value;
  return {q, q1, q2};
}

/// Applies a scalar function g with known g, g', g'' at u.value.
constexpr Jet2 compose(const Jet2& u, double g, double g1, double g2) {
  return {g, g1 * u.d1, g2 * u.d1 * u.d1 + g1 * u.d2};
}

inline Jet2 exp(const Jet2& u) {
  const double e = std::exp(u.value);
  return compose(u, e, e, e);
}

inline Jet2 log(const Jet2& u) {
  const double inv = 1.0 / u.value;
  return compose(u, std::log(u.value), inv, -inv * inv);
}

inline Jet2 sqrt(const Jet2& u) {
  const double s = std::sqrt(u.value);
  return compose(u, s, 0.5 / s, -0.25 / (s * u.value));
}

inline Jet2 sin(const Jet2& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return compose(u, s, c, -s);
}

inline Jet2 cos(const Jet2& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return compose(u, c, -s, -c);
}

inline Jet2 tan(const Jet2& u) {
  const double t = std::tan(u.value);
  const double sec2 = 1.0 + t * t;
  return compose(u, t, sec2, 2.0 * t * sec2);
}

inline Jet2 sinh(const Jet2& u) {
  const double s = std::sinh(u.value), c = std::cosh(u.value);
  return compose(u, s, c, s);
}

inline Jet2 cosh(const Jet2& u) {
  const double s = std::sinh(u.value), c = std::cosh(u.value);
  return compose(u, c, s, c);
}

inline Jet2 tanh(const Jet2& u) {
  const double t = std::tanh(u.value);
  const double sech2 = 1.0 - t * t;
  return compose(u, t, sech2, -2.0 * t * sech2);
}

inline Jet2 atan(const Jet2& u) {
  const double w = 1.0 / (1.0 + u.value * u.value);
  return compose(u, std::atan(u.value), w, -2.0 * u.value * w * w);
}

/// u^m for integer m. Derivative terms whose coefficient vanishes are
/// skipped so that u = 0 with small m stays finite.
inline Jet2 pow_int(const Jet2& u, int m) {
  if (m == 0) return Jet2::constant(1.0);
  const double um = std::pow(u.value, m);
  const double g1 = static_cast<double>(m) * std::pow(u.value, m - 1);
  const double g2 = (m == 1) ? 0.0
                             : static_cast<double>(m) * (m - 1) *
                                   std::pow(u.value, m - 2);
  return compose(u, um, g1, g2);
}

/// u^v = exp(v log u); requires u.value > 0.
inline Jet2 pow(const Jet2& u, const Jet2& v) { return exp(v * log(u)); }

}  // namespace monolab
