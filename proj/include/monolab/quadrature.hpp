#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace monolab::quad {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive Gauss-Kronrod (G10/K21) on [a, b]. Converged when the error
/// estimate is below rel_tol times the L1 norm of the integrand.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  // Boost's estimate carries an absolute floor, so the integrand is mapped to
  // [0, 1] and scaled to O(1) before the adaptive pass.
  const double width = b - a;
  double scale = std::abs(f(a + 0.5 * width));
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
  auto g = [&](double x) { return f(a + x * width) / scale; };
  double error = 0.0, l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      g, 0.0, 1.0, 30, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > rel_tol * l1 + 1e-300)
    throw QuadratureError("quadrature on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "] did not reach tolerance " +
                          std::to_string(rel_tol) + " (error estimate " +
                          std::to_string(error / (l1 > 0 ? l1 : 1.0)) + ")");
  return value * scale * width;
}

/// Integral over [a, b] with 0 < a < b, taken in the variable t = log s.
template <class F>
double integrate_log(F&& f, double a, double b, double rel_tol) {
  return integrate(
      [&](double t) {
        const double s = std::exp(t);
        return f(s) * s;
      },
      std::log(a), std::log(b), rel_tol);
}

/// Relative position of the cut below which the pole piece is modelled.
inline constexpr double kPoleCut = 1e-12;

/// Integral over (0, b] of f with f(s) ~ c s^(gamma-1) as s -> 0, gamma > 0.
/// The piece below s_c = kPoleCut b is f(s_c) s_c / gamma (leading power
/// extracted analytically); the rest is integrated in log s.
template <class F>
double integrate_from_pole(F&& f, double b, double gamma, double rel_tol) {
  if (!(gamma > 0.0))
    throw QuadratureError("integrand is not integrable at the pole (exponent " +
                          std::to_string(gamma) + ")");
  const double sc = kPoleCut * b;
  return f(sc) * sc / gamma + integrate_log(f, sc, b, rel_tol);
}

/// Eight-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss_legendre8(F&& f, double a, double b) {
  static constexpr std::array<double, 4> x{
      0.1834346424956498049394761, 0.5255324099163289858177390,
      0.7966664774136267395915539, 0.9602898564975362316835609};
  static constexpr std::array<double, 4> w{
      0.3626837833783619829651504, 0.3137066458778872873379622,
      0.2223810344533744705443560, 0.1012285362903762591525314};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    sum += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
  return sum * h;
}

/// e^x x^(-a) Gamma(a, x) for x > 0 and any real a, by the Legendre
/// continued fraction (modified Lentz).
double upper_gamma_scaled(double a, double x);

}  // namespace monolab::quad
