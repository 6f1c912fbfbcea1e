#include "monolab/quadrature.hpp"

#include <limits>

namespace monolab::quad {

double upper_gamma_scaled(double a, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("upper_gamma_scaled: x must be > 0");
  // Gamma(a,x) = e^{-x} x^a / (x + 1 - a - 1(1-a)/(x + 3 - a - 2(2-a)/(...)))
  constexpr double tiny = 1e-300;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) return h;
  }
  throw QuadratureError("upper_gamma_scaled: continued fraction did not converge");
}

}  // namespace monolab::quad
