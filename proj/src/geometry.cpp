#include "monolab/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace monolab {

RadialState radial_state(const BFunction& bd, const BFunction::Sample& s) {
  const int n = bd.profile().dimension();
  const double k = bd.k();
  RadialState st{};
  st.r = s.r;
  st.n = n;
  st.k = k;
  st.b = s.b;
  st.db = s.db;
  st.d2b = s.d2b;
  st.phi = s.jets.phi.value;
  st.dphi = s.jets.phi.d1;
  st.d2phi = s.jets.phi.d2;
  st.f = s.jets.f.value;
  st.df = s.jets.f.d1;
  st.d2f = s.jets.f.d2;

  // b''' = b'' L + b' L' with L = b''/b'; g = G'/G and
  // (G'/G)' = (f' - (n-1) phi'/phi) g - g^2.
  const double g = (2.0 - k) * s.dlog_b;
  const double mean = st.dphi / st.phi;
  const double dmean = st.d2phi / st.phi - mean * mean;
  const double dg = (st.df - (n - 1) * mean) * g - g * g;
  const double dL = st.d2f - (n - 1) * dmean - (k - 1.0) / (k - 2.0) * dg;
  st.d3b = st.d2b * s.d2b_over_db + st.db * dL;
  return st;
}

RadialState radial_state(const BFunction& bd, double r) {
  return radial_state(bd, bd.sample(r));
}

PointQuantities point_quantities(const RadialState& s) {
  if (!(s.r > 0.0)) throw std::domain_error("point_quantities: r must be positive");
  const double n = s.n;
  const double w1 = 2.0 * s.b * s.db;
  const double w2 = 2.0 * s.db * s.db + 2.0 * s.b * s.d2b;
  const double x = w1 * s.dphi / s.phi;  // tangential Hessian eigenvalue

  PointQuantities q{};
  q.hess_b2_sq = w2 * w2 + (n - 1.0) * x * x;
  q.lap_b2 = w2 + (n - 1.0) * x;
  q.lapf_b2 = q.lap_b2 - s.df * w1;
  q.ricf_grad = w1 * w1 * (s.d2f - (n - 1.0) * s.d2phi / s.phi);
  q.grad_grad_b_sq = s.d2b * s.d2b;
  q.lambda = 2.0 * s.db * s.db - q.lap_b2 / n;
  q.B_sq = (n - 1.0) / n * (w2 - x) * (w2 - x);
  const double bb = s.b * s.d2b;
  q.B_nu_sq = 4.0 * bb * bb + q.lambda * q.lambda + 4.0 * q.lambda * bb;
  return q;
}

double radial_laplacian_f(const RadialState& s, const Jet2& u) {
  return u.d2 + ((s.n - 1) * s.dphi / s.phi - s.df) * u.d1;
}

double delta_f_grad_b_beta(const RadialState& s, double beta) {
  return delta_f_weighted(s, 0.0, beta);
}

double delta_f_weighted(const RadialState& s, double q, double beta) {
  const double k = s.k;
  const double db2 = s.db * s.db;
  if (beta == 0.0) {
    // Everything but the 8q/β term carries a factor β.
    return 2.0 * q * (k - 2.0 + 2.0 * q) * std::pow(s.b, 2.0 * q - 2.0) * db2;
  }
  const PointQuantities pq = point_quantities(s);
  const double braces = pq.hess_b2_sq + pq.ricf_grad +
                        2.0 * (k - 2.0 + 2.0 * q) * grad_b2_dot_grad_grad_b_sq(s) +
                        4.0 * (beta - 2.0) * s.b * s.b * pq.grad_grad_b_sq +
                        (8.0 * q / beta * (k - 2.0 + 2.0 * q) - 4.0 * k) * db2 * db2;
  return beta / 4.0 * std::pow(s.b, 2.0 * q - 2.0) * std::pow(s.db, beta - 2.0) *
         braces;
}

double bochner_residual(const RadialState& s,
                        const std::function<Jet2(double)>& u) {
  constexpr double h = 1e-5;
  const Jet2 j = u(s.r);
  const double u1 = j.d1, u2 = j.d2;
  const double u3 = (u(s.r + h).d2 - u(s.r - h).d2) / (2.0 * h);

  const double n = s.n;
  const double mean = s.dphi / s.phi;
  const double drift = (n - 1.0) * mean - s.df;
  const double ddrift = (n - 1.0) * (s.d2phi / s.phi - mean * mean) - s.d2f;

  // |∇u|^2 = u'^2: (u'^2)' = 2u'u'', (u'^2)'' = 2u''^2 + 2u'u'''.
  const double half_lap = u2 * u2 + u1 * u3 + drift * u1 * u2;
  const double hess = u2 * u2 + (n - 1.0) * (u1 * mean) * (u1 * mean);
  const double grad_lap = u1 * (u3 + drift * u2 + ddrift * u1);
  const double ric = u1 * u1 * (s.d2f - (n - 1.0) * s.d2phi / s.phi);

  const double residual = half_lap - hess - grad_lap - ric;
  const double scale =
      std::abs(half_lap) + std::abs(hess) + std::abs(grad_lap) + std::abs(ric);
  return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual);
}

std::function<Jet2(double)> b_jet(const BFunction& bd) {
  return [&bd](double r) {
    const auto s = bd.sample(r);
    return Jet2{s.b, s.db, s.d2b};
  };
}

}  // namespace monolab
