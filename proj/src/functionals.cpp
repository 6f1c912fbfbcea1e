#include "monolab/functionals.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "monolab/geometry.hpp"
#include "monolab/quadrature.hpp"

namespace monolab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// C(n,k,p) and C(n,k,l) within this of zero count as zero.
constexpr double kZeroConstant = 1e-12;

struct Setup {
  int n;
  double omega;
  double log_omega;
  Admissibility adm;
};

Setup setup(const BFunction& bd, const Params& prm, bool need_lambda3 = false) {
  Setup s{};
  s.n = bd.profile().dimension();
  s.omega = unit_sphere_area(s.n);
  s.log_omega = std::log(s.omega);
  s.adm = admissibility(s.n, prm, need_lambda3);
  return s;
}

void require_finite_volume(const Setup& su) {
  if (!(su.adm.C_nkp > kZeroConstant))
    throw DivergentFunctional("C(n,k,p) = " + std::to_string(su.adm.C_nkp) +
                              " <= 0: the volume integral diverges at the pole");
}

// Near the pole the V density behaves like r^{γ-1}. In the level variable
// b the exponent is C(n,k,p)/(n-2); with b ~ r^{(n-2)/(k-2)} this becomes
// C(n,k,p)/(k-2) in r.
double pole_exponent(const Setup& su, double k) { return su.adm.C_nkp / (k - 2.0); }

// log of |∇b|^{β+1} e^{-f} φ^{n-1}, the level-set density of A without ω.
double log_area_density(const BFunction::Sample& s, const Params& prm, int n) {
  return (prm.beta + 1.0) * std::log(s.db) - s.jets.f.value +
         (n - 1.0) * std::log(s.jets.phi.value);
}

// |∇b|^{2+β} b^{-p} e^{-f} φ^{n-1}
double volume_density(const BFunction::Sample& s, const Params& prm, int n) {
  return std::exp((2.0 + prm.beta) * std::log(s.db) - prm.p * s.log_b -
                  s.jets.f.value + (n - 1.0) * std::log(s.jets.phi.value));
}

double area_from_sample(const BFunction::Sample& s, const Params& prm,
                        const Setup& su, double rho) {
  return std::exp((1.0 - prm.l) * std::log(rho) + su.log_omega +
                  log_area_density(s, prm, su.n));
}

double area_derivative_from_sample(const BFunction::Sample& s, const Params& prm,
                                   int n, double A, double rho) {
  const double mean = s.jets.phi.d1 / s.jets.phi.value;
  const double log_rate = (n - 1.0) * mean - s.jets.f.d1 +
                          (prm.beta + 1.0) * s.d2b_over_db;  // Φ'/Φ in r
  return A / rho * ((1.0 - prm.l) + log_rate / s.dlog_b);
}

// Magnitude proxy for bulk integrands: n max(|β|,1) times the V density.
// Integrating (bulk + proxy) and subtracting the proxy keeps the quadrature
// error relative to the natural scale even where the bulk cancels to noise.
double proxy_weight(const Params& prm, int n) {
  return n * std::max(std::abs(prm.beta), 1.0);
}

double bulk_density(const BFunction& bd, const BFunction::Sample& s,
                    const Params& prm, int n, std::uint32_t mask) {
  return std::exp((prm.beta - 2.0) * std::log(s.db) - prm.p * s.log_b -
                  s.jets.f.value + (n - 1.0) * std::log(s.jets.phi.value)) *
         bulk_terms(s, bd, prm, mask);
}

}  // namespace

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

Admissibility admissibility(int n, const Params& prm, bool need_lambda3) {
  const double k = prm.k, l = prm.l, p = prm.p, beta = prm.beta;
  const double alpha = prm.alpha, c = prm.c, d = prm.d;
  Admissibility a{};
  a.C_nkp = (n - 2.0) * (k - p) - beta * (k - n);
  a.C_nkl = (k - l) * (n - 2.0) + (n - k) * beta;
  a.lambda1 = 3.0 * k - p - l - 2.0 - alpha;
  a.lambda2 = (p + 2.0 - 2.0 * k) * (k - p) - beta * k - alpha * (p - l);
  if (beta != 0.0)
    a.lambda3 = 4.0 / beta * (k + d - l + c - 1.0) * (k + d - l) - 4.0 * k;
  else if (need_lambda3)
    throw std::invalid_argument("lambda3 = (4/beta)(...) is undefined for beta = 0");
  a.lambda4 = 3.0 * k - 2.0 * l - 3.0 + c + 2.0 * d;
  return a;
}

double area_functional(const BFunction& bd, const Params& prm, double rho) {
  const Setup su = setup(bd, prm);
  return area_from_sample(bd.sample(bd.invert(rho)), prm, su, rho);
}

double area_derivative(const BFunction& bd, const Params& prm, double rho) {
  const Setup su = setup(bd, prm);
  const auto s = bd.sample(bd.invert(rho));
  return area_derivative_from_sample(s, prm, su.n, area_from_sample(s, prm, su, rho),
                                     rho);
}

double volume_functional(const BFunction& bd, const Params& prm, double rho,
                         double quad_tol) {
  const Setup su = setup(bd, prm);
  require_finite_volume(su);
  const double r = bd.invert(rho);
  const double integral = quad::integrate_from_pole(
      [&](double s) { return volume_density(bd.sample(s), prm, su.n); }, r,
      pole_exponent(su, prm.k), quad_tol);
  return std::exp((prm.p - prm.l) * std::log(rho)) * su.omega * integral;
}

std::vector<double> default_rho_grid(const BFunction& bd, std::size_t size) {
  const double r_max = bd.profile().r_max();
  return log_grid(bd.value(1e-3), bd.value(0.8 * r_max), size);
}

std::vector<CurvePoint> curve(const BFunction& bd, const Params& prm,
                              std::span<const double> rho_grid, double quad_tol) {
  const Setup su = setup(bd, prm);
  const bool has_volume = su.adm.C_nkp > kZeroConstant;
  auto density = [&](double s) { return volume_density(bd.sample(s), prm, su.n); };

  std::vector<CurvePoint> out;
  out.reserve(rho_grid.size());
  double integral = 0.0;
  double prev_r = 0.0;
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    const double rho = rho_grid[i];
    if (i > 0 && !(rho > rho_grid[i - 1]))
      throw std::invalid_argument("curve: rho grid must be strictly increasing");
    const double r = bd.invert(rho);
    const auto s = bd.sample(r);

    CurvePoint pt{};
    pt.rho = rho;
    pt.r = r;
    pt.A = area_from_sample(s, prm, su, rho);
    pt.dA = area_derivative_from_sample(s, prm, su.n, pt.A, rho);
    if (has_volume) {
      integral += i == 0 ? quad::integrate_from_pole(density, r, pole_exponent(su, prm.k),
                                                     quad_tol)
                         : quad::integrate_log(density, prev_r, r, quad_tol);
      const double scale = std::exp((prm.p - prm.l) * std::log(rho)) * su.omega;
      pt.V = scale * integral;
      // d/dρ of ρ^{p-l} ω ∫_0^{r(ρ)}: the upper limit moves at rate 1/b'.
      pt.dV = (prm.p - prm.l) / rho * pt.V + scale * volume_density(s, prm, su.n) / s.db;
    } else {
      pt.V = kNaN;
      pt.dV = kNaN;
    }
    out.push_back(pt);
    prev_r = r;
  }
  return out;
}

SmallRadiusLimits small_r_limits(int n, const Params& prm, double f0) {
  const Admissibility a = admissibility(n, prm);
  const double constant = std::pow((n - 2.0) / (prm.k - 2.0), 1.0 + prm.beta) *
                          unit_sphere_area(n) * std::exp(-f0);
  auto classify = [&](double value) {
    if (a.C_nkl > kZeroConstant) return LimitValue{LimitValue::Kind::Zero, 0.0};
    if (a.C_nkl < -kZeroConstant)
      return LimitValue{LimitValue::Kind::Infinite,
                        std::numeric_limits<double>::infinity()};
    return LimitValue{LimitValue::Kind::Finite, value};
  };
  SmallRadiusLimits lim{classify(constant), std::nullopt};
  if (a.C_nkp > kZeroConstant) lim.V = classify(constant * (n - 2.0) / a.C_nkp);
  return lim;
}

double h_invariant(const BFunction& bd, double rho) {
  const int n = bd.profile().dimension();
  const auto s = bd.sample(bd.invert(rho));
  return std::exp((1.0 - bd.k()) * std::log(rho) + std::log(unit_sphere_area(n)) +
                  (n - 1.0) * std::log(s.jets.phi.value) + std::log(s.db) -
                  s.jets.f.value);
}

double h_constant(const BFunction& bd) {
  const int n = bd.profile().dimension();
  return (n - 2.0) / (bd.k() - 2.0) * unit_sphere_area(n) *
         std::exp(-bd.profile().f0());
}

double bulk_terms(const BFunction::Sample& s, const BFunction& bd,
                  const Params& prm, std::uint32_t mask) {
  const RadialState st = radial_state(bd, s);
  const PointQuantities q = point_quantities(st);
  const double n = st.n, k = st.k, beta = prm.beta;
  const double db4 = std::pow(st.db, 4);
  const double bf = grad_b2_dot_grad_f(st);

  double sum = 0.0;
  if (mask & kHessB2Sq) sum += q.hess_b2_sq;
  if (mask & kBSq) sum += q.B_sq;
  if (mask & kRicfGrad) sum += q.ricf_grad;
  if (mask & kGradGradB) sum += 4.0 * (beta - 2.0) * st.b * st.b * q.grad_grad_b_sq;
  if (mask & kMinusFourKDb4) sum -= 4.0 * k * db4;
  if (mask & kFLinear) sum += 4.0 * st.db * st.db * bf;
  if (mask & kFSquare) sum += bf * bf / n;
  double out = beta / 4.0 * sum;
  if (mask & kLambda3Db4) {
    // (β/4) λ3 = (k+d-l+c-1)(k+d-l) - βk
    const double e = k + prm.d - prm.l;
    out += ((e + prm.c - 1.0) * e - beta * k) * db4;
  }
  return out;
}

double bulk_integral(const BFunction& bd, const Params& prm, double rho,
                     std::uint32_t mask, double quad_tol) {
  const std::array<double, 1> grid{rho};
  return bulk_curve(bd, prm, grid, mask, quad_tol).front();
}

std::vector<double> bulk_curve(const BFunction& bd, const Params& prm,
                               std::span<const double> rho_grid,
                               std::uint32_t mask, double quad_tol) {
  const Setup su = setup(bd, prm);
  require_finite_volume(su);
  const double w = proxy_weight(prm, su.n);
  auto shifted = [&](double s) {
    const auto smp = bd.sample(s);
    return bulk_density(bd, smp, prm, su.n, mask) + w * volume_density(smp, prm, su.n);
  };
  auto proxy = [&](double s) { return w * volume_density(bd.sample(s), prm, su.n); };

  std::vector<double> out;
  out.reserve(rho_grid.size());
  double total = 0.0, proxy_total = 0.0, prev_r = 0.0;
  const double gamma = pole_exponent(su, prm.k);
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    const double rho = rho_grid[i];
    if (i > 0 && !(rho > rho_grid[i - 1]))
      throw std::invalid_argument("bulk: rho grid must be strictly increasing");
    const double r = bd.invert(rho);
    if (i == 0) {
      total = quad::integrate_from_pole(shifted, r, gamma, quad_tol);
      proxy_total = quad::integrate_from_pole(proxy, r, gamma, quad_tol);
    } else {
      total += quad::integrate_log(shifted, prev_r, r, quad_tol);
      proxy_total += quad::integrate_log(proxy, prev_r, r, quad_tol);
    }
    out.push_back(std::exp((prm.p - 1.0 - prm.l) * std::log(rho)) * su.omega *
                  (total - proxy_total));
    prev_r = r;
  }
  return out;
}

double bulk_annulus(const BFunction& bd, const Params& prm, double rho1,
                    double rho2, std::uint32_t mask, double quad_tol) {
  return bulk_annulus_radii(bd, prm, bd.invert(rho1), bd.invert(rho2), mask,
                            quad_tol);
}

double bulk_annulus_radii(const BFunction& bd, const Params& prm, double r1,
                          double r2, std::uint32_t mask, double quad_tol) {
  const Setup su = setup(bd, prm);
  const double e = prm.c + prm.d - prm.l;  // weight exponent b^{c+d-l}
  const double w = proxy_weight(prm, su.n);
  auto parts = [&](double s, double& bulk, double& proxy) {
    const auto smp = bd.sample(s);
    const double common = -smp.jets.f.value + (su.n - 1.0) * std::log(smp.jets.phi.value);
    bulk = std::exp((e - 1.0) * smp.log_b + (prm.beta - 2.0) * std::log(smp.db) + common) *
           bulk_terms(smp, bd, prm, mask);
    if (mask & kLambda4)
      bulk += su.adm.lambda4 * prm.beta *
              std::exp(e * smp.log_b + prm.beta * std::log(smp.db) + common) * smp.d2b;
    proxy = w * std::exp((e - 1.0) * smp.log_b + (prm.beta + 2.0) * std::log(smp.db) +
                         common);
  };
  const double total = quad::integrate_log(
      [&](double s) {
        double b, p;
        parts(s, b, p);
        return b + p;
      },
      r1, r2, quad_tol);
  const double proxy_total = quad::integrate_log(
      [&](double s) {
        double b, p;
        parts(s, b, p);
        return p;
      },
      r1, r2, quad_tol);
  return su.omega * (total - proxy_total);
}

double g_quantity(const BFunction& bd, const Params& prm, double rho) {
  const Setup su = setup(bd, prm);
  const auto s = bd.sample(bd.invert(rho));
  const double A = area_from_sample(s, prm, su, rho);
  const double dA = area_derivative_from_sample(s, prm, su.n, A, rho);
  return std::exp((prm.c + prm.d - 1.0) * std::log(rho)) * (prm.d * A + rho * dA);
}

}  // namespace monolab
