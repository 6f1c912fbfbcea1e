#include "monolab/green.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "monolab/quadrature.hpp"

namespace monolab {

namespace {

constexpr int kMaxTailPanels = 200;
// The tail is closed with the model once its share falls below this
// fraction of quad_tol.
constexpr double kTailShare = 1e-3;

}  // namespace

GreenFunction::GreenFunction(Profile profile, GreenOptions options)
    : profile_(std::move(profile)), options_(options) {
  if (!profile_.tail().integrable(profile_.dimension()))
    throw quad::QuadratureError(
        "Green's function tail is not integrable under the tail model");
  if (options_.grid_size < 2)
    throw std::invalid_argument("Green grid needs at least two points");
  if (!(options_.r_lo < profile_.r_max()))
    throw std::invalid_argument("Green grid: r_lo must be below r_max");

  grid_ = log_grid(options_.r_lo, profile_.r_max(), options_.grid_size);
  log_r_lo_ = std::log(options_.r_lo);
  log_step_ = (std::log(profile_.r_max()) - log_r_lo_) /
              static_cast<double>(options_.grid_size - 1);

  const double n = dimension();
  const double f0 = profile_.f0();
  log_g_.resize(grid_.size());
  log_g_.back() = log_value_direct(grid_.back());
  for (std::size_t i = grid_.size() - 1; i-- > 0;) {
    const double upper = log_g_[i + 1];
    const double piece = quad::integrate(
        [&](double s) { return std::exp(log_weight(s) - f0 - upper); }, grid_[i],
        grid_[i + 1], options_.quad_tol);
    log_g_[i] = upper + std::log1p((n - 2.0) * piece);
  }
}

double GreenFunction::log_weight(double s) const {
  const ProfileJets j = profile_.jets(s);
  return j.f.value + (1.0 - dimension()) * std::log(j.phi.value);
}

double GreenFunction::log_value_direct(double r) const {
  const int n = dimension();
  const double tol = options_.quad_tol;
  const ProfileJets j = profile_.jets(r);
  const double log_w_r = j.f.value + (1.0 - n) * std::log(j.phi.value);
  const double rate = std::abs(j.f.d1 + (1.0 - n) * j.phi.d1 / j.phi.value);
  double width = rate > 0.0 ? std::min(r, 1.0 / rate) : r;

  const double q = profile_.tail().phi_growth_exponent * (n - 1);
  const double slope = profile_.tail().f_slope;
  auto model_remainder = [&](double R) {
    const double m = std::exp(log_weight(R) - log_w_r);
    if (m == 0.0) return 0.0;
    if (slope < 0.0) return m * R * quad::upper_gamma_scaled(1.0 - q, -slope * R);
    return m * R / (q - 1.0);
  };

  double h = 0.0;
  double R = r;
  double remainder = 0.0;
  for (int panel = 0; panel < kMaxTailPanels; ++panel) {
    h += quad::integrate([&](double s) { return std::exp(log_weight(s) - log_w_r); },
                         R, R + width, tol);
    R += width;
    width *= 2.0;
    remainder = model_remainder(R);
    if (remainder <= kTailShare * tol * h) break;
  }
  h += remainder;
  return std::log(n - 2.0) + log_w_r - profile_.f0() + std::log(h);
}

double GreenFunction::log_value_below(double r) const {
  // G(r) = G(r_lo) + w (r^{2-n} - r_lo^{2-n}) with w = e^{f-f0} (phi/s)^{1-n}
  // frozen at r_lo; the neglected variation of w is O(r_lo).
  const double n = dimension();
  const double log_w = log_weight(options_.r_lo) - profile_.f0() +
                       (n - 1.0) * log_r_lo_;
  const double a = log_w + (2.0 - n) * std::log(r);
  const double b = log_g_.front();
  const double c = log_w + (2.0 - n) * log_r_lo_;
  return a + std::log1p(std::exp(b - a) - std::exp(c - a));
}

double GreenFunction::log_value(double r) const {
  if (!(r > 0.0)) throw std::domain_error("Green's function evaluated at r <= 0");
  if (r >= grid_.back()) {
    return r == grid_.back() ? log_g_.back() : log_value_direct(r);
  }
  if (r < grid_.front()) return log_value_below(r);

  const auto last = static_cast<std::ptrdiff_t>(grid_.size()) - 2;
  auto i = static_cast<std::ptrdiff_t>(std::floor((std::log(r) - log_r_lo_) / log_step_));
  i = std::clamp<std::ptrdiff_t>(i, 0, last);
  while (i > 0 && grid_[i] > r) --i;
  while (i < last && grid_[i + 1] < r) ++i;
  const std::size_t upper = static_cast<std::size_t>(i) + 1;
  if (r == grid_[upper]) return log_g_[upper];

  const double lg_upper = log_g_[upper];
  const double f0 = profile_.f0();
  const double piece = quad::gauss_legendre8(
      [&](double s) { return std::exp(log_weight(s) - f0 - lg_upper); }, r,
      grid_[upper]);
  return lg_upper + std::log1p((dimension() - 2.0) * piece);
}

double GreenFunction::value(double r) const { return std::exp(log_value(r)); }

double GreenFunction::derivative(double r) const {
  const double n = dimension();
  const ProfileJets j = profile_.jets(r);
  return -(n - 2.0) * std::exp(j.f.value - profile_.f0()) *
         std::pow(j.phi.value, 1.0 - n);
}

double GreenFunction::second_derivative(double r) const {
  const double n = dimension();
  const ProfileJets j = profile_.jets(r);
  return (j.f.d1 - (n - 1.0) * j.phi.d1 / j.phi.value) * derivative(r);
}

double GreenFunction::log_derivative(double r) const {
  const double n = dimension();
  return -std::exp(std::log(n - 2.0) + log_weight(r) - profile_.f0() -
                   log_value(r));
}

std::shared_ptr<const GreenFunction> compute_green(const Profile& p,
                                                   double quad_tol) {
  GreenOptions opts;
  opts.quad_tol = quad_tol;
  return std::make_shared<const GreenFunction>(p, opts);
}

// ---------------------------------------------------------------------------

BFunction::BFunction(std::shared_ptr<const GreenFunction> green, double k)
    : green_(std::move(green)), k_(k) {
  if (!(k > 2.0)) throw std::invalid_argument("b = G^{1/(2-k)} needs k > 2");
  if (!green_) throw std::invalid_argument("BFunction needs a Green's function");
}

BFunction b_function(std::shared_ptr<const GreenFunction> green, double k) {
  return BFunction(std::move(green), k);
}

BFunction::Sample BFunction::sample(double r) const {
  const Profile& prof = green_->profile();
  const double n = prof.dimension();
  Sample s{};
  s.r = r;
  s.jets = prof.jets(r);
  const double lg = green_->log_value(r);
  const double log_neg_dg = std::log(n - 2.0) + s.jets.f.value - prof.f0() +
                            (1.0 - n) * std::log(s.jets.phi.value);
  const double dlg = -std::exp(log_neg_dg - lg);  // G'/G
  s.log_b = lg / (2.0 - k_);
  s.dlog_b = dlg / (2.0 - k_);
  s.b = std::exp(s.log_b);
  s.db = s.b * s.dlog_b;
  // b''/b' = G''/G' - G'/G + b'/b, with G''/G' = f' - (n-1) phi'/phi
  s.d2b_over_db = s.jets.f.d1 - (n - 1.0) * s.jets.phi.d1 / s.jets.phi.value -
                  (k_ - 1.0) / (k_ - 2.0) * dlg;
  s.d2b = s.db * s.d2b_over_db;
  return s;
}

double BFunction::log_value(double r) const {
  return green_->log_value(r) / (2.0 - k_);
}

double BFunction::invert(double rho) const {
  if (!(rho > 0.0)) throw std::out_of_range("invert_b: rho must be positive");
  return invert_log(std::log(rho));
}

double BFunction::invert_log(double log_rho) const {
  auto h = [&](double x) { return log_value(std::exp(x)) - log_rho; };
  const double r_max = green_->profile().r_max();
  double lo = std::log(green_->options().r_lo);
  double hi = std::log(r_max);
  double h_lo = h(lo), h_hi = h(hi);
  const double lo_limit = std::log(1e-300);
  const double hi_limit = std::log(r_max * 1e6);
  while (h_lo > 0.0) {
    if (lo <= lo_limit) throw std::out_of_range("invert_b: rho below the range of b");
    lo = std::max(lo - 10.0 * std::log(10.0), lo_limit);
    h_lo = h(lo);
  }
  while (h_hi < 0.0) {
    if (hi >= hi_limit) throw std::out_of_range("invert_b: rho above the range of b");
    hi = std::min(hi + std::log(4.0), hi_limit);
    h_hi = h(hi);
  }
  if (h_lo == 0.0) return std::exp(lo);
  if (h_hi == 0.0) return std::exp(hi);

  boost::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      h, lo, hi, h_lo, h_hi, boost::math::tools::eps_tolerance<double>(52),
      max_iter);
  double x = 0.5 * (bracket.first + bracket.second);
  // One Newton step in log-log variables: d log b / d log r = r b'/b.
  const Sample s = sample(std::exp(x));
  const double slope = s.r * s.dlog_b;
  if (slope > 0.0 && std::isfinite(slope)) {
    const double step = (s.log_b - log_rho) / slope;
    if (std::abs(step) < bracket.second - bracket.first + 1e-15) x -= step;
  }
  return std::exp(x);
}

// ---------------------------------------------------------------------------

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0e", v);
  return buf;
}

}  // namespace

CheckReport check_pole_asymptotics(const BFunction& bd, double tolerance) {
  CheckReport rep;
  rep.theorem_id = "pole-asymptotics";
  rep.identity_tol = tolerance;
  const double n = bd.profile().dimension();
  const double k = bd.k();
  const double m = (n - 2.0) / (k - 2.0);
  const double grad_exp = (n - k) / (k - 2.0);

  constexpr std::array<double, 3> radii{1e-2, 1e-3, 1e-4};
  std::array<double, 3> rb{}, rdb{};
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    const auto s = bd.sample(r);
    rb[i] = std::exp(s.log_b - m * std::log(r));
    rdb[i] = std::exp(s.log_b + std::log(s.dlog_b) - std::log(m) -
                      grad_exp * std::log(r));
    rep.grid.push_back(r);
    rep.metrics.push_back({"b_ratio@" + sci(r), rb[i]});
    rep.metrics.push_back({"db_ratio@" + sci(r), rdb[i]});
  }
  // Linear-in-r extrapolation from the two smallest radii.
  auto extrapolate = [&](const std::array<double, 3>& v) {
    return (radii[1] * v[2] - radii[2] * v[1]) / (radii[1] - radii[2]);
  };
  const double b_lim = extrapolate(rb), db_lim = extrapolate(rdb);
  rep.metrics.push_back({"b_ratio_extrapolated", b_lim});
  rep.metrics.push_back({"db_ratio_extrapolated", db_lim});
  rep.metrics.push_back({"raw_deviation@1e-04",
                         std::max(std::abs(rb[2] - 1.0), std::abs(rdb[2] - 1.0))});
  // n = 3 profiles approach the limit like r log r, so the raw ratio at 1e-4
  // can still sit above 1e-3; the verdict uses the extrapolated limit.
  rep.record_residual(std::abs(b_lim - 1.0));
  rep.record_residual(std::abs(db_lim - 1.0));
  rep.finalize();
  return rep;
}

CheckReport check_gradient_bound(const BFunction& bd, double r0,
                                 std::span<const double> grid) {
  CheckReport rep;
  rep.theorem_id = "prop-1.2";
  const double n = bd.profile().dimension();
  const double k = bd.k();
  const double r_max = bd.profile().r_max();
  const double constant = std::pow(2.0 * std::pow(r0, n - k), 1.0 / (k - 2.0));
  double sup_db = 0.0, sup_ratio = 0.0;
  for (double r : grid) {
    if (r < r0 || r > r_max) continue;
    const auto s = bd.sample(r);
    rep.grid.push_back(r);
    sup_db = std::max(sup_db, s.db);
    sup_ratio = std::max(sup_ratio, s.b / r);
    rep.record_margin((constant * r - s.b) / (constant * r));
  }
  if (rep.grid.empty()) rep.notes.push_back("no grid point in [r0, r_max]");
  rep.metrics.push_back({"r0", r0});
  rep.metrics.push_back({"sup_db", sup_db});
  rep.metrics.push_back({"sup_b_over_r", sup_ratio});
  rep.metrics.push_back({"linear_bound_constant", constant});
  rep.finalize();
  return rep;
}

}  // namespace monolab
