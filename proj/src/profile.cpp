#include "monolab/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace monolab {

namespace {

constexpr double kPoleProbe = 1e-6;
constexpr double kPoleTolerance = 1e-8;
constexpr std::size_t kValidationPoints = 1024;

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double pole_value_of_f(const Expr& f) {
  try {
    return f.value(0.0);
  } catch (const DomainError&) {
    const Jet2 j = f.eval(kPoleProbe);
    return j.value - kPoleProbe * j.d1;
  }
}

}  // namespace

Profile::Profile(int n, Expr phi, Expr f, double r_max, TailModel tail,
                 std::string name)
    : n_(n),
      phi_(std::move(phi)),
      f_(std::move(f)),
      r_max_(r_max),
      tail_(tail),
      name_(std::move(name)),
      f0_(0.0) {
  if (n < 3) throw std::invalid_argument("dimension n must be at least 3");
  if (!(r_max > 0.0)) throw std::invalid_argument("r_max must be positive");
  f0_ = pole_value_of_f(f_);
}

std::span<const BuiltinInfo> builtin_profiles() {
  static constexpr std::array<BuiltinInfo, 3> kInfo{{
      {"bryant_surrogate",
       "phi = r/sqrt(1+r), f = 1-sqrt(1+r^2); steady-soliton asymptotics "
       "phi ~ sqrt(r), f' -> -1"},
      {"euclidean", "flat R^n: phi = r, f = 0"},
      {"euclidean_weighted_linear",
       "flat R^n with f = -a(sqrt(1+r^2)-1), a smoothed linear potential"},
  }};
  return kInfo;
}

Profile builtin_profile(std::string_view name, int n, double a, double r_max) {
  if (name == "euclidean") {
    return Profile(n, Expr::parse("r"), Expr::parse("0"),
                   r_max > 0 ? r_max : 100.0, TailModel{1.0, 0.0}, "euclidean");
  }
  if (name == "euclidean_weighted_linear") {
    if (!(a > 0.0))
      throw std::invalid_argument("euclidean_weighted_linear needs a > 0");
    std::ostringstream f;
    f.precision(17);
    f << "-" << a << "*(sqrt(1+r^2)-1)";
    return Profile(n, Expr::parse("r"), Expr::parse(f.str()),
                   r_max > 0 ? r_max : 40.0, TailModel{1.0, -a},
                   "euclidean_weighted_linear");
  }
  if (name == "bryant_surrogate") {
    return Profile(n, Expr::parse("r/sqrt(1+r)"), Expr::parse("1-sqrt(1+r^2)"),
                   r_max > 0 ? r_max : 30.0, TailModel{0.5, -1.0},
                   "bryant_surrogate");
  }
  throw std::invalid_argument("unknown builtin profile '" + std::string(name) +
                              "'");
}

std::vector<std::string> validate_profile(const Profile& p) {
  std::vector<std::string> issues;

  // Pole: extrapolate phi and phi' linearly from the probe radius. The jets
  // are exact there, so the extrapolation error is O(probe^2 phi''').
  try {
    const Jet2 j = p.phi().eval(kPoleProbe);
    const double phi0 = j.value - kPoleProbe * j.d1;
    const double dphi0 = j.d1 - kPoleProbe * j.d2;
    if (std::abs(phi0) > kPoleTolerance)
      issues.push_back("phi(0) = " + fmt_num(phi0) + " ≠ 0");
    if (std::abs(dphi0 - 1.0) > kPoleTolerance)
      issues.push_back("phi'(0) = " + fmt_num(dphi0) + " ≠ 1");
  } catch (const DomainError& e) {
    issues.push_back(std::string("phi undefined near the pole: ") + e.what());
  }

  const auto grid = log_grid(kPoleProbe, p.r_max(), kValidationPoints);
  for (double r : grid) {
    try {
      const ProfileJets j = p.jets(r);
      if (!(j.phi.value > 0.0)) {
        issues.push_back("phi(" + fmt_num(r) + ") = " + fmt_num(j.phi.value) +
                         " is not positive");
        break;
      }
      if (!std::isfinite(j.f.value) || !std::isfinite(j.f.d1) ||
          !std::isfinite(j.f.d2) || !std::isfinite(j.phi.d1) ||
          !std::isfinite(j.phi.d2)) {
        issues.push_back("non-finite phi/f jets at r = " + fmt_num(r));
        break;
      }
    } catch (const DomainError& e) {
      issues.push_back("evaluation failed at r = " + fmt_num(r) + ": " +
                       e.what());
      break;
    }
  }

  if (!p.tail().integrable(p.dimension()))
    issues.push_back("Green tail not integrable (a = " +
                     fmt_num(p.tail().phi_growth_exponent) +
                     ", s = " + fmt_num(p.tail().f_slope) + ")");
  return issues;
}

CurvatureSample ricci_f_radial(const Profile& p, double N, double r) {
  if (!(r > 0.0))
    throw std::invalid_argument("ricci_f_radial: r must be positive (pole)");
  if (N < 0.0) throw std::invalid_argument("ricci_f_radial: N must be >= 0");
  const ProfileJets j = p.jets(r);
  const double n = p.dimension();
  const double phi = j.phi.value, dphi = j.phi.d1, d2phi = j.phi.d2;
  const double df = j.f.d1, d2f = j.f.d2;

  double ric_rr = -(n - 1.0) * d2phi / phi;
  double ric_tt = -d2phi / phi + (n - 2.0) * (1.0 - dphi * dphi) / (phi * phi);
  if (N == 0.0) {
    if (df != 0.0 || d2f != 0.0)
      throw std::invalid_argument(
          "N = 0 requires a constant potential f");
  } else {
    ric_rr += d2f;
    if (std::isfinite(N)) ric_rr -= df * df / N;
    ric_tt += df * dphi / phi;
  }
  return {r, ric_rr, ric_tt};
}

CurvatureCheck check_curvature_nonneg(const Profile& p, double N,
                                      std::span<const double> grid,
                                      double tolerance) {
  CurvatureCheck out{true, std::numeric_limits<double>::infinity(), 0.0};
  for (double r : grid) {
    const CurvatureSample s = ricci_f_radial(p, N, r);
    const double m = std::min(s.ric_rr, s.ric_tt);
    if (m < out.min_eigenvalue) {
      out.min_eigenvalue = m;
      out.argmin_r = r;
    }
  }
  out.nonnegative = out.min_eigenvalue >= -tolerance;
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace monolab
