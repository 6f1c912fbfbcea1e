#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "monolab/check_report.hpp"
#include "monolab/profile.hpp"

namespace monolab {

struct GreenOptions {
  double quad_tol = 1e-10;
  std::size_t grid_size = 4096;
  /// Smallest cached radius; below it the s^{1-n} pole power is integrated
  /// in closed form.
  double r_lo = 1e-40;
};

/// Positive Green's function of the f-Laplacian with pole at the origin,
/// normalized so that G ~ r^{2-n} at the pole:
///
///   G(r) = (n-2) \int_r^\infty e^{f(s)-f(0)} phi(s)^{1-n} ds.
///
/// log G is cached on a log-spaced grid. Between nodes G is reconstructed
/// from the upper node plus an 8-point Gauss-Legendre panel; beyond r_max the
/// integral is continued numerically and closed with the TailModel. G' and
/// G'' are closed-form.
class GreenFunction {
 public:
  explicit GreenFunction(Profile profile, GreenOptions options = {});

  const Profile& profile() const { return profile_; }
  const GreenOptions& options() const { return options_; }
  int dimension() const { return profile_.dimension(); }

  double log_value(double r) const;
  double value(double r) const;
  double derivative(double r) const;
  double second_derivative(double r) const;
  /// G'/G, computed without forming G (safe where G under/overflows).
  double log_derivative(double r) const;

  std::span<const double> grid() const { return grid_; }
  std::span<const double> grid_log_values() const { return log_g_; }

 private:
  /// f(s) + (1-n) log phi(s); the integrand is (n-2) e^{L(s) - f0}.
  double log_weight(double s) const;
  double log_value_direct(double r) const;
  double log_value_below(double r) const;

  Profile profile_;
  GreenOptions options_;
  double log_r_lo_ = 0.0;
  double log_step_ = 0.0;
  std::vector<double> grid_;
  std::vector<double> log_g_;
};

/// Throws QuadratureError (via construction) when the tail is not integrable
/// or the integrals miss quad_tol.
std::shared_ptr<const GreenFunction> compute_green(const Profile& p,
                                                   double quad_tol = 1e-10);

/// b = G^{1/(2-k)} with closed-form derivatives.
class BFunction {
 public:
  struct Sample {
    double r;
    double log_b;
    double b;
    double db;
    double d2b;
    double dlog_b;       // b'/b
    double d2b_over_db;  // b''/b'
    ProfileJets jets;
  };

  BFunction(std::shared_ptr<const GreenFunction> green, double k);

  double k() const { return k_; }
  const GreenFunction& green() const { return *green_; }
  const Profile& profile() const { return green_->profile(); }

  Sample sample(double r) const;
  double value(double r) const { return sample(r).b; }
  double derivative(double r) const { return sample(r).db; }
  double second_derivative(double r) const { return sample(r).d2b; }
  double log_value(double r) const;

  /// r with b(r) = rho, |b(r) - rho| <= 1e-12 (1 + rho). Throws
  /// std::out_of_range when rho is outside the attained range.
  double invert(double rho) const;
  double invert_log(double log_rho) const;

 private:
  std::shared_ptr<const GreenFunction> green_;
  double k_;
};

/// Throws std::invalid_argument for k <= 2.
BFunction b_function(std::shared_ptr<const GreenFunction> green, double k);

/// Pole asymptotics b ~ r^{(n-2)/(k-2)} and
/// b' ~ (n-2)/(k-2) r^{(n-k)/(k-2)} at r = 1e-2, 1e-3, 1e-4. The ratios are
/// extrapolated linearly in r from the two smallest radii; the verdict is on
/// the extrapolated deviation.
CheckReport check_pole_asymptotics(const BFunction& bd, double tolerance = 1e-3);

/// Gradient bound of b away from the pole: sup b', sup b/r on
/// grid ∩ [r0, r_max] and b <= (2 r0^{n-k})^{1/(k-2)} r there.
CheckReport check_gradient_bound(const BFunction& bd, double r0,
                                 std::span<const double> grid);

}  // namespace monolab
