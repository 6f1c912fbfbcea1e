#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monolab/expr.hpp"

namespace monolab {

/// Synthetic dimension N of Ric_f^N; N = infinity selects Ric_f.
inline constexpr double kInfiniteN = std::numeric_limits<double>::infinity();

/// Large-r behaviour of the profile, used for the Green's function tail:
/// phi ~ r^a and f ~ s r.
struct TailModel {
  double phi_growth_exponent = 1.0;  // a
  double f_slope = 0.0;              // s

  /// e^{f} phi^{1-n} is integrable at infinity under the model.
  bool integrable(int n) const {
    return f_slope < 0.0 || (f_slope == 0.0 && phi_growth_exponent * (n - 1) > 1.0);
  }
};

struct ProfileJets {
  Jet2 phi;
  Jet2 f;
};

/// Rotationally symmetric smooth metric measure space
/// (R^n, dr^2 + phi(r)^2 g_{S^{n-1}}, e^{-f} dvol).
class Profile {
 public:
  Profile(int n, Expr phi, Expr f, double r_max, TailModel tail,
          std::string name = "custom");

  int dimension() const { return n_; }
  const Expr& phi() const { return phi_; }
  const Expr& f() const { return f_; }
  double r_max() const { return r_max_; }
  const TailModel& tail() const { return tail_; }
  const std::string& name() const { return name_; }

  /// f at the pole. Taken from the expression at r = 0 when it is defined
  /// there, otherwise extrapolated from r = 1e-6.
  double f0() const { return f0_; }

  ProfileJets jets(double r) const { return {phi_.eval(r), f_.eval(r)}; }

 private:
  int n_;
  Expr phi_;
  Expr f_;
  double r_max_;
  TailModel tail_;
  std::string name_;
  double f0_;
};

struct BuiltinInfo {
  std::string_view name;
  std::string_view description;
};

/// Builtin profiles in alphabetical order.
std::span<const BuiltinInfo> builtin_profiles();

/// `a` is the slope parameter of euclidean_weighted_linear and is ignored by
/// the other profiles. `r_max <= 0` selects the profile's default radius.
/// Throws std::invalid_argument for an unknown name.
Profile builtin_profile(std::string_view name, int n, double a = 1.0,
                        double r_max = 0.0);

/// Empty iff phi(0) = 0, phi'(0) = 1, phi > 0 and f finite on a 1024-point
/// log grid up to r_max, and the tail model is integrable.
std::vector<std::string> validate_profile(const Profile& p);

struct CurvatureSample {
  double r;
  double ric_rr;  // radial eigenvalue of Ric_f^N
  double ric_tt;  // tangential eigenvalue (multiplicity n-1)
};

/// Eigenvalues of Ric_f^N at radius r > 0. N = 0 requires f to be constant.
CurvatureSample ricci_f_radial(const Profile& p, double N, double r);

struct CurvatureCheck {
  bool nonnegative;
  double min_eigenvalue;
  double argmin_r;
};

CurvatureCheck check_curvature_nonneg(const Profile& p, double N,
                                      std::span<const double> grid,
                                      double tolerance = 1e-9);

/// n log-spaced points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace monolab
