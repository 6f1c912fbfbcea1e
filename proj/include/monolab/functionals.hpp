#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "monolab/green.hpp"
#include "monolab/params.hpp"

namespace monolab {

/// Raised when V or a bulk integral diverges at the pole (C(n,k,p) <= 0).
class DivergentFunctional : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Area of the unit sphere S^{n-1} in R^n, 2 pi^{n/2} / Γ(n/2).
double unit_sphere_area(int n);

struct Admissibility {
  double C_nkp;
  double C_nkl;
  double lambda1;
  double lambda2;
  std::optional<double> lambda3;  // needs beta != 0
  double lambda4;
};

/// Throws std::invalid_argument when lambda3 is requested with beta = 0.
Admissibility admissibility(int n, const Params& prm, bool need_lambda3 = false);

struct CurvePoint {
  double rho;
  double r;
  double A;
  double V;  // NaN when C(n,k,p) <= 0
  double dA;
  double dV;
};

double area_functional(const BFunction& bd, const Params& prm, double rho);

/// Throws DivergentFunctional when C(n,k,p) <= 0.
double volume_functional(const BFunction& bd, const Params& prm, double rho,
                         double quad_tol = 1e-10);

/// dA/dρ by the chain rule through r = b^{-1}(ρ).
double area_derivative(const BFunction& bd, const Params& prm, double rho);

/// Default ρ grid: log-spaced on [b(1e-3), b(0.8 r_max)].
std::vector<double> default_rho_grid(const BFunction& bd, std::size_t size = 256);

/// A, V and their ρ-derivatives on an increasing ρ grid. V integrals are
/// accumulated panel by panel between consecutive radii. V and dV are NaN
/// when C(n,k,p) <= 0.
std::vector<CurvePoint> curve(const BFunction& bd, const Params& prm,
                              std::span<const double> rho_grid,
                              double quad_tol = 1e-10);

struct LimitValue {
  enum class Kind { Zero, Finite, Infinite };
  Kind kind;
  double value;  // 0, the constant, or +inf
};

struct SmallRadiusLimits {
  LimitValue A;
  std::optional<LimitValue> V;  // absent when C(n,k,p) <= 0
};

/// ρ -> 0 limits of A and V classified by the sign of C(n,k,l).
SmallRadiusLimits small_r_limits(int n, const Params& prm, double f0 = 0.0);

/// ρ^{1-k} ∫_{b=ρ} |∇b| e^{-f}; constant in ρ.
double h_invariant(const BFunction& bd, double rho);

/// The constant value of h, (n-2)/(k-2) ω e^{-f(0)}.
double h_constant(const BFunction& bd);

/// Selectable integrand terms. All are multiplied by β b'^{β-2}/4 and by the
/// weight of the integral they appear in.
enum BulkTerm : std::uint32_t {
  kHessB2Sq = 1u << 0,       // |Hess b^2|^2
  kBSq = 1u << 1,            // |B|^2
  kRicfGrad = 1u << 2,       // Ric_f(∇b^2, ∇b^2)
  kGradGradB = 1u << 3,      // 4(β-2) b^2 |∇|∇b||^2
  kMinusFourKDb4 = 1u << 4,  // -4k b'^4
  kFLinear = 1u << 5,        // 4 b'^2 <∇b^2, ∇f>
  kFSquare = 1u << 6,        // <∇b^2, ∇f>^2 / n
  kLambda3Db4 = 1u << 7,     // λ3 b'^4
  kLambda4 = 1u << 8,        // λ4 β b'^β b'' b^{c+d-l}, annulus only, no β/4
};

inline constexpr std::uint32_t kMaskAreaVolume = kHessB2Sq | kRicfGrad | kGradGradB;
inline constexpr std::uint32_t kMaskAreaVolumeEqual = kMaskAreaVolume | kMinusFourKDb4;
inline constexpr std::uint32_t kMaskGQuantity =
    kHessB2Sq | kRicfGrad | kLambda3Db4 | kGradGradB | kLambda4;
inline constexpr std::uint32_t kMaskKLN =
    kBSq | kRicfGrad | kGradGradB | kFLinear | kFSquare;

/// β/4 times the sum of the selected terms at one radius (the λ3 term is
/// taken as (β/4)λ3 so that β = 0 stays finite). kLambda4 is ignored here.
double bulk_terms(const BFunction::Sample& s, const BFunction& bd,
                  const Params& prm, std::uint32_t mask);

/// ρ^{p-1-l} ω ∫_0^{r(ρ)} (β b'^{β-2} / (4 b^p)) Σ terms e^{-f} φ^{n-1} ds.
/// Throws DivergentFunctional when C(n,k,p) <= 0.
double bulk_integral(const BFunction& bd, const Params& prm, double rho,
                     std::uint32_t mask, double quad_tol = 1e-10);

/// Same integrand, accumulated over an increasing ρ grid.
std::vector<double> bulk_curve(const BFunction& bd, const Params& prm,
                               std::span<const double> rho_grid,
                               std::uint32_t mask, double quad_tol = 1e-10);

/// ω ∫_{r1}^{r2} (β/4) b^{c+d-l-1} b'^{β-2} Σ terms e^{-f} φ^{n-1} ds over the
/// annulus ρ1 <= b <= ρ2, plus λ4 ω ∫ b^{c+d-l} β b'^β b'' e^{-f} φ^{n-1}
/// when kLambda4 is selected.
double bulk_annulus(const BFunction& bd, const Params& prm, double rho1,
                    double rho2, std::uint32_t mask, double quad_tol = 1e-10);

/// As bulk_annulus, with the annulus given by radii r1 < r2 (which may lie
/// beyond r_max).
double bulk_annulus_radii(const BFunction& bd, const Params& prm, double r1,
                          double r2, std::uint32_t mask, double quad_tol = 1e-10);

/// g(ρ) = ρ^c (ρ^d A)'.
double g_quantity(const BFunction& bd, const Params& prm, double rho);

}  // namespace monolab
