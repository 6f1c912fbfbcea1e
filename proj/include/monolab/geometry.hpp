#pragma once

#include <functional>

#include "monolab/green.hpp"
#include "monolab/jet.hpp"

namespace monolab {

/// Everything the radial formulas need at one radius. d3b is closed-form and
/// only used by direct-Laplacian cross-checks.
struct RadialState {
  double r;
  double b, db, d2b, d3b;
  double phi, dphi, d2phi;
  double f, df, d2f;
  int n;
  double k;
};

RadialState radial_state(const BFunction& bd, double r);
RadialState radial_state(const BFunction& bd, const BFunction::Sample& s);

struct PointQuantities {
  double hess_b2_sq;      // |Hess b^2|^2
  double lap_b2;          // Δ b^2
  double lapf_b2;         // Δ_f b^2
  double ricf_grad;       // Ric_f(∇b^2, ∇b^2)
  double grad_grad_b_sq;  // |∇|∇b||^2
  double B_sq;            // |B|^2, B the trace-free part of Hess b^2
  double lambda;
  double B_nu_sq;         // |B(ν)|^2
};

/// Throws std::domain_error at r = 0.
PointQuantities point_quantities(const RadialState& s);

/// <∇b^2, ∇f> = (b^2)' f'.
inline double grad_b2_dot_grad_f(const RadialState& s) {
  return 2.0 * s.b * s.db * s.df;
}

/// <∇b^2, ∇|∇b|^2> = 4 b b'^2 b''.
inline double grad_b2_dot_grad_grad_b_sq(const RadialState& s) {
  return 4.0 * s.b * s.db * s.db * s.d2b;
}

/// Radial Δ_f of a function with the given (u, u', u'').
double radial_laplacian_f(const RadialState& s, const Jet2& u);

/// Right side of the Δ_f |∇b|^β formula.
double delta_f_grad_b_beta(const RadialState& s, double beta);

/// Right side of the Δ_f (b^{2q} |∇b|^β) formula. At β = 0 the finite limit
/// 2q(k-2+2q) b^{2q-2} b'^2 is returned; the β-free part vanishes there.
double delta_f_weighted(const RadialState& s, double q, double beta);

/// ½Δ_f|∇u|² − |Hess u|² − <∇u, ∇Δ_f u> − Ric_f(∇u, ∇u) divided by the sum
/// of the magnitudes of the four terms. u''' comes from a central difference
/// of u'' with step 1e-5.
double bochner_residual(const RadialState& s,
                        const std::function<Jet2(double)>& u);

/// u(r) = b(r) as a jet, for use with bochner_residual.
std::function<Jet2(double)> b_jet(const BFunction& bd);

}  // namespace monolab
