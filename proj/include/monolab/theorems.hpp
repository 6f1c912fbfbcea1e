#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "monolab/check_report.hpp"
#include "monolab/functionals.hpp"
#include "monolab/green.hpp"
#include "monolab/params.hpp"

namespace monolab {

/// Shared state of a batch of checks on one profile.
struct Context {
  std::shared_ptr<const GreenFunction> green;
  double quad_tol = 1e-10;
  double identity_tol = 1e-6;
  double inequality_tol = 1e-8;
  std::size_t grid_size = 256;

  const Profile& profile() const { return green->profile(); }
};

Context make_context(const Profile& p, double quad_tol = 1e-10);

/// Check identifiers accepted by run_check, in report order.
std::span<const std::string_view> theorem_ids();
bool is_theorem_id(std::string_view id);

/// Dispatches on the identifier; an empty grid selects the default ρ grid.
/// Throws std::invalid_argument for an unknown id.
CheckReport run_check(std::string_view id, const Context& ctx, const Params& prm,
                      std::span<const double> grid = {});

// Identities. Residuals are relative to the magnitude of the terms involved.

/// (A - αV)' against the bulk integral plus (λ1 A + λ2 V)/ρ.
CheckReport check_identity_AV(const Context& ctx, const Params& prm,
                              std::span<const double> grid = {});

/// The k = l, α = 2k - p - 2 form with the -4k|∇b|^4 term in the bulk.
CheckReport check_corollary_44(const Context& ctx, const Params& prm,
                               std::span<const double> grid = {});

/// g(ρ2) - g(ρ1) against the annulus integrals, for one pair of levels.
CheckReport check_identity_g(const Context& ctx, const Params& prm, double rho1,
                             double rho2);

/// Same over consecutive grid pairs and the full span.
CheckReport check_identity_g(const Context& ctx, const Params& prm,
                             std::span<const double> grid = {});

/// The k = l = n pair: the (A - (2n-p-2)V)' identity and the ρ^{3-n}A'
/// annulus identity, both with |B|^2 and the f-coupling terms. Throws
/// std::invalid_argument unless k = l = n.
CheckReport check_identity_kln(const Context& ctx, const Params& prm,
                               std::span<const double> grid = {});

// Inequalities and monotonicity. Hypotheses are verified, never assumed.

CheckReport check_monotone(std::string_view theorem_id, const Context& ctx,
                           const Params& prm, std::span<const double> grid = {});

/// Roots l1 <= l2 of l^2 + (2-3k)l + 2k^2 - 2k + βk, or none when
/// (k-2)^2 - 4βk < 0.
std::optional<std::pair<double, double>> solve_l_window(double k, double beta);

// Remaining checks.

/// Small-radius behaviour of A and V against the three sign cases of C(n,k,l).
CheckReport check_lemma_41(const Context& ctx, const Params& prm);

/// Gradient bound of b with k = n + N on a Ric_f^N >= 0 profile.
CheckReport check_prop_12(const Context& ctx, const Params& prm, double r0 = 1.0);

/// Direct radial Δ_f against the closed forms for b, b^β, b^2, |∇b|^β and
/// b^{2q}|∇b|^β, plus the |B|^2 and |B(ν)|^2 decompositions.
CheckReport check_identities_3x(const Context& ctx, const Params& prm,
                                std::size_t points = 64);

/// Bochner formula for u = r^2, r^4 and b.
CheckReport check_bochner(const Context& ctx, const Params& prm,
                          std::size_t points = 64);

struct BryantProbe {
  double r;
  double bracket;
  double log_abs_g;  // log |ρ^{3-n} A'|
  int sign_g;
};

struct BryantReport {
  int n;
  double closed_form_limit;
  double fitted_limit;
  double relative_deviation;
  double largest_probe_value;
  int sign;            // sign of the bracket at the largest probe
  bool sign_expected;  // matches the limit's sign (always true for n = 4)
  int direction;       // +1 nondecreasing, -1 nonincreasing at large ρ
  double stabilization_radius;
  bool direction_expected;
  std::vector<BryantProbe> probes;
  std::vector<std::string> notes;
};

/// Large-r behaviour of the k = l = n bracket on bryant_surrogate. An empty
/// probe list selects 41 log-spaced radii on [1, 1e4].
BryantReport bryant_limit(int n, std::span<const double> probes = {},
                          double beta = 2.0, double quad_tol = 1e-10);

/// (4n - n^2) / (n (n-2)^2).
double bryant_closed_form_limit(int n);

}  // namespace monolab
