#include <cmath>

#include <doctest.h>

#include "monolab/functionals.hpp"

using namespace monolab;

namespace {

constexpr double kPi = M_PI;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Params params(double k, double l, double beta, double p) {
  Params prm;
  prm.k = k;
  prm.l = l;
  prm.beta = beta;
  prm.p = p;
  return prm;
}

Profile weighted4() {
  return Profile(4, Expr::parse("r/sqrt(1+r)"), Expr::parse("1-1/sqrt(1+r^2)"), 100.0,
                 TailModel{0.5, 0.0}, "weighted");
}

}  // namespace

TEST_SUITE("functionals") {

TEST_CASE("sphere areas") {
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * kPi).epsilon(1e-15));
  CHECK(unit_sphere_area(4) == doctest::Approx(2 * kPi * kPi).epsilon(1e-15));
  CHECK(unit_sphere_area(5) == doctest::Approx(8 * kPi * kPi / 3).epsilon(1e-15));
  CHECK(unit_sphere_area(6) == doctest::Approx(kPi * kPi * kPi).epsilon(1e-15));
}

TEST_CASE("admissibility constants") {
  Admissibility a = admissibility(4, params(6, 6, 2, 2));
  CHECK(a.C_nkp == doctest::Approx(4.0));

  Params prm = params(5, 5, 2, 1);
  prm.alpha = 2 * prm.k - prm.p - 2;
  a = admissibility(5, prm);
  CHECK(a.lambda1 == 0.0);

  prm = params(12, 16.5, 2, 0);
  a = admissibility(6, prm, true);
  CHECK(a.lambda4 == 0.0);
  REQUIRE(a.lambda3.has_value());
  CHECK(*a.lambda3 == doctest::Approx(2.0 * (12 - 16.5 - 1) * (12 - 16.5) - 48));

  // general substitution
  prm = params(7, 4, 1.5, 0.5);
  prm.alpha = 0.3;
  prm.c = 0.2;
  prm.d = -0.7;
  a = admissibility(4, prm, true);
  CHECK(a.C_nkp == doctest::Approx(2 * 6.5 - 1.5 * 3));
  CHECK(a.C_nkl == doctest::Approx(3 * 2 + (4 - 7) * 1.5));
  CHECK(a.lambda1 == doctest::Approx(21 - 0.5 - 4 - 2 - 0.3));
  CHECK(a.lambda2 == doctest::Approx((0.5 + 2 - 14) * 6.5 - 1.5 * 7 - 0.3 * (0.5 - 4)));
  CHECK(*a.lambda3 == doctest::Approx(4 / 1.5 * (7 - 0.7 - 4 + 0.2 - 1) * (7 - 0.7 - 4) - 28));
  CHECK(a.lambda4 == doctest::Approx(21 - 8 - 3 + 0.2 - 1.4));

  CHECK_THROWS_AS(admissibility(4, params(6, 6, 0, 0), true), std::invalid_argument);
  CHECK_FALSE(admissibility(4, params(6, 6, 0, 0)).lambda3.has_value());
}

TEST_CASE("area functional on flat space") {
  const auto g3 = compute_green(builtin_profile("euclidean", 3));
  const BFunction b3 = b_function(g3, 3.0);
  for (double beta : {-1.0, 0.0, 2.0, 3.5})
    for (double rho : {1e-3, 1.0, 20.0})
      CHECK(rel(area_functional(b3, params(3, 3, beta, 0), rho), 4 * kPi) <= 1e-10);
  for (double rho : {1e-2, 1.0, 20.0})
    CHECK(rel(area_functional(b3, params(3, 2, 0, 0), rho), 4 * kPi * rho) <= 1e-10);

  // n = 4, k = 6: b = sqrt(r), A = π^2/(4ρ^2)
  const BFunction b46 = b_function(compute_green(builtin_profile("euclidean", 4)), 6.0);
  for (double rho : {0.1, 1.0, 5.0})
    CHECK(rel(area_functional(b46, params(6, 6, 2, 0), rho), kPi * kPi / (4 * rho * rho)) <=
          1e-10);
}

TEST_CASE("volume functional on flat space") {
  const BFunction b3 = b_function(compute_green(builtin_profile("euclidean", 3)), 3.0);
  for (double rho : {1e-3, 0.5, 1.0, 20.0}) {
    CHECK(rel(volume_functional(b3, params(3, 3, 2, 0), rho), 4 * kPi / 3) <= 1e-10);
    CHECK(rel(volume_functional(b3, params(3, 3, 2, 2), rho), 4 * kPi) <= 1e-10);
  }
  CHECK_THROWS_AS(volume_functional(b3, params(3, 3, 2, 3), 1.0), DivergentFunctional);
  CHECK_THROWS_AS(volume_functional(b3, params(3, 3, 2, 4), 1.0), DivergentFunctional);

  // n = 4, k = 6, β = 2, p = 2 (C = 4): V = ρ^{-4} 2π^2 ∫_0^{ρ^2} (2√s)^{-4} s^{-1} s^3 ds
  // = π^2/(8ρ^2)
  const BFunction b46 = b_function(compute_green(builtin_profile("euclidean", 4)), 6.0);
  for (double rho : {0.1, 1.0, 3.0})
    CHECK(rel(volume_functional(b46, params(6, 6, 2, 2), rho), kPi * kPi / (8 * rho * rho)) <=
          1e-9);
}

TEST_CASE("curve derivatives") {
  struct Case {
    Profile p;
    Params prm;
  };
  const Case cases[] = {
      {builtin_profile("bryant_surrogate", 3), params(4, 5, 2, 1)},
      {builtin_profile("euclidean_weighted_linear", 4), params(5, 4, 1.5, 0.5)},
      {weighted4(), params(5, 5, 2, 2)},
  };
  for (const auto& c : cases) {
    const BFunction bd = b_function(compute_green(c.p), c.prm.k);
    const auto grid = default_rho_grid(bd, 64);
    REQUIRE(grid.size() == 64);
    CHECK(grid.front() == doctest::Approx(bd.value(1e-3)));
    CHECK(grid.back() == doctest::Approx(bd.value(0.8 * c.p.r_max())));
    const auto pts = curve(bd, c.prm, grid);
    for (const auto& pt : pts) {
      CHECK(pt.rho == doctest::Approx(bd.value(pt.r)));
      const double eq = ((c.prm.p - c.prm.l) * pt.V + pt.A) / pt.rho;
      CHECK(std::abs(pt.dV - eq) <= 1e-9 * (1 + std::abs(pt.dV)));
      const double h = 1e-4 * pt.rho;
      const double fd = (area_functional(bd, c.prm, pt.rho + h) -
                         area_functional(bd, c.prm, pt.rho - h)) / (2 * h);
      CHECK(std::abs(pt.dA - fd) <= 1e-6 * (std::abs(pt.dA) + std::abs(pt.A) / pt.rho));
      CHECK(rel(pt.A, area_functional(bd, c.prm, pt.rho)) <= 1e-12);
      CHECK(rel(pt.V, volume_functional(bd, c.prm, pt.rho)) <= 1e-9);
    }
  }
  const BFunction b3 = b_function(compute_green(builtin_profile("euclidean", 3)), 3.0);
  for (const auto& pt : curve(b3, params(3, 3, 2, 0), default_rho_grid(b3, 32)))
    CHECK(std::abs(pt.dA) <= 1e-9);
  for (const auto& pt : curve(b3, params(3, 3, 2, 3), default_rho_grid(b3, 8))) {
    CHECK(std::isnan(pt.V));
    CHECK(std::isnan(pt.dV));
  }
}

TEST_CASE("small radius limits") {
  auto lim = small_r_limits(3, params(3, 3, 2, 0));
  CHECK(lim.A.kind == LimitValue::Kind::Finite);
  CHECK(lim.A.value == doctest::Approx(4 * kPi));
  REQUIRE(lim.V.has_value());
  CHECK(lim.V->kind == LimitValue::Kind::Finite);
  CHECK(lim.V->value == doctest::Approx(4 * kPi / 3));

  lim = small_r_limits(3, params(3, 2, 0, 0));
  CHECK(lim.A.kind == LimitValue::Kind::Zero);
  lim = small_r_limits(3, params(3, 4, 0, 0));
  CHECK(lim.A.kind == LimitValue::Kind::Infinite);
  CHECK_FALSE(small_r_limits(3, params(3, 3, 2, 3)).V.has_value());

  // n = 4, k = 6, l = 5, β = 1: C(n,k,l) = 2 - 2 = 0, constant (1/2)^2 ω_3 e^{-f0}
  lim = small_r_limits(4, params(6, 5, 1, 0), 0.5);
  CHECK(lim.A.kind == LimitValue::Kind::Finite);
  CHECK(lim.A.value == doctest::Approx(0.25 * 2 * kPi * kPi * std::exp(-0.5)));
}

TEST_CASE("h is constant") {
  for (const Profile& p : {builtin_profile("euclidean", 3), builtin_profile("bryant_surrogate", 5),
                           builtin_profile("euclidean_weighted_linear", 4), weighted4()}) {
    const int n = p.dimension();
    for (double k : {n + 0.0, n + 1.0, 2.0 * n}) {
      const BFunction bd = b_function(compute_green(p), k);
      const double hc = h_constant(bd);
      CHECK(hc == doctest::Approx((n - 2) / (k - 2) * unit_sphere_area(n) * std::exp(-p.f0())));
      for (double rho : default_rho_grid(bd, 64)) CHECK(rel(h_invariant(bd, rho), hc) <= 1e-8);
    }
  }
  const BFunction b3 = b_function(compute_green(builtin_profile("euclidean", 3)), 3.0);
  CHECK(h_constant(b3) == doctest::Approx(4 * kPi));
  const BFunction b5 = b_function(compute_green(builtin_profile("bryant_surrogate", 5)), 5.0);
  CHECK(h_constant(b5) == doctest::Approx(unit_sphere_area(5)));
}

TEST_CASE("bulk integrals") {
  const BFunction b3 = b_function(compute_green(builtin_profile("euclidean", 3)), 3.0);
  CHECK(rel(bulk_integral(b3, params(3, 3, 2, 0), 1.0, kHessB2Sq), 8 * kPi) <= 1e-9);
  CHECK(rel(bulk_integral(b3, params(3, 3, 2, 0), 7.0, kHessB2Sq), 8 * kPi / 7.0) <= 1e-9);
  CHECK(std::abs(bulk_integral(b3, params(3, 3, 2, 0), 1.0, kMaskKLN)) <= 1e-9);
  CHECK_THROWS_AS(bulk_integral(b3, params(3, 3, 2, 3), 1.0, kHessB2Sq), DivergentFunctional);

  const auto grid = default_rho_grid(b3, 16);
  const auto bc = bulk_curve(b3, params(3, 3, 2, 0), grid, kHessB2Sq);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(rel(bc[i], 8 * kPi / grid[i]) <= 1e-9);

  // annulus over the flat hessian term: ω ∫ (1/2) b^{c+d-l-1} 12 s^2 ds with b = s
  Params prm = params(3, 3, 2, 0);
  prm.c = 1.0;
  CHECK(rel(bulk_annulus(b3, prm, 1.0, 2.0, kHessB2Sq), 4 * kPi * 6 * std::log(2.0)) <= 1e-9);
  CHECK(rel(bulk_annulus_radii(b3, prm, 1.0, 200.0, kHessB2Sq), 4 * kPi * 6 * std::log(200.0)) <=
        1e-9);
}

TEST_CASE("g quantity") {
  const BFunction b3 = b_function(compute_green(builtin_profile("euclidean", 3)), 3.0);
  Params prm = params(3, 3, 2, 0);
  CHECK(std::abs(g_quantity(b3, prm, 2.0)) <= 1e-12);
  // A = 4π ρ with l = 2, β = 0; g = ρ^c (ρ^d A)' = ρ^c (d+1) 4π ρ^d
  prm = params(3, 2, 0, 0);
  prm.c = 0.5;
  prm.d = 1.0;
  CHECK(rel(g_quantity(b3, prm, 3.0), std::pow(3.0, 1.5) * 2 * 4 * kPi) <= 1e-9);
}

}  // TEST_SUITE
