#include <cmath>
#include <string>

#include "doctest.h"
#include "sskdyn/chsck.hpp"
#include "sskdyn/errors.hpp"
#include "sskdyn/spectral.hpp"

using namespace sskdyn;

namespace {

ChsckParams make_params(double c, double beta, double T, double dt) {
  ChsckParams p;
  p.c = c;
  p.beta = beta;
  p.T = T;
  p.dt = dt;
  return p;
}

}  // namespace

TEST_CASE("validate reports every violation at once") {
  ChsckParams bad;
  bad.c = -1.0;
  bad.beta = 0.0;
  bad.T = 5.0;
  bad.dt = 1.0;  // > T/100
  bad.K0 = 2.0;
  try {
    validate(bad);
    FAIL("expected config_error");
  } catch (const config_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("c must be positive") != std::string::npos);
    CHECK(msg.find("beta must be positive") != std::string::npos);
    CHECK(msg.find("dt must not exceed T/100") != std::string::npos);
    CHECK(msg.find("K0 is fixed to 1") != std::string::npos);
  }
  CHECK_NOTHROW(validate(ChsckParams{}));
}

TEST_CASE("asymptotic constants across the three regimes") {
  SUBCASE("sub-critical") {
    const auto ac = asymptotic_constants(1.0, 0.05);
    CHECK(ac.regime == Regime::sub);
    CHECK(ac.beta_c == 0.25);
    CHECK(ac.s_beta == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
    CHECK(ac.Psi == 0.0);
    CHECK(ac.C_beta == doctest::Approx(0.5925925925925926).epsilon(1e-12));
  }
  SUBCASE("critical") {
    const auto ac = asymptotic_constants(1.0, 0.25);
    CHECK(ac.regime == Regime::critical);
    CHECK(ac.s_beta == 2.0);
    CHECK(ac.Psi == 0.5);
    CHECK(ac.C_beta == doctest::Approx(0.3989422804014327).epsilon(1e-12));
  }
  SUBCASE("super-critical") {
    const auto ac = asymptotic_constants(1.0, 0.5);
    CHECK(ac.regime == Regime::super);
    CHECK(ac.s_beta == 2.0);
    CHECK(ac.Psi == 1.5);
    CHECK(ac.C_beta == doctest::Approx(0.29920671030107454).epsilon(1e-12));
  }
  SUBCASE("growth rate solves its pole equation") {
    for (double beta : {0.02, 0.1, 0.2, 0.24}) {
      const auto ac = asymptotic_constants(1.0, beta);
      CHECK(2.0 * beta * ac.s_beta ==
            doctest::Approx(stieltjes_m(ac.s_beta)).epsilon(1e-12));
      CHECK(ac.s_beta > 2.0);
    }
    // the rate is continuous at the transition
    CHECK(asymptotic_constants(1.0, 0.25 - 1e-9).s_beta == doctest::Approx(2.0).epsilon(1e-4));
  }
  SUBCASE("scales with c") {
    CHECK(asymptotic_constants(2.0, 0.5).regime == Regime::critical);
    CHECK(asymptotic_constants(2.0, 0.5).beta_c == 0.5);
    CHECK_THROWS_AS(asymptotic_constants(0.0, 0.5), domain_error);
    CHECK_THROWS_AS(asymptotic_constants(1.0, -0.5), domain_error);
  }
}

TEST_CASE("solver structure and frozen endpoints") {
  const auto params = make_params(1.0, 0.5, 5.0, 1e-3);
  const VolterraSolution sol = solve_volterra(params);
  REQUIRE(sol.grid.size() == 5001);
  CHECK(sol.grid[0] == 0.0);
  CHECK(sol.logRtilde[0] == 0.0);
  CHECK(sol.Kdiag[0] == 1.0);
  CHECK(sol.H[0] == 0.0);
  CHECK(sol.grid.back() == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(sol.Kdiag.back() == doctest::Approx(1.8570927180220846).epsilon(1e-12));
  CHECK(sol.H.back() == doctest::Approx(2.4623517722376795).epsilon(1e-12));
  CHECK(sol.logRtilde.back() == doctest::Approx(-3.6906178122862818).epsilon(1e-10));
  for (double k : sol.Kdiag) CHECK(k > 0.0);
}

TEST_CASE("energy-overlap balance holds along the trajectory") {
  // K' = 2H - 2cK^2 + 1/beta, checked with central differences
  const auto params = make_params(1.0, 0.5, 5.0, 1e-3);
  const VolterraSolution sol = solve_volterra(params);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < sol.grid.size(); ++k) {
    const double lhs = (sol.Kdiag[k + 1] - sol.Kdiag[k - 1]) / (2.0 * params.dt);
    const double rhs = 2.0 * sol.H[k] - 2.0 * params.c * sol.Kdiag[k] * sol.Kdiag[k] +
                       1.0 / params.beta;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("the march is second-order accurate") {
  auto k_end = [](double dt) {
    return solve_volterra(make_params(1.0, 0.5, 2.0, dt)).Kdiag.back();
  };
  const double k4 = k_end(4e-3), k2 = k_end(2e-3), k1 = k_end(1e-3);
  const double ratio = (k4 - k2) / (k2 - k1);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("long-time observables reach the stationary values in every regime") {
  struct Row {
    double beta, K_inf, H_inf, tol;
  };
  // K_inf = s/c, H_inf = c K_inf^2 - 1/(2 beta)
  for (const Row& row : {Row{0.1, 2.5, 1.25, 0.01}, Row{0.25, 2.0, 2.0, 0.02},
                         Row{0.5, 2.0, 3.0, 0.03}}) {
    const auto sol = solve_volterra(make_params(1.0, row.beta, 40.0, 2e-3));
    CHECK(sol.Kdiag.back() == doctest::Approx(row.K_inf).epsilon(row.tol));
    CHECK(sol.H.back() == doctest::Approx(row.H_inf).epsilon(row.tol));
    const auto lim = limit_values(1.0, row.beta);
    CHECK(lim.H_inf == doctest::Approx(row.H_inf).epsilon(1e-12));
    CHECK(sol.H.back() / sol.Kdiag.back() ==
          doctest::Approx(lim.HK_ratio_inf).epsilon(0.025));
  }
}

TEST_CASE("limit values: frozen points and continuity at the transition") {
  const auto sub = limit_values(1.0, 0.05);
  CHECK(sub.H_inf == doctest::Approx(10.0 / 9.0).epsilon(1e-13));
  CHECK(sub.HK_ratio_inf == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  const auto sup = limit_values(1.0, 0.5);
  CHECK(sup.H_inf == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(sup.HK_ratio_inf == doctest::Approx(1.5).epsilon(1e-13));
  const auto below = limit_values(1.0, 0.25 - 1e-9);
  const auto at = limit_values(1.0, 0.25);
  CHECK(below.H_inf == doctest::Approx(at.H_inf).epsilon(1e-3));
}

TEST_CASE("laplace transform solves the resolvent identity") {
  const auto params = make_params(1.0, 0.5, 30.0, 2e-3);
  const VolterraSolution sol = solve_volterra(params);
  // closed form at z = 3: L = (1 + m(3)) / (6 - 2 m(3)) = 2.5 - sqrt(5)
  const double want = 2.5 - std::sqrt(5.0);
  CHECK(laplace_transform(sol, params, 3.0) == doctest::Approx(want).epsilon(1e-3));
  CHECK(laplace_residual(sol, params, 3.0) < 1e-4);
  CHECK_THROWS_AS(laplace_transform(sol, params, 2.0), domain_error);
}

TEST_CASE("laplace residual near the growth rate is truncation-dominated") {
  // at z = 2.05 the tail decays like e^{-0.1 t}; longer horizons shrink it
  double prev = 1e9;
  for (double T : {10.0, 20.0, 30.0}) {
    const auto params = make_params(1.0, 0.5, T, 2e-3);
    const double res = laplace_residual(solve_volterra(params), params, 2.05);
    CHECK(res < prev);
    prev = res;
  }
  CHECK(prev < 5e-3);
}

TEST_CASE("laplace domain tracks the sub-critical growth rate") {
  const auto params = make_params(1.0, 0.1, 10.0, 1e-3);
  const VolterraSolution sol = solve_volterra(params);
  CHECK_THROWS_AS(laplace_transform(sol, params, 2.4), domain_error);  // s_beta = 2.5
  CHECK(std::isfinite(laplace_transform(sol, params, 2.6)));
}

TEST_CASE("two-time correlator: symmetry, diagonal, decay") {
  const auto params = make_params(1.0, 0.5, 5.0, 1e-3);
  const VolterraSolution sol = solve_volterra(params);
  CHECK(two_time_K(sol, 0.0, 0.0, params) == 1.0);
  for (auto [t, s] : {std::pair{1.0, 3.0}, {0.3, 4.7}, {2.0, 2.0}}) {
    CHECK(two_time_K(sol, t, s, params) == two_time_K(sol, s, t, params));
  }
  for (double t : {1.0, 2.5, 4.0}) {
    const auto k = static_cast<std::size_t>(std::llround(t / params.dt));
    CHECK(std::abs(two_time_K(sol, t, t, params) - sol.Kdiag[k]) < 5e-3);
  }
  // correlation with the far past is weaker than with the recent past
  CHECK(two_time_K(sol, 5.0, 0.5, params) < two_time_K(sol, 5.0, 4.0, params));
  CHECK_THROWS_AS(two_time_K(sol, -1.0, 1.0, params), domain_error);
  CHECK_THROWS_AS(two_time_K(sol, 1.0, 6.0, params), domain_error);
}

TEST_CASE("runaway growth raises the horizon error") {
  CHECK_THROWS_AS(solve_volterra(make_params(1.0, 0.01, 80.0, 5e-3)), horizon_error);
}
