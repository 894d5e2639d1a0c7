#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfc/error.hpp"
#include "tfc/oracle.hpp"

using namespace tfc;

namespace {

double max_error_variable_coeff(double h) {
  const CatalogProblem& c = catalog_entry("ivp_variable_coeff");
  const LinearODE2 ode = c.scalar()->to_ode();
  const int steps = static_cast<int>(std::lround(3.0 / h));
  const Trajectory tr = rk4_integrate(first_order_system(ode), 1.0, {1.0, 0.0}, 3.0 / steps, steps);
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    worst = std::max(worst, std::abs(tr.y[i][0] - (*c.analytic)(tr.t[i]).value));
  }
  return worst;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("rk4 on trivial systems") {
    const SystemRhs still = [](double, std::span<const double>, std::span<double> d) { d[0] = 0; };
    const Trajectory c = rk4_integrate(still, 0.0, {2.5}, 0.1, 10);
    for (const auto& y : c.y) CHECK(y[0] == 2.5);

    const SystemRhs grow = [](double, std::span<const double> y, std::span<double> d) {
      d[0] = y[0];
    };
    const Trajectory e = rk4_integrate(grow, 0.0, {1.0}, 1e-3, 1000);
    CHECK(e.t.back() == doctest::Approx(1.0));
    CHECK(std::abs(e.y.back()[0] - std::numbers::e) <= 1e-10 * std::numbers::e);
  }

  TEST_CASE("rk4 is fourth order") {
    const double e1 = max_error_variable_coeff(3e-2);
    const double e2 = max_error_variable_coeff(1.5e-2);
    const double ratio = e1 / e2;
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
    MESSAGE("rk4 max error at h = 3e-4: " << max_error_variable_coeff(3e-4));
  }

  TEST_CASE("rk4 reports the failing step") {
    const SystemRhs blow = [](double, std::span<const double> y, std::span<double> d) {
      d[0] = y[0] * y[0];
    };
    try {
      (void)rk4_integrate(blow, 0.0, {1.0}, 0.1, 100);
      FAIL("expected NonFiniteState");
    } catch (const NonFiniteState& e) {
      CHECK(e.step() > 5);
      CHECK(e.step() <= 100);
    }
    CHECK_THROWS_AS(rk4_integrate(blow, 0.0, {1.0}, 0.0, 10), InvalidArgument);
  }

  TEST_CASE("shooting recovers the initial slope") {
    const LinearODE2 damped = catalog_entry("bvp_damped").scalar()->to_ode();
    const ShootingResult s = shoot_bvp(damped, 1.0, 3.0, -10.0, 10.0);
    CHECK(std::abs(s.slope - (3 * std::numbers::e - 2)) <= 1e-6);

    const auto one = [](double) { return 1.0; };
    const auto zero = [](double) { return 0.0; };
    const LinearODE2 line{one, zero, zero, zero, 0.0, 1.0};
    CHECK(shoot_bvp(line, 0.0, 1.0, -5.0, 5.0).slope == doctest::Approx(1.0));
  }

  TEST_CASE("shooting has no bracket without a solution") {
    const LinearODE2 ode = catalog_entry("bvp_no_solution").scalar()->to_ode();
    CHECK_THROWS_AS(shoot_bvp(ode, 1.0, 2.0, -1e3, 1e3), NoSignChange);
  }

  TEST_CASE("catalog") {
    CHECK(catalog().size() == 6);
    for (const auto& c : catalog()) {
      CAPTURE(c.id);
      CHECK(catalog_entry(c.id).id == c.id);
      if (c.analytic) CHECK(analytic_self_check(c) < 1e-9);
    }
    CHECK_THROWS_AS(catalog_entry("missing"), ConfigError);
    CHECK(catalog_entry("lqr_double_integrator").control() != nullptr);
  }

}  // TEST_SUITE
