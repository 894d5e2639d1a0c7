#include <doctest.h>

#include <cmath>

#include "tfc/error.hpp"
#include "tfc/ode_problem.hpp"

using namespace tfc;

namespace {

LinearODE2 variable_coeff_ivp() {
  return {[](double t) { return t * t; },
          [](double t) { return -t * (t + 2); },
          [](double t) { return t + 2; },
          [](double) { return 0.0; },
          1.0,
          4.0};
}

Jet variable_coeff_exact(double t) {
  const double g = std::exp(t - 1.0);
  return {(2.0 - g) * t, 2.0 - (1.0 + t) * g, -(2.0 + t) * g};
}

ScalarFunction constant(double c) {
  return [c](double) { return c; };
}

}  // namespace

TEST_SUITE("ode_problem") {
  TEST_CASE("constants solve y'' = 0") {
    const MappedODE m(LinearODE2{constant(1), constant(0), constant(0), constant(0), 0.0, 2.0});
    for (double x : {-1.0, 0.0, 0.5, 1.0}) CHECK(m.residual(x, Jet{3.7, 0.0, 0.0}) == 0.0);
  }

  TEST_CASE("mapped coefficients") {
    const MappedODE m(variable_coeff_ivp());
    const MappedCoefficients c = m.coefficients(-1.0);  // t = 1
    CHECK(c.a2 == doctest::Approx(4.0 / 9.0));
    CHECK(c.a1 == doctest::Approx(2.0 / 3.0 * -3.0));
    CHECK(c.a0 == doctest::Approx(3.0));
    CHECK(c.rhs == 0.0);
  }

  TEST_CASE("known solution has a small mapped residual") {
    const LinearODE2 ode = variable_coeff_ivp();
    const MappedODE m(ode);
    const double dt = 3.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = -1.0 + 2.0 * i / 100;
      const Jet yt = variable_coeff_exact(m.map().to_t(x));
      const Jet yx{yt.value, yt.d1 * dt / 2, yt.d2 * dt * dt / 4};
      CHECK(std::abs(m.residual(x, yx)) <= 1e-9);
      CHECK(std::abs(residual_t(ode, m.map().to_t(x), yt)) <= 1e-9);
    }
  }

  TEST_CASE("implied second derivative at the initial point") {
    const MappedODE m(variable_coeff_ivp());
    InitialValues known;
    known.y = 1.0;
    known.dy = 0.0;
    const ImpliedValue v = implied_initial_value(m, known);
    CHECK(v.which == InitialQuantity::ddy);
    // The exact solution has y''(1) = -3; in x units that is -3 * 9 / 4.
    CHECK(v.value == doctest::Approx(variable_coeff_exact(1.0).d2 * 9.0 / 4.0));
    CHECK(v.value == doctest::Approx(-6.75));
  }

  TEST_CASE("implied value with a homogeneous right-hand side") {
    const MappedODE m(
        LinearODE2{constant(2.5), constant(-1.0), constant(1.0), constant(0.0), 0.0, 1.0});
    InitialValues known;
    known.dy = 0.0;
    known.ddy = 0.0;
    const ImpliedValue v = implied_initial_value(m, known);
    CHECK(v.which == InitialQuantity::y);
    CHECK(v.value == 0.0);
  }

  TEST_CASE("implied first derivative round trip") {
    const MappedODE m(variable_coeff_ivp());
    InitialValues known;
    known.y = 1.0;
    known.ddy = -6.75;
    const ImpliedValue v = implied_initial_value(m, known);
    CHECK(v.which == InitialQuantity::dy);
    CHECK(std::abs(v.value) < 1e-12);
  }

  TEST_CASE("errors") {
    SUBCASE("vanishing leading coefficient") {
      const MappedODE m(LinearODE2{[](double t) { return t - 1.0; }, constant(1), constant(1),
                                   constant(0), 1.0, 2.0});
      InitialValues known;
      known.y = 1.0;
      known.dy = 0.0;
      CHECK_THROWS_AS(implied_initial_value(m, known), DivisorZero);
    }
    SUBCASE("wrong number of known values") {
      const MappedODE m(variable_coeff_ivp());
      InitialValues known;
      known.y = 1.0;
      CHECK_THROWS_AS(implied_initial_value(m, known), InvalidArgument);
    }
    SUBCASE("singular coefficient at a node") {
      const MappedODE m(LinearODE2{constant(1), constant(0), constant(0),
                                   [](double t) { return 1.0 / t; }, 0.0, 1.0});
      const std::vector<double> nodes = {-1.0, 0.0, 1.0};
      try {
        (void)m.coefficients_at(nodes);
        FAIL("expected NodeSingularity");
      } catch (const NodeSingularity& e) {
        CHECK(e.node() == 0);
      }
    }
  }

}  // TEST_SUITE
