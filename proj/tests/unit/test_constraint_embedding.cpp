#include <doctest.h>

#include <cmath>
#include <random>

#include "tfc/constraint_embedding.hpp"
#include "tfc/error.hpp"

using namespace tfc;

namespace {

// g(x) = sum c_j x^j + a sin(b x + c), with derivatives.
struct RandomFree {
  std::vector<double> poly;
  double a, b, c;

  double operator()(int order, double x) const {
    double p = 0.0;
    for (std::size_t j = order; j < poly.size(); ++j) {
      double f = 1.0;
      for (int r = 0; r < order; ++r) f *= static_cast<double>(j) - r;
      p += poly[j] * f * std::pow(x, static_cast<double>(j) - order);
    }
    const double bn = std::pow(b, order);
    switch (order) {
      case 0: return p + a * std::sin(b * x + c);
      case 1: return p + a * bn * std::cos(b * x + c);
      default: return p - a * bn * std::sin(b * x + c);
    }
  }
};

RandomFree random_free(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> deg(0, 8);
  RandomFree g;
  g.poly.resize(deg(rng) + 1);
  for (double& c : g.poly) c = u(rng);
  g.a = u(rng);
  g.b = 3.0 * u(rng);
  g.c = u(rng);
  return g;
}

double derivative_of(const Jet& j, int order) {
  return order == 0 ? j.value : order == 1 ? j.d1 : j.d2;
}

}  // namespace

TEST_SUITE("constraint_embedding") {
  TEST_CASE("two first-derivative constraints pick the {x, x^2} support") {
    const std::vector<ConstraintSpec> cs = {{1, 0.0, 0.0}, {1, 1.0, 0.0}};
    const BetaSet b = build_betas(cs);
    CHECK(b.monomial_support == std::vector<int>{1, 2});
    const auto p = b.polynomials();
    // beta_1 = t(2 t2 - t) / (2 (t2 - t1)), beta_2 = t (t - 2 t1) / (2 (t2 - t1)).
    for (double t : {-0.4, 0.3, 0.9}) {
      CHECK(p[0].eval(t) == doctest::Approx(t * (2.0 - t) / 2.0));
      CHECK(p[1].eval(t) == doctest::Approx(t * t / 2.0));
    }
    CHECK(p[0].eval(0.0, 1) == doctest::Approx(1.0));
    CHECK(std::abs(p[0].eval(1.0, 1)) < 1e-14);
    CHECK(std::abs(p[1].eval(0.0, 1)) < 1e-14);
    CHECK(p[1].eval(1.0, 1) == doctest::Approx(1.0));
  }

  TEST_CASE("single value constraint gives beta = 1") {
    const std::vector<ConstraintSpec> cs = {{0, -1.0, 2.0}};
    const auto p = build_betas(cs).polynomials();
    REQUIRE(p.size() == 1);
    for (double x : {-1.0, 0.0, 0.6}) CHECK(p[0].eval(x) == doctest::Approx(1.0));
  }

  TEST_CASE("four mixed constraints reproduce the hand-derived cubic betas") {
    // Orders {2, 0, 0, 1} at t = {-1, 0, 2, 2}.
    const std::vector<ConstraintSpec> cs = {
        {2, -1.0, 0.0}, {0, 0.0, 0.0}, {0, 2.0, 0.0}, {1, 2.0, 0.0}};
    const BetaSet b = build_betas(cs);
    std::vector<LinearFunctional> fs;
    for (const auto& c : cs) fs.push_back(LinearFunctional::point(c.order, c.location));
    const Eigen::MatrixXd k = kronecker_matrix(b, fs);
    CHECK((k - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);

    const std::vector<Polynomial> by_hand = {
        Polynomial({0.0, -4.0 / 14, 4.0 / 14, -1.0 / 14}),
        Polynomial({1.0, -24.0 / 28, 3.0 / 28, 1.0 / 28}),
        Polynomial({0.0, 24.0 / 28, -3.0 / 28, -1.0 / 28}),
        Polynomial({0.0, -10.0 / 14, 3.0 / 14, 1.0 / 14}),
    };
    // The hand-derived set satisfies the Kronecker property on its own...
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const double v = by_hand[j].eval(cs[i].location, cs[i].order);
        CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
    }
    // ...and, the cubic being unique, coincides with the built set.
    const auto built = b.polynomials();
    for (double t : {-1.0, -0.3, 0.5, 1.7, 2.0}) {
      for (int i = 0; i < 4; ++i) CHECK(built[i].eval(t) == doctest::Approx(by_hand[i].eval(t)));
    }
  }

  TEST_CASE("random constraint sets give the identity Kronecker matrix") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> n_dist(1, 4), order_dist(0, 2);
    std::uniform_real_distribution<double> loc(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = n_dist(rng);
      std::vector<LinearFunctional> fs;
      for (int i = 0; i < n; ++i) fs.push_back(LinearFunctional::point(order_dist(rng), loc(rng)));
      const BetaSet b = build_betas(fs);
      CHECK((kronecker_matrix(b, fs) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <
            1e-10);
    }
  }

  TEST_CASE("degenerate constraint sets are rejected") {
    const std::vector<ConstraintSpec> dup = {{0, 0.5, 1.0}, {0, 0.5, 2.0}};
    CHECK_THROWS_AS(build_betas(dup), SingularConstraintSet);
    const std::vector<ConstraintSpec> none;
    CHECK_THROWS_AS(build_betas(none), InvalidArgument);
  }

  TEST_CASE("relative constraints") {
    const std::vector<RelativeConstraintSpec> specs = {{0, 0.0, 1.0}, {1, 0.0, 1.0}};
    const ConstrainedExpression expr = build_relative_betas(specs);

    SUBCASE("cubic free function against the closed form") {
      // y = g + t (g1 - g2) / dt + t (t - (t1 + t2)) / (2 dt) (g1' - g2') on (0, 1).
      const FreeFunction g = [](int order, double t) {
        return order == 0 ? t * t * t : order == 1 ? 3 * t * t : 6 * t;
      };
      for (double t : {0.0, 0.25, 0.8, 1.0}) {
        const double expected = t * t * t + t * (0.0 - 1.0) + t * (t - 1.0) / 2.0 * (0.0 - 3.0);
        CHECK(expr.evaluate(t, g).value == doctest::Approx(expected));
      }
      const Jet a = expr.evaluate(0.0, g), b = expr.evaluate(1.0, g);
      CHECK(std::abs(a.value - b.value) < 1e-12);
      CHECK(std::abs(a.d1 - b.d1) < 1e-12);
    }

    SUBCASE("constant free function passes through") {
      const FreeFunction g = [](int order, double) { return order == 0 ? 4.5 : 0.0; };
      for (double t : {0.0, 0.3, 1.0}) CHECK(expr.evaluate(t, g).value == doctest::Approx(4.5));
    }

    SUBCASE("oscillatory free function on random intervals") {
      std::mt19937_64 rng(5);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      const FreeFunction g = [](int order, double t) {
        return order == 0   ? std::sin(5 * t)
               : order == 1 ? 5 * std::cos(5 * t)
                            : -25 * std::sin(5 * t);
      };
      for (int trial = 0; trial < 20; ++trial) {
        double t1 = u(rng), t2 = u(rng);
        if (std::abs(t1 - t2) < 0.05) continue;
        const std::vector<RelativeConstraintSpec> s = {{0, t1, t2}, {1, t1, t2}};
        const ConstrainedExpression e = build_relative_betas(s);
        const Jet a = e.evaluate(t1, g), b = e.evaluate(t2, g);
        CHECK(std::abs(a.value - b.value) < 1e-10);
        CHECK(std::abs(a.d1 - b.d1) < 1e-10);
      }
    }
  }

  TEST_CASE("evaluation of simple expressions") {
    SUBCASE("initial value pair with zero free function") {
      const std::array<double, 2> v = {1.0, 0.0};
      const ConstrainedExpression e = fixed_case_expression(ConstraintCase::ivp_y_dy, v);
      const FreeFunction zero = [](int, double) { return 0.0; };
      for (double x : {-1.0, 0.0, 0.7}) CHECK(e.evaluate(x, zero).value == doctest::Approx(1.0));
    }

    SUBCASE("slope constraints hold for an exponential free function") {
      const double t1 = 0.2, t2 = 1.4, d1 = -0.7, d2 = 2.1;
      const std::vector<ConstraintSpec> cs = {{1, t1, d1}, {1, t2, d2}};
      const ConstrainedExpression e = make_constrained_expression(cs);
      const FreeFunction g = [](int, double t) { return std::exp(t); };
      CHECK(e.evaluate(t1, g).d1 == doctest::Approx(d1));
      CHECK(e.evaluate(t2, g).d1 == doctest::Approx(d2));
    }

    SUBCASE("two values with zero free function is the linear interpolant") {
      const std::array<double, 2> v = {1.0, 3.0};
      const ConstrainedExpression e = fixed_case_expression(ConstraintCase::bvp_y_y, v);
      for (double x : {-1.0, -0.2, 0.5, 1.0}) {
        CHECK(e.constraint_part(x).value ==
              doctest::Approx((1.0 - x) / 2.0 + 3.0 * (1.0 + x) / 2.0));
      }
    }

    SUBCASE("zero curvature constraints with zero free function") {
      const std::array<double, 2> v = {0.0, 0.0};
      const ConstrainedExpression e = fixed_case_expression(ConstraintCase::bvp_ddy_ddy, v);
      for (double x : {-1.0, 0.1, 1.0}) CHECK(e.constraint_part(x).value == 0.0);
    }
  }

  TEST_CASE("all fixed cases embed their constraints") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (ConstraintCase c : kAllCases) {
      CAPTURE(to_string(c));
      const auto slots = case_slots(c);
      for (int trial = 0; trial < 20; ++trial) {
        const std::array<double, 2> v = {u(rng), u(rng)};
        const ConstrainedExpression e = fixed_case_expression(c, v);
        const RandomFree g = random_free(rng);
        const FreeFunction gf = [&g](int order, double x) { return g(order, x); };
        for (int i = 0; i < 2; ++i) {
          const Jet y = e.evaluate(slots[i].location, gf);
          CHECK(std::abs(derivative_of(y, slots[i].order) - v[i]) < 1e-9);
        }
      }
    }
  }

  TEST_CASE("case names and identification") {
    for (ConstraintCase c : kAllCases) {
      CHECK(case_from_string(to_string(c)) == c);
      const auto s = case_slots(c);
      const auto id = identify_case(s[0].order, s[0].location, s[1].order, s[1].location);
      REQUIRE(id.has_value());
      CHECK(*id == c);
      const auto swapped = identify_case(s[1].order, s[1].location, s[0].order, s[0].location);
      REQUIRE(swapped.has_value());
      CHECK(*swapped == c);
    }
    CHECK_THROWS_AS(case_from_string("bvp_y_dddy"), UnknownCase);
    CHECK_FALSE(identify_case(0, -1.0, 0, -1.0).has_value());
    CHECK_FALSE(identify_case(0, 1.0, 1, 1.0).has_value());
  }

  TEST_CASE("fixed expressions reject a wrong value count") {
    const std::array<double, 1> one = {1.0};
    CHECK_THROWS(fixed_case_expression(ConstraintCase::bvp_y_y, one));
  }

}  // TEST_SUITE
