#include <doctest.h>

#include <cmath>
#include <random>

#include "tfc/error.hpp"
#include "tfc/optimal_control.hpp"
#include "tfc/oracle.hpp"

using namespace tfc;

namespace {

Matrix2Function constant(Eigen::Matrix2d a) {
  return [a](double) { return a; };
}

Eigen::Matrix2d mat(double a, double b, double c, double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return m;
}

StateCostateProblem double_integrator() {
  StateCostateProblem p;
  p.A11 = constant(mat(0, 1, 0, 0));
  p.A12 = constant(mat(0, 0, 0, -1));
  p.A21 = constant(mat(-1, 0, 0, 0));
  p.A22 = constant(mat(0, 0, -1, 0));
  p.x0 = {1.0, 0.0};
  p.lambda_f = {0.0, 0.0};
  p.t0 = 0.0;
  p.tf = 2.0;
  return p;
}

CollocationConfig config(int m, int N) {
  CollocationConfig c;
  c.m = m;
  c.N = N;
  return c;
}

}  // namespace

TEST_SUITE("optimal_control") {
  TEST_CASE("zero dynamics keep both boundary values") {
    StateCostateProblem p;
    p.A11 = p.A12 = p.A21 = p.A22 = constant(Eigen::Matrix2d::Zero());
    p.x0 = {0.3, 0.0};
    p.lambda_f = {-1.2, 2.5};
    p.t0 = -1.0;
    p.tf = 3.0;
    const StateCostateResult r = solve_state_costate(p, config(10, 60));
    for (double t : {-1.0, 0.0, 1.7, 3.0}) {
      CHECK((r.solution.state(t) - p.x0).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((r.solution.costate(t) - p.lambda_f).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(r.fit.residuals.cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("block layout") {
    const StateCostateProblem p = double_integrator();
    const BlockLSSystem s = assemble_state_costate(p, config(12, 40));
    CHECK(s.M.rows() == 160);
    CHECK(s.M.cols() == 36);
    CHECK(s.per_block == 12);
    CHECK(s.first_index == 1);
  }

  TEST_CASE("embedding holds boundary values for arbitrary coefficients") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
      const int pb = 4 + trial % 10;
      Eigen::VectorXd a(pb), b(pb), c(pb);
      for (int i = 0; i < pb; ++i) {
        a(i) = n(rng);
        b(i) = n(rng);
        c(i) = n(rng);
      }
      const double t0 = n(rng), tf = t0 + 0.5 + std::abs(n(rng));
      const Eigen::Vector2d x0(n(rng), n(rng)), lf(n(rng), n(rng));
      const StateCostateSolution s(DomainMap(t0, tf), x0, lf, a, b, c, 1);
      CHECK((s.state(t0) - x0).cwiseAbs().maxCoeff() < 1e-11);
      CHECK((s.costate(tf) - lf).cwiseAbs().maxCoeff() < 1e-11);
      // The second state component is the rate of the first one, shifted.
      const double tm = 0.5 * (t0 + tf);
      CHECK(s.state(tm)(1) - x0(1) == doctest::Approx(s.state_rate(tm)(0) - s.state_rate(t0)(0)));
    }
  }

  TEST_CASE("double integrator matches the shooting oracle") {
    const StateCostateProblem p = double_integrator();
    const StateCostateResult r = solve_state_costate(p, config(20, 200));
    CHECK(r.dropped_columns.empty());
    CHECK((r.solution.state(p.t0) - p.x0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r.solution.costate(p.tf) - p.lambda_f).cwiseAbs().maxCoeff() < 1e-12);
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(2.0 * i / 200);
    CHECK(max_dynamics_residual(p, r.solution, grid) <= 1e-8);

    const Trajectory ref = shoot_state_costate(p, 4000);
    for (std::size_t i = 0; i < ref.t.size(); i += 40) {
      const double t = ref.t[i];
      CHECK(std::abs(r.solution.state(t)(0) - ref.y[i][0]) <= 1e-6);
      CHECK(std::abs(r.solution.state(t)(1) - ref.y[i][1]) <= 1e-6);
      CHECK(std::abs(r.solution.costate(t)(0) - ref.y[i][2]) <= 1e-6);
      CHECK(std::abs(r.solution.costate(t)(1) - ref.y[i][3]) <= 1e-6);
    }
  }

  TEST_CASE("decoupled blocks reduce to scalar problems") {
    // State: companion form of x'' + 0.4 x' + 2 x = 0; costate: l' = diag(-0.5, 0.8) l.
    StateCostateProblem p;
    p.A11 = constant(mat(0, 1, -2.0, -0.4));
    p.A12 = constant(Eigen::Matrix2d::Zero());
    p.A21 = constant(Eigen::Matrix2d::Zero());
    p.A22 = constant(mat(-0.5, 0, 0, 0.8));
    p.x0 = {1.0, -0.3};
    p.lambda_f = {2.0, -1.0};
    p.t0 = 0.0;
    p.tf = 3.0;
    const StateCostateResult r = solve_state_costate(p, config(24, 300));

    const auto one = [](double) { return 1.0; };
    const LinearODE2 ode{one,
                         [](double) { return 0.4; },
                         [](double) { return 2.0; },
                         [](double) { return 0.0; },
                         0.0,
                         3.0};
    const std::vector<PointConstraint> pcs = {{0, 0.0, 1.0}, {1, 0.0, -0.3}};
    CollocationConfig sc;
    sc.m = 24;
    const LSSolution scalar = solve_problem(ode, pcs, sc);
    for (double t : {0.0, 0.7, 1.5, 2.2, 3.0}) {
      const Jet y = scalar.solution.at(t);
      CHECK(std::abs(r.solution.state(t)(0) - y.value) < 1e-9);
      CHECK(std::abs(r.solution.state(t)(1) - y.d1) < 1e-9);
      CHECK(r.solution.costate(t)(0) == doctest::Approx(2.0 * std::exp(-0.5 * (t - 3.0))));
      CHECK(r.solution.costate(t)(1) == doctest::Approx(-1.0 * std::exp(0.8 * (t - 3.0))));
    }
  }

  TEST_CASE("time-varying blocks match the shooting oracle") {
    StateCostateProblem p;
    p.A11 = [](double t) { return mat(0, 1, -1 - 0.5 * t, 0); };
    p.A12 = constant(mat(0, 0, 0, -1));
    p.A21 = [](double t) { return mat(-1 - 0.2 * std::sin(t), 0, 0, 0); };
    p.A22 = [](double t) { return mat(0, 1 + 0.5 * t, -1, 0); };
    p.x0 = {0.5, 1.0};
    p.lambda_f = {0.2, -0.1};
    p.t0 = 0.0;
    p.tf = 1.5;
    const StateCostateResult r = solve_state_costate(p, config(22, 250));
    const Trajectory ref = shoot_state_costate(p, 3000);
    for (std::size_t i = 0; i < ref.t.size(); i += 100) {
      const double t = ref.t[i];
      for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(r.solution.state(t)(k) - ref.y[i][k]) <= 1e-6);
        CHECK(std::abs(r.solution.costate(t)(k) - ref.y[i][2 + k]) <= 1e-6);
      }
    }
  }

  TEST_CASE("uniform weights change nothing") {
    const StateCostateProblem p = double_integrator();
    CollocationConfig c = config(16, 100);
    const StateCostateResult a = solve_state_costate(p, c);
    c.weights = std::vector<double>(100, 3.0);
    const StateCostateResult b = solve_state_costate(p, c);
    CHECK((a.fit.xi - b.fit.xi).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("non-finite blocks are reported with the node") {
    StateCostateProblem p = double_integrator();
    p.A11 = [](double t) { return mat(0, 1, 1.0 / (t - 2.0), 0); };
    CHECK_THROWS_AS(solve_state_costate(p, config(8, 20)), NodeSingularity);
  }

  TEST_CASE("alternative embeddings") {
    const Eigen::Vector2d x0(1.0, -2.0), v0(0.5, 3.0);
    const VectorFreeFunction zero = [](int, double) { return Eigen::Vector2d::Zero(); };
    const VectorFreeFunction wave = [](int order, double t) {
      return order == 0 ? Eigen::Vector2d(std::sin(t), std::cos(2 * t))
                        : Eigen::Vector2d(std::cos(t), -2 * std::sin(2 * t));
    };
    const VectorFreeFunction ramp = [](int order, double t) {
      return order == 0 ? Eigen::Vector2d(t * t, 1 - t) : Eigen::Vector2d(2 * t, -1.0);
    };

    SUBCASE("state and rate at the initial time") {
      const auto e = alternative_embeddings(EmbeddingPattern::state_ic_pair, 0.5, 2.0, x0, v0);
      for (double t : {0.5, 1.0, 2.0}) {
        CHECK((e.evaluate(t, zero, zero).first - (x0 + (t - 0.5) * v0)).norm() < 1e-14);
      }
      CHECK((e.evaluate(0.5, wave, ramp).first - x0).norm() < 1e-12);
      CHECK((e.evaluate_rate(0.5, wave, ramp).first - v0).norm() < 1e-12);
    }

    SUBCASE("costate tied to the final state") {
      const auto e =
          alternative_embeddings(EmbeddingPattern::terminal_transversality, 0.0, 1.0, wave(0, 0.0));
      for (double t : {0.0, 0.3, 1.0}) {
        const auto [x, l] = e.evaluate(t, wave, wave);
        CHECK((l - wave(0, t)).norm() < 1e-14);
        CHECK((x - wave(0, t)).norm() < 1e-14);
      }
      const auto [x, l] = e.evaluate(0.4, wave, ramp);
      CHECK((l - (ramp(0, 0.4) + wave(0, 1.0) - ramp(0, 1.0))).norm() < 1e-14);
      const auto [xf, lf] = e.evaluate(1.0, wave, ramp);
      CHECK((lf - xf).norm() < 1e-12);
    }

    SUBCASE("state initial, costate final") {
      const auto e =
          alternative_embeddings(EmbeddingPattern::state_initial_costate_final, 0.0, 1.0, x0, v0);
      CHECK((e.evaluate(0.0, wave, ramp).first - x0).norm() < 1e-12);
      CHECK((e.evaluate(1.0, wave, ramp).second - v0).norm() < 1e-12);
    }

    SUBCASE("names") {
      for (auto p : {EmbeddingPattern::state_initial_costate_final, EmbeddingPattern::state_ic_pair,
                     EmbeddingPattern::terminal_transversality}) {
        CHECK(embedding_pattern_from_string(to_string(p)) == p);
      }
      CHECK_THROWS_AS(embedding_pattern_from_string("free_final_time"), UnknownCase);
    }
  }

}  // TEST_SUITE
