#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfc/constraint_embedding.hpp"
#include "tfc/diagnostics.hpp"
#include "tfc/ode_problem.hpp"
#include "tfc/optimal_control.hpp"
#include "tfc/problem_file.hpp"

namespace tfc {

// Reference machinery independent of the least-squares path.

using State = std::vector<double>;
using SystemRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct Trajectory {
  std::vector<double> t;
  std::vector<State> y;
};

/// Classical fixed-step fourth-order Runge-Kutta. Throws NonFiniteState with
/// the step index if the state stops being finite.
Trajectory rk4_integrate(const SystemRhs& rhs, double t0, State y0, double h, int steps);

/// {y, y'} form of f2 y'' + f1 y' + f0 y = f.
SystemRhs first_order_system(const LinearODE2& ode);

struct ShootingResult {
  double slope = 0.0;  // y'(t1)
  double endpoint_miss = 0.0;
  int iterations = 0;
  Trajectory trajectory;
};

/// Bisection on y'(t1) over [slope_lo, slope_hi] until the RK4 endpoint
/// matches y2 to 1e-10 (or the bracket collapses). Throws NoSignChange when
/// the bracket does not straddle the target.
ShootingResult shoot_bvp(const LinearODE2& ode, double y1, double y2, double slope_lo,
                         double slope_hi, int steps = 4000);

/// Linear shooting for the state/costate system: lambda(t0) is found by
/// superposition of three RK4 runs. Trajectory states are {x, lambda}.
Trajectory shoot_state_costate(const StateCostateProblem& p, int steps = 4000);

using AnalyticSolution = std::function<Jet(double t)>;  // t-derivatives

struct CatalogProblem {
  std::string id;
  std::string description;
  ProblemFile problem;
  std::optional<AnalyticSolution> analytic;
  std::optional<Classification> expected_class;

  const ScalarProblemSpec* scalar() const { return std::get_if<ScalarProblemSpec>(&problem); }
  const ControlProblemSpec* control() const { return std::get_if<ControlProblemSpec>(&problem); }
};

/// Built-in problems: ivp_variable_coeff, bvp_damped, bvp_unknown, bvp_no_solution,
/// bvp_infinite, lqr_double_integrator.
const std::vector<CatalogProblem>& catalog();
/// Throws ConfigError for unknown ids.
const CatalogProblem& catalog_entry(std::string_view id);

/// Largest |ODE residual| of the analytic solution over `points` uniform
/// nodes; zero when no analytic solution is attached.
double analytic_self_check(const CatalogProblem& p, int points = 101);

}  // namespace tfc
