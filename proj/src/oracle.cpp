#include "tfc/oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tfc/error.hpp"

namespace tfc {

Trajectory rk4_integrate(const SystemRhs& rhs, double t0, State y0, double h, int steps) {
  if (!(h > 0.0)) throw InvalidArgument("rk4_integrate: step must be positive");
  if (steps < 0) throw InvalidArgument("rk4_integrate: negative step count");
  const std::size_t n = y0.size();
  Trajectory out;
  out.t.reserve(steps + 1);
  out.y.reserve(steps + 1);
  out.t.push_back(t0);
  out.y.push_back(std::move(y0));

  State k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    const State& y = out.y.back();
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    State next(n);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(next[i])) {
        throw NonFiniteState(s + 1,
                             "rk4_integrate: non-finite state at step " + std::to_string(s + 1));
      }
    }
    out.t.push_back(t0 + (s + 1) * h);
    out.y.push_back(std::move(next));
  }
  return out;
}

SystemRhs first_order_system(const LinearODE2& ode) {
  return [ode](double t, std::span<const double> y, std::span<double> dydt) {
    dydt[0] = y[1];
    dydt[1] = (ode.f(t) - ode.f1(t) * y[1] - ode.f0(t) * y[0]) / ode.f2(t);
  };
}

ShootingResult shoot_bvp(const LinearODE2& ode, double y1, double y2, double slope_lo,
                         double slope_hi, int steps) {
  if (steps < 1) throw InvalidArgument("shoot_bvp: steps must be >= 1");
  const double h = (ode.t2 - ode.t1) / steps;
  const SystemRhs rhs = first_order_system(ode);
  auto shoot = [&](double slope) { return rk4_integrate(rhs, ode.t1, {y1, slope}, h, steps); };
  auto miss = [&](const Trajectory& tr) { return tr.y.back()[0] - y2; };

  double lo = std::min(slope_lo, slope_hi), hi = std::max(slope_lo, slope_hi);
  Trajectory tlo = shoot(lo), thi = shoot(hi);
  double flo = miss(tlo), fhi = miss(thi);
  if (flo == 0.0) return {lo, 0.0, 0, std::move(tlo)};
  if (fhi == 0.0) return {hi, 0.0, 0, std::move(thi)};
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NoSignChange("shoot_bvp: endpoint miss has the same sign at both bracket ends (" +
                       std::to_string(flo) + ", " + std::to_string(fhi) + ")");
  }

  ShootingResult best;
  for (int it = 1; it <= 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    Trajectory tm = shoot(mid);
    const double fm = miss(tm);
    best = {mid, fm, it, std::move(tm)};
    if (std::abs(fm) <= 1e-10 || hi - lo <= 1e-15 * std::max(1.0, std::abs(mid))) break;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return best;
}

Trajectory shoot_state_costate(const StateCostateProblem& p, int steps) {
  if (steps < 1) throw InvalidArgument("shoot_state_costate: steps must be >= 1");
  const SystemRhs rhs = [&p](double t, std::span<const double> y, std::span<double> dydt) {
    const Eigen::Vector2d x(y[0], y[1]), l(y[2], y[3]);
    const Eigen::Vector2d dx = p.A11(t) * x + p.A12(t) * l;
    const Eigen::Vector2d dl = p.A21(t) * x + p.A22(t) * l;
    dydt[0] = dx(0);
    dydt[1] = dx(1);
    dydt[2] = dl(0);
    dydt[3] = dl(1);
  };
  const double h = (p.tf - p.t0) / steps;
  auto run = [&](const Eigen::Vector2d& l0) {
    return rk4_integrate(rhs, p.t0, {p.x0(0), p.x0(1), l0(0), l0(1)}, h, steps);
  };
  auto final_costate = [](const Trajectory& tr) {
    return Eigen::Vector2d(tr.y.back()[2], tr.y.back()[3]);
  };

  // lambda(tf) is affine in lambda(t0).
  const Eigen::Vector2d base = final_costate(run(Eigen::Vector2d::Zero()));
  Eigen::Matrix2d sens;
  sens.col(0) = final_costate(run(Eigen::Vector2d::UnitX())) - base;
  sens.col(1) = final_costate(run(Eigen::Vector2d::UnitY())) - base;
  const Eigen::Vector2d l0 = sens.fullPivLu().solve(p.lambda_f - base);
  return run(l0);
}

namespace {

ScalarProblemSpec scalar_spec(std::string id, ProblemKind kind, std::string f2, std::string f1,
                              std::string f0, std::string f, double t1, double t2,
                              std::vector<ConstraintEntry> constraints, int m_max) {
  ScalarProblemSpec s;
  s.id = std::move(id);
  s.kind = kind;
  s.f2 = std::move(f2);
  s.f1 = std::move(f1);
  s.f0 = std::move(f0);
  s.f = std::move(f);
  s.t1 = t1;
  s.t2 = t2;
  s.constraints = std::move(constraints);
  s.solver.m_max = m_max;
  return s;
}

std::vector<CatalogProblem> build_catalog() {
  using std::numbers::e;
  using std::numbers::pi;
  std::vector<CatalogProblem> out;

  out.push_back({"ivp_variable_coeff", "IVP t^2 y'' - t(t+2) y' + (t+2) y = 0, y(1) = 1, y'(1) = 0",
                 scalar_spec("ivp_variable_coeff", ProblemKind::ivp, "t^2", "-t*(t+2)", "t+2", "0",
                             1.0, 4.0, {{0, "t1", 1.0}, {1, "t1", 0.0}}, 23),
                 AnalyticSolution([](double t) {
                   const double g = std::exp(t - 1.0);
                   return Jet{(2.0 - g) * t, 2.0 - (1.0 + t) * g, -(2.0 + t) * g};
                 }),
                 Classification::converged});

  out.push_back({"bvp_damped", "BVP y'' + 2y' + y = 0, y(0) = 1, y(1) = 3",
                 scalar_spec("bvp_damped", ProblemKind::bvp, "1", "2", "1", "0", 0.0, 1.0,
                             {{0, "t1", 1.0}, {0, "t2", 3.0}}, 23),
                 AnalyticSolution([](double t) {
                   const double g = std::exp(-t);
                   return Jet{g + (3.0 * e - 1.0) * t * g, -g * (3.0 * e * t - t - 3.0 * e + 2.0),
                              g * (3.0 * e * t - t - 6.0 * e + 3.0)};
                 }),
                 Classification::converged});

  out.push_back({"bvp_unknown",
                 "BVP with nonconstant coefficients and no closed-form solution, y(0) = y(1) = 2",
                 scalar_spec("bvp_unknown", ProblemKind::bvp, "1+2*t", "cos(t^2)-3*t+1",
                             "6*sin(t^2)-exp(cos(3*t))", "2*(1-sin(3*t))*(3*t-pi)/(4-t)", 0.0, 1.0,
                             {{0, "t1", 2.0}, {0, "t2", 2.0}}, 23),
                 std::nullopt, Classification::converged});

  out.push_back({"bvp_no_solution", "BVP y'' - 6y' + 25y = 0, y(0) = 1, y(pi) = 2 (no solution)",
                 scalar_spec("bvp_no_solution", ProblemKind::bvp, "1", "-6", "25", "0", 0.0, pi,
                             {{0, "t1", 1.0}, {0, "t2", 2.0}}, 22),
                 std::nullopt, Classification::no_solution});

  out.push_back({"bvp_infinite",
                 "BVP y'' + 4y = 0, y(0) = -2, y(2 pi) = -2 (infinitely many solutions)",
                 scalar_spec("bvp_infinite", ProblemKind::bvp, "1", "0", "4", "0", 0.0, 2.0 * pi,
                             {{0, "t1", -2.0}, {0, "t2", -2.0}}, 23),
                 std::nullopt, Classification::infinite_solutions});

  ControlProblemSpec lqr;
  lqr.id = "lqr_double_integrator";
  lqr.A11 = {{{"0", "1"}, {"0", "0"}}};
  lqr.A12 = {{{"0", "0"}, {"0", "-1"}}};
  lqr.A21 = {{{"-1", "0"}, {"0", "0"}}};
  lqr.A22 = {{{"0", "0"}, {"-1", "0"}}};
  lqr.x0 = {1.0, 0.0};
  lqr.lambda_f = {0.0, 0.0};
  lqr.t0 = 0.0;
  lqr.tf = 2.0;
  lqr.solver.m = 20;
  lqr.solver.N = 200;
  out.push_back({"lqr_double_integrator",
                 "double-integrator state/costate system, x(0) = {1, 0}, lambda(2) = 0", lqr,
                 std::nullopt, std::nullopt});
  return out;
}

}  // namespace

const std::vector<CatalogProblem>& catalog() {
  static const std::vector<CatalogProblem> entries = build_catalog();
  return entries;
}

const CatalogProblem& catalog_entry(std::string_view id) {
  for (const auto& p : catalog()) {
    if (p.id == id) return p;
  }
  throw ConfigError("unknown catalog id '" + std::string(id) + "'");
}

double analytic_self_check(const CatalogProblem& p, int points) {
  const auto* s = p.scalar();
  if (!s || !p.analytic) return 0.0;
  const LinearODE2 ode = s->to_ode();
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = s->t1 + (s->t2 - s->t1) * i / (points - 1);
    worst = std::max(worst, std::abs(residual_t(ode, t, (*p.analytic)(t))));
  }
  return worst;
}

}  // namespace tfc
