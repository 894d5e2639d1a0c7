#include "tfc/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tfc/chebyshev.hpp"
#include "tfc/error.hpp"

namespace tfc {

namespace {

// Monomial coefficients of T_k.
std::vector<double> chebyshev_coefficients(int k) {
  std::vector<double> prev{1.0};
  if (k == 0) return prev;
  std::vector<double> cur{0.0, 1.0};
  for (int j = 1; j < k; ++j) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t e = 0; e < cur.size(); ++e) next[e + 1] += 2.0 * cur[e];
    for (std::size_t e = 0; e < prev.size(); ++e) next[e] -= prev[e];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// d^order T_k / dx^order at x, for any real x.
double chebyshev_derivative(int k, int order, double x) {
  if ((x == 1.0 || x == -1.0) && order <= 2) {
    const auto e = endpoint_values(k, static_cast<int>(x));
    return order == 0 ? e.value : (order == 1 ? e.d1 : e.d2);
  }
  if (std::abs(x) <= 1.0) return eval_basis(std::max(k, 1), order, x).deriv(order, k);
  return Polynomial(chebyshev_coefficients(k)).eval(x, order);
}

// table[i][k] = L_i(T_k) for k = 0..m.
std::vector<std::vector<double>> functional_table(const ConstrainedExpression& expr, int m) {
  std::vector<std::vector<double>> table(expr.size(), std::vector<double>(m + 1, 0.0));
  for (int i = 0; i < expr.size(); ++i) {
    for (int k = 0; k <= m; ++k) {
      table[i][k] = expr.functionals()[i].apply(
          [k](int order, double x) { return chebyshev_derivative(k, order, x); });
    }
  }
  return table;
}

// Monomial coefficients of T_k - sum_i beta_i L_i(T_k), padded to `length`.
Eigen::VectorXd projected_coefficients(const ConstrainedExpression& expr, int k, int length) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(length);
  const auto t = chebyshev_coefficients(k);
  for (std::size_t e = 0; e < t.size(); ++e) c(e) += t[e];
  for (int i = 0; i < expr.size(); ++i) {
    const double l = expr.functionals()[i].apply(
        [k](int order, double x) { return chebyshev_derivative(k, order, x); });
    const auto& b = expr.betas()[i].coefficients();
    for (std::size_t e = 0; e < b.size(); ++e) c(e) -= b[e] * l;
  }
  return c;
}

int numeric_rank(const Eigen::MatrixXd& a) {
  if (a.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i) r += s(i) > 1e-10 * s(0);
  return r;
}

struct DropInfo {
  std::vector<bool> vanishes;  // projected T_k is the zero polynomial, k < first
};

// Dropping T_0..T_{first-1} must not shrink the span of projected basis
// functions; otherwise the retained columns cannot represent the solution.
DropInfo check_dropped_basis(const ConstrainedExpression& expr, int first) {
  int max_beta = 0;
  for (const auto& b : expr.betas()) max_beta = std::max(max_beta, b.degree());
  const int top = max_beta + first + 1;
  const int length = top + 1;
  Eigen::MatrixXd all(length, top + 1);
  for (int k = 0; k <= top; ++k) all.col(k) = projected_coefficients(expr, k, length);
  const Eigen::MatrixXd kept = all.rightCols(top + 1 - first);
  if (numeric_rank(all) != numeric_rank(kept)) {
    throw InvalidArgument(
        "assemble: constraint embedding does not annihilate the dropped basis "
        "functions; retained basis would lose function space");
  }
  DropInfo info;
  for (int k = 0; k < first; ++k)
    info.vanishes.push_back(all.col(k).cwiseAbs().maxCoeff() <= 1e-12);
  return info;
}

}  // namespace

std::string_view to_string(Scaling s) { return s == Scaling::column_norm ? "column_norm" : "none"; }

Scaling scaling_from_string(std::string_view name) {
  if (name == "column_norm") return Scaling::column_norm;
  if (name == "none") return Scaling::none;
  throw ConfigError("unknown scaling '" + std::string(name) + "'");
}

std::string_view to_string(NodeLayout n) {
  return n == NodeLayout::uniform ? "uniform" : "lobatto";
}

NodeLayout node_layout_from_string(std::string_view name) {
  if (name == "uniform") return NodeLayout::uniform;
  if (name == "lobatto") return NodeLayout::lobatto;
  throw ConfigError("unknown node layout '" + std::string(name) + "'");
}

void CollocationConfig::validate() const {
  if (m < 2) throw ConfigError("m must be >= 2, got " + std::to_string(m));
  if (N < m + 1) {
    throw ConfigError("N must be >= m + 1 (m = " + std::to_string(m) +
                      ", N = " + std::to_string(N) + ")");
  }
  if (weights) {
    if (static_cast<int>(weights->size()) != N) {
      throw ConfigError("weights must have one entry per node");
    }
    for (double w : *weights) {
      if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("weights must be positive");
    }
  }
}

CollocationSystem assemble(const ConstrainedExpression& expr, const MappedODE& ode,
                           const CollocationConfig& cfg) {
  cfg.validate();
  const int m = cfg.m;
  const int first = expr.size();
  if (m < first) {
    throw ConfigError("m must be >= number of constraints");
  }
  const DropInfo drop = check_dropped_basis(expr, first);

  CollocationSystem sys;
  sys.first_index = first;
  sys.nodes = collocation_nodes(cfg.N, cfg.nodes);
  const auto coeffs = ode.coefficients_at(sys.nodes);
  const auto table = functional_table(expr, m);
  const int cols = m - first + 1;
  sys.P.resize(cfg.N, cols);
  sys.lambda.resize(cfg.N);

  std::vector<Jet> beta_jets(expr.size());
  std::vector<double> dropped(first);
  for (int j = 0; j < cfg.N; ++j) {
    const double x = sys.nodes[j];
    const auto& c = coeffs[j];
    const BasisEval basis = eval_basis(m, 2, x);
    for (int i = 0; i < expr.size(); ++i) beta_jets[i] = expr.betas()[i].jet(x);

    double row_norm2 = 0.0;
    for (int k = 0; k <= m; ++k) {
      Jet phi{basis.value(k), basis.deriv(1, k), basis.deriv(2, k)};
      for (int i = 0; i < expr.size(); ++i) {
        phi.value -= beta_jets[i].value * table[i][k];
        phi.d1 -= beta_jets[i].d1 * table[i][k];
        phi.d2 -= beta_jets[i].d2 * table[i][k];
      }
      const double entry = c.a2 * phi.d2 + c.a1 * phi.d1 + c.a0 * phi.value;
      row_norm2 += entry * entry;
      if (k >= first) {
        sys.P(j, k - first) = entry;
      } else {
        dropped[k] = entry;
      }
    }
    for (int k = 0; k < first; ++k) {
      if (drop.vanishes[k] && std::abs(dropped[k]) > 1e-12 * std::sqrt(row_norm2)) {
        throw Error("AssemblyGuard", "assemble: dropped column " + std::to_string(k) +
                                         " is not numerically zero at node " + std::to_string(j));
      }
    }

    const Jet s = expr.constraint_part(x);
    sys.lambda(j) = c.rhs - (c.a2 * s.d2 + c.a1 * s.d1 + c.a0 * s.value);
  }
  return sys;
}

CollocationSystem assemble(ConstraintCase c, std::span<const double> values_x, const MappedODE& ode,
                           const CollocationConfig& cfg) {
  return assemble(fixed_case_expression(c, values_x), ode, cfg);
}

LeastSquaresFit solve_ls(const Eigen::MatrixXd& P, const Eigen::VectorXd& lambda,
                         const CollocationConfig& cfg) {
  const Eigen::Index rows = P.rows();
  const Eigen::Index cols = P.cols();
  if (lambda.size() != rows) throw InvalidArgument("solve_ls: lambda size mismatch");
  if (cols == 0 || rows < cols) {
    throw InvalidArgument("solve_ls: need at least as many rows as columns");
  }

  Eigen::MatrixXd a = P;
  Eigen::VectorXd b = lambda;
  if (cfg.weights) {
    if (static_cast<Eigen::Index>(cfg.weights->size()) != rows) {
      throw ConfigError("solve_ls: weights must have one entry per row");
    }
    for (Eigen::Index j = 0; j < rows; ++j) {
      const double w = (*cfg.weights)[j];
      if (!(w > 0.0)) throw ConfigError("solve_ls: weights must be positive");
      const double sw = std::sqrt(w);
      a.row(j) *= sw;
      b(j) *= sw;
    }
  }

  Eigen::VectorXd scale = Eigen::VectorXd::Ones(cols);
  if (cfg.scaling == Scaling::column_norm) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double n = a.col(c).norm();
      if (n > 0.0) scale(c) = n;
    }
    a = a * scale.cwiseInverse().asDiagonal();
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::VectorXd z = qr.solve(b);

  LeastSquaresFit fit;
  fit.xi = z.cwiseQuotient(scale);

  // R carries the singular values of the scaled matrix.
  const Eigen::MatrixXd r =
      qr.matrixR().topLeftCorner(cols, cols).template triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
  const auto& s = svd.singularValues();
  fit.sigma_max = s(0);
  fit.sigma_min = s(s.size() - 1);
  fit.cond_PtP = fit.sigma_min > 0.0
                     ? (fit.sigma_max / fit.sigma_min) * (fit.sigma_max / fit.sigma_min)
                     : std::numeric_limits<double>::infinity();
  fit.rank_deficient = !(fit.sigma_min >= kRankDeficientThreshold * fit.sigma_max);

  fit.residuals = P * fit.xi - lambda;
  const double n = static_cast<double>(rows);
  fit.residual_mean = fit.residuals.mean();
  fit.residual_abs_mean = fit.residuals.cwiseAbs().sum() / n;
  fit.residual_std = std::sqrt((fit.residuals.array() - fit.residual_mean).square().sum() / n);
  return fit;
}

Solution::Solution(DomainMap map, ConstrainedExpression expr, Eigen::VectorXd xi, int first_index)
    : map_(map), expr_(std::move(expr)), xi_(std::move(xi)), first_index_(first_index) {
  const auto table = functional_table(expr_, m());
  g_functionals_.assign(expr_.size(), 0.0);
  for (int i = 0; i < expr_.size(); ++i) {
    for (Eigen::Index c = 0; c < xi_.size(); ++c) {
      g_functionals_[i] += xi_(c) * table[i][first_index_ + c];
    }
  }
}

Jet Solution::at_x(double x) const {
  const int top = std::max(m(), 1);
  const BasisEval basis = eval_basis(top, 2, x);
  Jet g;
  for (Eigen::Index c = 0; c < xi_.size(); ++c) {
    const int k = first_index_ + static_cast<int>(c);
    g.value += xi_(c) * basis.value(k);
    g.d1 += xi_(c) * basis.deriv(1, k);
    g.d2 += xi_(c) * basis.deriv(2, k);
  }
  return expr_.evaluate(x, g, g_functionals_);
}

Jet Solution::at(double t) const {
  Jet y = at_x(map_.to_x(t));
  y.d1 *= map_.t_derivative_factor(1);
  y.d2 *= map_.t_derivative_factor(2);
  return y;
}

ConstraintCase case_for(const DomainMap& map, std::span<const PointConstraint> constraints) {
  if (constraints.size() != 2) {
    throw UnknownCase("a second-order problem needs exactly 2 constraints, got " +
                      std::to_string(constraints.size()));
  }
  auto endpoint = [&](double t) {
    const double x = map.to_x(t);
    if (std::abs(x + 1.0) <= 1e-12) return -1.0;
    if (std::abs(x - 1.0) <= 1e-12) return 1.0;
    throw UnknownCase("constraint location t = " + std::to_string(t) +
                      " is not an interval endpoint");
  };
  const auto c = identify_case(constraints[0].order, endpoint(constraints[0].t),
                               constraints[1].order, endpoint(constraints[1].t));
  if (!c) throw UnknownCase("unsupported constraint combination");
  return *c;
}

std::vector<double> case_values_x(ConstraintCase c, const DomainMap& map,
                                  std::span<const PointConstraint> constraints) {
  const auto slots = case_slots(c);
  std::vector<double> out;
  for (const auto& slot : slots) {
    bool found = false;
    for (const auto& pc : constraints) {
      if (pc.order == slot.order && std::abs(map.to_x(pc.t) - slot.location) <= 1e-12) {
        out.push_back(map.scale_derivative_constraint(pc.order, pc.value));
        found = true;
        break;
      }
    }
    if (!found)
      throw UnknownCase("constraint set does not match case " + std::string(to_string(c)));
  }
  return out;
}

LSSolution solve_problem(const MappedODE& ode, ConstraintCase c, std::span<const double> values_x,
                         const CollocationConfig& cfg) {
  auto expr = fixed_case_expression(c, values_x);
  const CollocationSystem sys = assemble(expr, ode, cfg);
  LeastSquaresFit fit = solve_ls(sys.P, sys.lambda, cfg);
  Solution sol(ode.map(), std::move(expr), fit.xi, sys.first_index);
  return LSSolution{c, std::move(fit), std::move(sol)};
}

LSSolution solve_problem(const LinearODE2& ode, std::span<const PointConstraint> constraints,
                         const CollocationConfig& cfg) {
  const MappedODE mapped(ode);
  const ConstraintCase c = case_for(mapped.map(), constraints);
  const auto values = case_values_x(c, mapped.map(), constraints);
  return solve_problem(mapped, c, values, cfg);
}

SolveReport m_sweep(const LinearODE2& ode, std::span<const PointConstraint> constraints, int m_min,
                    int m_max, const CollocationConfig& base,
                    const ClassifyThresholds& thresholds) {
  if (m_max < m_min) throw ConfigError("m_sweep: empty m range");
  const MappedODE mapped(ode);
  const ConstraintCase c = case_for(mapped.map(), constraints);
  const auto values = case_values_x(c, mapped.map(), constraints);
  const auto expr = fixed_case_expression(c, values);

  SolveReport report;
  for (int m = m_min; m <= m_max; ++m) {
    SweepRow row;
    row.m = m;
    try {
      CollocationConfig cfg = base;
      cfg.m = m;
      const auto sys = assemble(expr, mapped, cfg);
      const auto fit = solve_ls(sys.P, sys.lambda, cfg);
      row.residual_mean = fit.residual_mean;
      row.residual_abs_mean = fit.residual_abs_mean;
      row.residual_std = fit.residual_std;
      row.cond_PtP = fit.cond_PtP;
      row.rank_deficient = fit.rank_deficient;
    } catch (const Error& e) {
      row.error = e.code() + ": " + e.what();
    }
    report.per_m.push_back(std::move(row));
  }
  const int best = best_row(report.per_m);
  report.best_m = best >= 0 ? report.per_m[best].m : 0;
  report.classification = classify(report.per_m, thresholds);
  return report;
}

}  // namespace tfc
