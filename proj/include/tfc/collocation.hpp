#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tfc/constraint_embedding.hpp"
#include "tfc/diagnostics.hpp"
#include "tfc/domain_map.hpp"
#include "tfc/ode_problem.hpp"

namespace tfc {

enum class Scaling { column_norm, none };

std::string_view to_string(Scaling s);
Scaling scaling_from_string(std::string_view name);
std::string_view to_string(NodeLayout n);
NodeLayout node_layout_from_string(std::string_view name);

struct CollocationConfig {
  int m = 17;                                  // highest Chebyshev index
  int N = 1000;                                // collocation node count, N >= m + 1
  std::optional<std::vector<double>> weights;  // one positive weight per node
  Scaling scaling = Scaling::column_norm;
  NodeLayout nodes = NodeLayout::uniform;

  /// Throws ConfigError.
  void validate() const;
};

/// Overdetermined system P xi = lambda. Column c corresponds to T_{first_index + c}.
struct CollocationSystem {
  Eigen::MatrixXd P;
  Eigen::VectorXd lambda;
  std::vector<double> nodes;
  int first_index = 2;
};

/// Rows of the ODE residual of y = expr(g), g = sum_k xi_k T_k, at each node.
/// Basis indices below expr.size() are dropped; assembly checks that the
/// dropped functions add nothing to the span of the retained ones.
CollocationSystem assemble(const ConstrainedExpression& expr, const MappedODE& ode,
                           const CollocationConfig& cfg);
CollocationSystem assemble(ConstraintCase c, std::span<const double> values_x, const MappedODE& ode,
                           const CollocationConfig& cfg);

struct LeastSquaresFit {
  Eigen::VectorXd xi;
  Eigen::VectorXd residuals;  // P xi - lambda, unweighted
  double residual_mean = 0.0;
  double residual_abs_mean = 0.0;
  double residual_std = 0.0;
  double cond_PtP = 0.0;  // (sigma_max / sigma_min)^2 of the scaled, weighted P
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  bool rank_deficient = false;  // sigma_min < 1e-13 sigma_max
};

inline constexpr double kRankDeficientThreshold = 1e-13;

/// Minimizes || W^1/2 (P xi - lambda) || with column-pivoted Householder QR of
/// the (optionally column-normalized) matrix. Only cfg.weights and
/// cfg.scaling are used.
LeastSquaresFit solve_ls(const Eigen::MatrixXd& P, const Eigen::VectorXd& lambda,
                         const CollocationConfig& cfg);

/// The solved function y(x) = expr(g) with g = sum_k xi_k T_k.
class Solution {
 public:
  Solution(DomainMap map, ConstrainedExpression expr, Eigen::VectorXd xi, int first_index);

  /// y and its x-derivatives.
  Jet at_x(double x) const;
  /// y and its t-derivatives.
  Jet at(double t) const;

  const DomainMap& map() const { return map_; }
  const ConstrainedExpression& expression() const { return expr_; }
  int first_index() const { return first_index_; }
  int m() const { return first_index_ + static_cast<int>(xi_.size()) - 1; }

 private:
  DomainMap map_;
  ConstrainedExpression expr_;
  Eigen::VectorXd xi_;
  int first_index_;
  std::vector<double> g_functionals_;
};

/// A constraint in t-domain units: y^(order)(t) = value.
struct PointConstraint {
  int order = 0;
  double t = 0.0;
  double value = 0.0;
};

struct LSSolution {
  ConstraintCase case_id;
  LeastSquaresFit fit;
  Solution solution;
};

/// Identifies the fixed case of two t-domain constraints placed at t1 / t2.
/// Throws UnknownCase.
ConstraintCase case_for(const DomainMap& map, std::span<const PointConstraint> constraints);

/// x-domain constraint values ordered as case_slots(c).
std::vector<double> case_values_x(ConstraintCase c, const DomainMap& map,
                                  std::span<const PointConstraint> constraints);

LSSolution solve_problem(const LinearODE2& ode, std::span<const PointConstraint> constraints,
                         const CollocationConfig& cfg);
LSSolution solve_problem(const MappedODE& ode, ConstraintCase c, std::span<const double> values_x,
                         const CollocationConfig& cfg);

/// Solves for every m in [m_min, m_max]; per-m failures are recorded in the
/// row and the sweep continues. Classification uses default thresholds.
SolveReport m_sweep(const LinearODE2& ode, std::span<const PointConstraint> constraints, int m_min,
                    int m_max, const CollocationConfig& base,
                    const ClassifyThresholds& thresholds = {});

}  // namespace tfc
