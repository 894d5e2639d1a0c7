#pragma once

#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tfc/collocation.hpp"
#include "tfc/domain_map.hpp"

namespace tfc {

using Matrix2Function = std::function<Eigen::Matrix2d(double t)>;

/// d/dt {x, lambda} = [A11 A12; A21 A22] {x, lambda} with x(t0) = x0 and
/// lambda(tf) = lambda_f. The state is a position/velocity pair x = {x, x'}.
struct StateCostateProblem {
  Matrix2Function A11;
  Matrix2Function A12;
  Matrix2Function A21;
  Matrix2Function A22;
  Eigen::Vector2d x0 = Eigen::Vector2d::Zero();
  Eigen::Vector2d lambda_f = Eigen::Vector2d::Zero();
  double t0 = 0.0;
  double tf = 1.0;
};

/// Collocated block system M {alpha, beta, gamma} = rhs. Rows come in groups
/// of four per node (two state rows, then two costate rows). Columns hold
/// alpha, beta, gamma for Chebyshev indices first_index..m in that order.
struct BlockLSSystem {
  Eigen::MatrixXd M;
  Eigen::VectorXd rhs;
  std::vector<double> nodes;
  int first_index = 1;
  int per_block = 0;
};

BlockLSSystem assemble_state_costate(const StateCostateProblem& p, const CollocationConfig& cfg);

/// x(t) = x0 + [h - h0; h' - h0'] alpha,
/// lambda(t) = lambda_f + [beta^T (h - hf); gamma^T (h - hf)].
class StateCostateSolution {
 public:
  StateCostateSolution(DomainMap map, Eigen::Vector2d x0, Eigen::Vector2d lambda_f,
                       Eigen::VectorXd alpha, Eigen::VectorXd beta, Eigen::VectorXd gamma,
                       int first_index);

  Eigen::Vector2d state(double t) const;
  Eigen::Vector2d costate(double t) const;
  Eigen::Vector2d state_rate(double t) const;
  Eigen::Vector2d costate_rate(double t) const;

  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  const Eigen::VectorXd& gamma() const { return gamma_; }

 private:
  struct BasisRow {
    Eigen::VectorXd h, hd, hdd;  // indices first_index..m, t-derivatives
  };
  BasisRow basis(double t) const;

  DomainMap map_;
  Eigen::Vector2d x0_;
  Eigen::Vector2d lambda_f_;
  Eigen::VectorXd alpha_, beta_, gamma_;
  int first_index_;
  BasisRow at_t0_;
  BasisRow at_tf_;
};

struct StateCostateResult {
  LeastSquaresFit fit;
  StateCostateSolution solution;
  std::vector<int> dropped_columns;  // numerically zero columns removed from M
};

/// Throws ConfigError on bad config; rank deficiency is reported in fit.
StateCostateResult solve_state_costate(const StateCostateProblem& p, const CollocationConfig& cfg);

/// max over nodes of |x' - A11 x - A12 lambda| and |lambda' - A21 x - A22 lambda|.
double max_dynamics_residual(const StateCostateProblem& p, const StateCostateSolution& s,
                             std::span<const double> t_points);

enum class EmbeddingPattern {
  state_initial_costate_final,  // x(t0) = x0, lambda(tf) = lambda_f
  state_ic_pair,                // x(t0) = x0, x'(t0) = x0'
  terminal_transversality,      // x(t0) = x0, lambda(tf) = x(tf)
};

std::string_view to_string(EmbeddingPattern p);
/// Throws UnknownCase.
EmbeddingPattern embedding_pattern_from_string(std::string_view name);

/// Free vector function g(order, t) returning the order-th t-derivative.
using VectorFreeFunction = std::function<Eigen::Vector2d(int order, double t)>;

/// Constrained-expression pair for the state and costate.
class StateCostateEmbedding {
 public:
  /// `second` is lambda_f for state_initial_costate_final, x0' for
  /// state_ic_pair and unused for terminal_transversality.
  StateCostateEmbedding(EmbeddingPattern pattern, double t0, double tf, Eigen::Vector2d x0,
                        Eigen::Vector2d second = Eigen::Vector2d::Zero());

  EmbeddingPattern pattern() const { return pattern_; }

  /// {x(t), lambda(t)} for the given free functions.
  std::pair<Eigen::Vector2d, Eigen::Vector2d> evaluate(double t, const VectorFreeFunction& g_x,
                                                       const VectorFreeFunction& g_lambda) const;
  /// First t-derivatives of {x, lambda}.
  std::pair<Eigen::Vector2d, Eigen::Vector2d> evaluate_rate(
      double t, const VectorFreeFunction& g_x, const VectorFreeFunction& g_lambda) const;

 private:
  EmbeddingPattern pattern_;
  double t0_, tf_;
  Eigen::Vector2d x0_, second_;
};

StateCostateEmbedding alternative_embeddings(
    EmbeddingPattern pattern, double t0, double tf, const Eigen::Vector2d& x0,
    const Eigen::Vector2d& second = Eigen::Vector2d::Zero());

}  // namespace tfc
