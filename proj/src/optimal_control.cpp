#include "tfc/optimal_control.hpp"

#include <cmath>
#include <string>

#include "tfc/chebyshev.hpp"
#include "tfc/error.hpp"

namespace tfc {

namespace {

struct TimeBasis {
  Eigen::VectorXd h, hd, hdd;
};

// h_k(t) = T_k(x(t)) and its t-derivatives for k = first..m.
TimeBasis time_basis(const DomainMap& map, int m, int first, double t) {
  const BasisEval b = eval_basis(m, 2, map.to_x(t));
  const int count = m - first + 1;
  const double s1 = map.t_derivative_factor(1);
  const double s2 = map.t_derivative_factor(2);
  TimeBasis out{Eigen::VectorXd(count), Eigen::VectorXd(count), Eigen::VectorXd(count)};
  for (int c = 0; c < count; ++c) {
    out.h(c) = b.value(first + c);
    out.hd(c) = s1 * b.deriv(1, first + c);
    out.hdd(c) = s2 * b.deriv(2, first + c);
  }
  return out;
}

void check_finite(const Eigen::Matrix2d& a, std::size_t node, const char* name) {
  if (!a.allFinite()) {
    throw NodeSingularity(node,
                          std::string("non-finite ") + name + " at node " + std::to_string(node));
  }
}

}  // namespace

BlockLSSystem assemble_state_costate(const StateCostateProblem& p, const CollocationConfig& cfg) {
  cfg.validate();
  if (!p.A11 || !p.A12 || !p.A21 || !p.A22) {
    throw InvalidArgument("assemble_state_costate: all four blocks are required");
  }
  const DomainMap map(p.t0, p.tf);
  const int first = 1;  // the constant is annihilated by h - h0 and h - hf
  const int pb = cfg.m - first + 1;

  BlockLSSystem sys;
  sys.first_index = first;
  sys.per_block = pb;
  sys.nodes = collocation_nodes(cfg.N, cfg.nodes);
  sys.M = Eigen::MatrixXd::Zero(4 * cfg.N, 3 * pb);
  sys.rhs.resize(4 * cfg.N);

  const TimeBasis b0 = time_basis(map, cfg.m, first, p.t0);
  const TimeBasis bf = time_basis(map, cfg.m, first, p.tf);

  for (int j = 0; j < cfg.N; ++j) {
    const double t = map.to_t(sys.nodes[j]);
    const Eigen::Matrix2d a11 = p.A11(t), a12 = p.A12(t), a21 = p.A21(t), a22 = p.A22(t);
    check_finite(a11, j, "A11");
    check_finite(a12, j, "A12");
    check_finite(a21, j, "A21");
    check_finite(a22, j, "A22");
    const TimeBasis b = time_basis(map, cfg.m, first, t);

    // Per-column state perturbation [h - h0; h' - h0'] and its rate [h'; h''].
    Eigen::MatrixXd state_shape(2, pb), state_rate(2, pb);
    state_shape.row(0) = (b.h - b0.h).transpose();
    state_shape.row(1) = (b.hd - b0.hd).transpose();
    state_rate.row(0) = b.hd.transpose();
    state_rate.row(1) = b.hdd.transpose();
    const Eigen::RowVectorXd costate_shape = (b.h - bf.h).transpose();
    const Eigen::RowVectorXd costate_rate = b.hd.transpose();

    const int r = 4 * j;
    // State rows.
    sys.M.block(r, 0, 2, pb) = state_rate - a11 * state_shape;
    sys.M.block(r, pb, 2, pb) = -a12.col(0) * costate_shape;
    sys.M.block(r, 2 * pb, 2, pb) = -a12.col(1) * costate_shape;
    sys.rhs.segment<2>(r) = a11 * p.x0 + a12 * p.lambda_f;
    // Costate rows.
    sys.M.block(r + 2, 0, 2, pb) = -a21 * state_shape;
    sys.M.block(r + 2, pb, 2, pb) = -a22.col(0) * costate_shape;
    sys.M.block(r + 2, 2 * pb, 2, pb) = -a22.col(1) * costate_shape;
    sys.M.block(r + 2, pb, 1, pb) += costate_rate;
    sys.M.block(r + 3, 2 * pb, 1, pb) += costate_rate;
    sys.rhs.segment<2>(r + 2) = a21 * p.x0 + a22 * p.lambda_f;
  }
  return sys;
}

StateCostateSolution::StateCostateSolution(DomainMap map, Eigen::Vector2d x0,
                                           Eigen::Vector2d lambda_f, Eigen::VectorXd alpha,
                                           Eigen::VectorXd beta, Eigen::VectorXd gamma,
                                           int first_index)
    : map_(map),
      x0_(std::move(x0)),
      lambda_f_(std::move(lambda_f)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      gamma_(std::move(gamma)),
      first_index_(first_index) {
  at_t0_ = basis(map_.t1());
  at_tf_ = basis(map_.t2());
}

StateCostateSolution::BasisRow StateCostateSolution::basis(double t) const {
  const int m = first_index_ + static_cast<int>(alpha_.size()) - 1;
  const TimeBasis b = time_basis(map_, m, first_index_, t);
  return {b.h, b.hd, b.hdd};
}

Eigen::Vector2d StateCostateSolution::state(double t) const {
  const BasisRow b = basis(t);
  return x0_ + Eigen::Vector2d((b.h - at_t0_.h).dot(alpha_), (b.hd - at_t0_.hd).dot(alpha_));
}

Eigen::Vector2d StateCostateSolution::costate(double t) const {
  const BasisRow b = basis(t);
  const Eigen::VectorXd d = b.h - at_tf_.h;
  return lambda_f_ + Eigen::Vector2d(d.dot(beta_), d.dot(gamma_));
}

Eigen::Vector2d StateCostateSolution::state_rate(double t) const {
  const BasisRow b = basis(t);
  return {b.hd.dot(alpha_), b.hdd.dot(alpha_)};
}

Eigen::Vector2d StateCostateSolution::costate_rate(double t) const {
  const BasisRow b = basis(t);
  return {b.hd.dot(beta_), b.hd.dot(gamma_)};
}

StateCostateResult solve_state_costate(const StateCostateProblem& p, const CollocationConfig& cfg) {
  const BlockLSSystem sys = assemble_state_costate(p, cfg);
  const Eigen::Index cols = sys.M.cols();

  // Zero-column guard: drop columns the embedding annihilates entirely.
  double max_norm = 0.0;
  for (Eigen::Index c = 0; c < cols; ++c) max_norm = std::max(max_norm, sys.M.col(c).norm());
  std::vector<int> kept, dropped;
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (sys.M.col(c).norm() <= 1e-12 * max_norm) {
      dropped.push_back(static_cast<int>(c));
    } else {
      kept.push_back(static_cast<int>(c));
    }
  }
  Eigen::MatrixXd reduced(sys.M.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) reduced.col(i) = sys.M.col(kept[i]);

  CollocationConfig ls_cfg = cfg;
  if (cfg.weights) {
    std::vector<double> expanded;
    expanded.reserve(4 * cfg.weights->size());
    for (double w : *cfg.weights) expanded.insert(expanded.end(), 4, w);
    ls_cfg.weights = std::move(expanded);
  }
  LeastSquaresFit fit = solve_ls(reduced, sys.rhs, ls_cfg);

  Eigen::VectorXd full = Eigen::VectorXd::Zero(cols);
  for (std::size_t i = 0; i < kept.size(); ++i) full(kept[i]) = fit.xi(i);
  fit.xi = full;

  const int pb = sys.per_block;
  StateCostateSolution sol(DomainMap(p.t0, p.tf), p.x0, p.lambda_f, full.segment(0, pb),
                           full.segment(pb, pb), full.segment(2 * pb, pb), sys.first_index);
  return StateCostateResult{std::move(fit), std::move(sol), std::move(dropped)};
}

double max_dynamics_residual(const StateCostateProblem& p, const StateCostateSolution& s,
                             std::span<const double> t_points) {
  double worst = 0.0;
  for (double t : t_points) {
    const Eigen::Vector2d x = s.state(t), l = s.costate(t);
    const Eigen::Vector2d rx = s.state_rate(t) - p.A11(t) * x - p.A12(t) * l;
    const Eigen::Vector2d rl = s.costate_rate(t) - p.A21(t) * x - p.A22(t) * l;
    worst = std::max({worst, rx.cwiseAbs().maxCoeff(), rl.cwiseAbs().maxCoeff()});
  }
  return worst;
}

std::string_view to_string(EmbeddingPattern p) {
  switch (p) {
    case EmbeddingPattern::state_initial_costate_final: return "state_initial_costate_final";
    case EmbeddingPattern::state_ic_pair: return "state_ic_pair";
    case EmbeddingPattern::terminal_transversality: return "terminal_transversality";
  }
  return "unknown";
}

EmbeddingPattern embedding_pattern_from_string(std::string_view name) {
  for (auto p : {EmbeddingPattern::state_initial_costate_final, EmbeddingPattern::state_ic_pair,
                 EmbeddingPattern::terminal_transversality}) {
    if (to_string(p) == name) return p;
  }
  throw UnknownCase("unknown embedding pattern '" + std::string(name) + "'");
}

StateCostateEmbedding::StateCostateEmbedding(EmbeddingPattern pattern, double t0, double tf,
                                             Eigen::Vector2d x0, Eigen::Vector2d second)
    : pattern_(pattern), t0_(t0), tf_(tf), x0_(std::move(x0)), second_(std::move(second)) {
  if (!(tf > t0)) throw InvalidArgument("StateCostateEmbedding: tf must exceed t0");
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> StateCostateEmbedding::evaluate(
    double t, const VectorFreeFunction& g_x, const VectorFreeFunction& g_lambda) const {
  const Eigen::Vector2d gx = g_x(0, t), gl = g_lambda(0, t);
  const Eigen::Vector2d gx0 = g_x(0, t0_);
  switch (pattern_) {
    case EmbeddingPattern::state_initial_costate_final:
      return {gx + (x0_ - gx0), gl + (second_ - g_lambda(0, tf_))};
    case EmbeddingPattern::state_ic_pair:
      return {gx + (x0_ - gx0) + (t - t0_) * (second_ - g_x(1, t0_)), gl};
    case EmbeddingPattern::terminal_transversality:
      return {gx + (x0_ - gx0), gl + (g_x(0, tf_) + x0_ - gx0 - g_lambda(0, tf_))};
  }
  throw UnknownCase("StateCostateEmbedding: unknown pattern");
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> StateCostateEmbedding::evaluate_rate(
    double t, const VectorFreeFunction& g_x, const VectorFreeFunction& g_lambda) const {
  const Eigen::Vector2d dgx = g_x(1, t), dgl = g_lambda(1, t);
  if (pattern_ == EmbeddingPattern::state_ic_pair) {
    return {dgx + (second_ - g_x(1, t0_)), dgl};
  }
  return {dgx, dgl};
}

StateCostateEmbedding alternative_embeddings(EmbeddingPattern pattern, double t0, double tf,
                                             const Eigen::Vector2d& x0,
                                             const Eigen::Vector2d& second) {
  return StateCostateEmbedding(pattern, t0, tf, x0, second);
}

}  // namespace tfc
