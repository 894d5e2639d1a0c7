#pragma once

#include <vector>

namespace tfc {

/// Affine map between physical time t in [t1, t2] and the Chebyshev variable
/// x in [-1, 1].
class DomainMap {
 public:
  /// Throws InvalidArgument unless t2 > t1 and both are finite.
  DomainMap(double t1, double t2);

  double t1() const { return t1_; }
  double t2() const { return t2_; }
  double delta_t() const { return delta_t_; }

  double to_x(double t) const { return 2.0 * (t - t1_) / delta_t_ - 1.0; }
  double to_t(double x) const { return t1_ + (x + 1.0) * delta_t_ / 2.0; }

  /// Converts a derivative constraint value from t to x units:
  /// order 0 is unchanged, order 1 scales by dt/2, order 2 by dt^2/4.
  double scale_derivative_constraint(int order, double value_t) const;

  /// d^order y/dt^order = factor * d^order y/dx^order, factor = (2/dt)^order.
  double t_derivative_factor(int order) const;

 private:
  double t1_;
  double t2_;
  double delta_t_;
};

enum class NodeLayout { uniform, lobatto };

/// N collocation nodes on [-1, 1], both endpoints included, in increasing
/// order. Lobatto nodes are -cos(pi j / (N - 1)).
std::vector<double> collocation_nodes(int count, NodeLayout layout);

}  // namespace tfc
