#include "tfc/domain_map.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tfc/error.hpp"

namespace tfc {

DomainMap::DomainMap(double t1, double t2) : t1_(t1), t2_(t2), delta_t_(t2 - t1) {
  if (!std::isfinite(t1) || !std::isfinite(t2)) {
    throw InvalidArgument("DomainMap: interval bounds must be finite");
  }
  if (!(delta_t_ > 0.0)) {
    throw InvalidArgument("DomainMap: t2 must be greater than t1");
  }
}

double DomainMap::scale_derivative_constraint(int order, double value_t) const {
  switch (order) {
    case 0: return value_t;
    case 1: return value_t * delta_t_ / 2.0;
    case 2: return value_t * delta_t_ * delta_t_ / 4.0;
    default:
      throw InvalidArgument("scale_derivative_constraint: order " + std::to_string(order) +
                            " not supported (max 2)");
  }
}

double DomainMap::t_derivative_factor(int order) const {
  if (order < 0) throw InvalidArgument("t_derivative_factor: negative order");
  return std::pow(2.0 / delta_t_, order);
}

std::vector<double> collocation_nodes(int count, NodeLayout layout) {
  if (count < 2) throw InvalidArgument("collocation_nodes: need at least 2 nodes");
  std::vector<double> nodes(count);
  const double last = static_cast<double>(count - 1);
  for (int j = 0; j < count; ++j) {
    if (layout == NodeLayout::uniform) {
      nodes[j] = -1.0 + 2.0 * j / last;
    } else {
      nodes[j] = -std::cos(std::numbers::pi * j / last);
    }
  }
  nodes.front() = -1.0;
  nodes.back() = 1.0;
  return nodes;
}

}  // namespace tfc
