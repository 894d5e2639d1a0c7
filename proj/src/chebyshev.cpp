#include "tfc/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tfc/error.hpp"

namespace tfc {

BasisEval eval_basis(int m_max, int d_max, double x) {
  if (m_max < 1) throw InvalidArgument("eval_basis: m_max must be >= 1");
  if (d_max < 0) throw InvalidArgument("eval_basis: d_max must be >= 0");
  if (!std::isfinite(x)) throw DomainError("eval_basis: x is not finite");
  if (std::abs(x) > 1.0 + kEndpointTolerance) {
    throw DomainError("eval_basis: x = " + std::to_string(x) + " outside [-1, 1]");
  }
  x = std::clamp(x, -1.0, 1.0);

  BasisEval out;
  out.m_max = m_max;
  out.d_max = d_max;
  out.x = x;
  out.table.assign(d_max + 1, std::vector<double>(m_max + 1, 0.0));

  auto& t = out.table[0];
  t[0] = 1.0;
  t[1] = x;
  for (int k = 1; k < m_max; ++k) t[k + 1] = 2.0 * x * t[k] - t[k - 1];

  for (int d = 1; d <= d_max; ++d) {
    const auto& lower = out.table[d - 1];
    auto& cur = out.table[d];
    // T_0 is constant; T_1 = x has unit slope and no higher derivatives.
    cur[0] = 0.0;
    cur[1] = (d == 1) ? 1.0 : 0.0;
    for (int k = 1; k < m_max; ++k) {
      cur[k + 1] = 2.0 * d * lower[k] + 2.0 * x * cur[k] - cur[k - 1];
    }
  }
  return out;
}

EndpointValues endpoint_values(int k, int endpoint) {
  if (k < 0) throw InvalidArgument("endpoint_values: k must be >= 0");
  if (endpoint != -1 && endpoint != 1) {
    throw InvalidArgument("endpoint_values: endpoint must be -1 or +1");
  }
  const double k2 = static_cast<double>(k) * k;
  const double second = k2 * (k2 - 1.0) / 3.0;
  if (endpoint == 1) return {1.0, k2, second};
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return {sign, -sign * k2, sign * second};
}

}  // namespace tfc
