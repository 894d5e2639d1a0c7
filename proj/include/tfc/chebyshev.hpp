#pragma once

#include <vector>

namespace tfc {

/// Chebyshev polynomials of the first kind and their x-derivatives at a single
/// point. `table[d][k]` holds d^d T_k / dx^d for d = 0..d_max, k = 0..m_max.
struct BasisEval {
  int m_max = 0;
  int d_max = 0;
  double x = 0.0;
  std::vector<std::vector<double>> table;

  const std::vector<double>& values() const { return table[0]; }
  double value(int k) const { return table[0][k]; }
  double deriv(int d, int k) const { return table[d][k]; }
};

/// Points within this distance outside [-1, 1] are treated as endpoints.
inline constexpr double kEndpointTolerance = 1e-12;

/// Evaluates T_0..T_m_max and derivatives up to order d_max at x using the
/// three-term recurrence and its differentiated form
///   T^(d)_{k+1} = 2d T^(d-1)_k + 2x T^(d)_k - T^(d)_{k-1}.
/// Throws DomainError when |x| > 1 + kEndpointTolerance.
BasisEval eval_basis(int m_max, int d_max, double x);

struct EndpointValues {
  double value;
  double d1;
  double d2;
};

/// Closed-form T_k, T_k', T_k'' at x = -1 or x = +1.
EndpointValues endpoint_values(int k, int endpoint);

}  // namespace tfc
