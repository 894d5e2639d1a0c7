#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tfc/constraint_embedding.hpp"
#include "tfc/domain_map.hpp"

namespace tfc {

using ScalarFunction = std::function<double(double)>;

/// f2(t) y'' + f1(t) y' + f0(t) y = f(t) on [t1, t2].
struct LinearODE2 {
  ScalarFunction f2;
  ScalarFunction f1;
  ScalarFunction f0;
  ScalarFunction f;
  double t1 = 0.0;
  double t2 = 1.0;
};

/// Coefficients of the ODE rewritten in x: a2 y_xx + a1 y_x + a0 y = rhs,
/// with a2 = 4 f2 / dt^2, a1 = 2 f1 / dt, a0 = f0.
struct MappedCoefficients {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
  double rhs = 0.0;

  bool finite() const;
};

class MappedODE {
 public:
  explicit MappedODE(LinearODE2 ode);

  const DomainMap& map() const { return map_; }
  const LinearODE2& ode() const { return ode_; }

  /// Coefficients at x, evaluated at t = map().to_t(x). Not checked.
  MappedCoefficients coefficients(double x) const;

  /// Coefficients at every node; throws NodeSingularity on the first
  /// non-finite value.
  std::vector<MappedCoefficients> coefficients_at(std::span<const double> nodes) const;

  /// a2 y'' + a1 y' + a0 y - rhs with x-derivatives in `y`.
  double residual(double x, const Jet& y) const;

 private:
  LinearODE2 ode_;
  DomainMap map_;
};

MappedODE map_ode(const LinearODE2& ode);

/// Residual of the original ODE in t with t-derivatives in `y`.
double residual_t(const LinearODE2& ode, double t, const Jet& y);

enum class InitialQuantity { y, dy, ddy };

/// Initial data at x = -1 in x-domain units; exactly two must be set.
struct InitialValues {
  std::optional<double> y;
  std::optional<double> dy;
  std::optional<double> ddy;
};

struct ImpliedValue {
  InitialQuantity which;
  double value;
};

/// Solves the mapped ODE at x = -1 for the missing initial quantity.
/// Throws DivisorZero when the coefficient multiplying it vanishes at t1.
ImpliedValue implied_initial_value(const MappedODE& ode, const InitialValues& known);

}  // namespace tfc
