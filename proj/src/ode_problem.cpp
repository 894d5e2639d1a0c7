#include "tfc/ode_problem.hpp"

#include <cmath>
#include <string>

#include "tfc/error.hpp"

namespace tfc {

bool MappedCoefficients::finite() const {
  return std::isfinite(a2) && std::isfinite(a1) && std::isfinite(a0) && std::isfinite(rhs);
}

MappedODE::MappedODE(LinearODE2 ode) : ode_(std::move(ode)), map_(ode_.t1, ode_.t2) {
  if (!ode_.f2 || !ode_.f1 || !ode_.f0 || !ode_.f) {
    throw InvalidArgument("MappedODE: all four coefficient functions are required");
  }
}

MappedCoefficients MappedODE::coefficients(double x) const {
  const double t = map_.to_t(x);
  const double dt = map_.delta_t();
  return {4.0 / (dt * dt) * ode_.f2(t), 2.0 / dt * ode_.f1(t), ode_.f0(t), ode_.f(t)};
}

std::vector<MappedCoefficients> MappedODE::coefficients_at(std::span<const double> nodes) const {
  std::vector<MappedCoefficients> out;
  out.reserve(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    auto c = coefficients(nodes[j]);
    if (!c.finite()) {
      throw NodeSingularity(j, "non-finite ODE coefficient at node " + std::to_string(j) +
                                   " (t = " + std::to_string(map_.to_t(nodes[j])) + ")");
    }
    out.push_back(c);
  }
  return out;
}

double MappedODE::residual(double x, const Jet& y) const {
  const auto c = coefficients(x);
  return c.a2 * y.d2 + c.a1 * y.d1 + c.a0 * y.value - c.rhs;
}

MappedODE map_ode(const LinearODE2& ode) { return MappedODE(ode); }

double residual_t(const LinearODE2& ode, double t, const Jet& y) {
  return ode.f2(t) * y.d2 + ode.f1(t) * y.d1 + ode.f0(t) * y.value - ode.f(t);
}

ImpliedValue implied_initial_value(const MappedODE& ode, const InitialValues& known) {
  const int count = known.y.has_value() + known.dy.has_value() + known.ddy.has_value();
  if (count != 2) {
    throw InvalidArgument("implied_initial_value: exactly two initial values required");
  }
  const auto c = ode.coefficients(-1.0);
  auto check = [](double divisor, const char* name) {
    if (!std::isfinite(divisor) || std::abs(divisor) < 1e-14) {
      throw DivisorZero(name, std::string("implied_initial_value: ") + name + "(t1) vanishes");
    }
  };
  if (!known.y) {
    check(c.a0, "f0");
    return {InitialQuantity::y, (c.rhs - c.a2 * *known.ddy - c.a1 * *known.dy) / c.a0};
  }
  if (!known.dy) {
    check(c.a1, "f1");
    return {InitialQuantity::dy, (c.rhs - c.a2 * *known.ddy - c.a0 * *known.y) / c.a1};
  }
  check(c.a2, "f2");
  return {InitialQuantity::ddy, (c.rhs - c.a1 * *known.dy - c.a0 * *known.y) / c.a2};
}

}  // namespace tfc
