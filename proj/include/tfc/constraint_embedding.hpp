#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tfc {

/// Value and first two x-derivatives of a scalar function at one point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Linear point constraint y^(order)(location) = value, in x-domain units.
struct ConstraintSpec {
  int order = 0;
  double location = 0.0;
  double value = 0.0;
};

/// Relative constraint y^(order)(location_a) = y^(order)(location_b).
struct RelativeConstraintSpec {
  int order = 0;
  double location_a = 0.0;
  double location_b = 0.0;
};

/// One term weight * y^(order)(location) of a linear point functional.
struct FunctionalTerm {
  double weight = 1.0;
  int order = 0;
  double location = 0.0;
};

/// Sum of point-derivative evaluations. A plain constraint has a single unit
/// term; a relative constraint has two terms of opposite sign.
struct LinearFunctional {
  std::vector<FunctionalTerm> terms;

  static LinearFunctional point(int order, double location);
  static LinearFunctional difference(int order, double a, double b);

  /// Applies the functional to the monomial x^exponent.
  double apply_monomial(int exponent) const;
  /// Applies the functional to g given as g(order, x).
  double apply(const std::function<double(int, double)>& g) const;
};

/// Dense polynomial with ascending coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {}

  const std::vector<double>& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// d^order p / dx^order at x.
  double eval(double x, int order = 0) const;
  Jet jet(double x) const { return {eval(x, 0), eval(x, 1), eval(x, 2)}; }

 private:
  std::vector<double> coeffs_;
};

/// Beta functions over a monomial support. Column i of `coefficients` holds
/// the coefficients of beta_i on x^support[0], x^support[1], ...
struct BetaSet {
  std::vector<int> monomial_support;
  Eigen::MatrixXd coefficients;

  int size() const { return static_cast<int>(monomial_support.size()); }
  std::vector<Polynomial> polynomials() const;
};

/// Greedy lowest-degree monomial support: exponents e = 0, 1, 2, ... are
/// accepted while they keep the constraint-application matrix of full column
/// rank (relative singular-value threshold 1e-10). Throws SingularConstraintSet
/// if fewer than n exponents are accepted with e <= n + 4.
BetaSet build_betas(std::span<const LinearFunctional> functionals);
BetaSet build_betas(std::span<const ConstraintSpec> constraints);

/// Matrix K(k, i) = L_k(beta_i); the identity for a valid beta set.
Eigen::MatrixXd kronecker_matrix(const BetaSet& betas,
                                 std::span<const LinearFunctional> functionals);

using FreeFunction = std::function<double(int order, double x)>;

/// y = g + sum_i beta_i (c_i - L_i(g)). Satisfies L_i(y) = c_i for every g.
class ConstrainedExpression {
 public:
  ConstrainedExpression(std::vector<LinearFunctional> functionals, std::vector<double> values,
                        std::vector<Polynomial> betas);

  int size() const { return static_cast<int>(functionals_.size()); }
  const std::vector<LinearFunctional>& functionals() const { return functionals_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<Polynomial>& betas() const { return betas_; }

  /// y, y', y'' at x from g's jet at x and L_i(g) for every constraint.
  Jet evaluate(double x, const Jet& g, std::span<const double> g_functionals) const;
  Jet evaluate(double x, const FreeFunction& g) const;

  /// L_i(g) for every constraint functional.
  std::vector<double> apply_functionals(const FreeFunction& g) const;

  /// sum_i beta_i(x) c_i: the expression evaluated with g = 0.
  Jet constraint_part(double x) const;

  ConstrainedExpression with_values(std::vector<double> values) const;

 private:
  std::vector<LinearFunctional> functionals_;
  std::vector<double> values_;
  std::vector<Polynomial> betas_;
};

/// Generic route: betas from build_betas.
ConstrainedExpression make_constrained_expression(std::span<const ConstraintSpec> constraints);

/// Embedding for relative constraints (all constraint values are zero).
ConstrainedExpression build_relative_betas(std::span<const RelativeConstraintSpec> specs);

/// The twelve two-constraint cases with hand-derived expressions on [-1, 1].
/// Names list the constraint at x = -1 first.
enum class ConstraintCase {
  ivp_y_dy,
  ivp_y_ddy,
  ivp_dy_ddy,
  bvp_y_y,
  bvp_y_dy,
  bvp_y_ddy,
  bvp_dy_y,
  bvp_dy_dy,
  bvp_dy_ddy,
  bvp_ddy_y,
  bvp_ddy_dy,
  bvp_ddy_ddy,
};

inline constexpr std::array<ConstraintCase, 12> kAllCases = {
    ConstraintCase::ivp_y_dy,  ConstraintCase::ivp_y_ddy,  ConstraintCase::ivp_dy_ddy,
    ConstraintCase::bvp_y_y,   ConstraintCase::bvp_y_dy,   ConstraintCase::bvp_y_ddy,
    ConstraintCase::bvp_dy_y,  ConstraintCase::bvp_dy_dy,  ConstraintCase::bvp_dy_ddy,
    ConstraintCase::bvp_ddy_y, ConstraintCase::bvp_ddy_dy, ConstraintCase::bvp_ddy_ddy,
};

/// Derivative order and x-location of one constraint of a fixed case.
struct CaseSlot {
  int order;
  double location;
};

std::array<CaseSlot, 2> case_slots(ConstraintCase c);
std::string_view to_string(ConstraintCase c);
/// Throws UnknownCase.
ConstraintCase case_from_string(std::string_view name);
/// The case constraining (order_a, loc_a) and (order_b, loc_b), locations in
/// {-1, +1}; slot order does not matter.
std::optional<ConstraintCase> identify_case(int order_a, double loc_a, int order_b, double loc_b);

/// Hard-coded expression for a case; values are x-domain scaled and ordered
/// as in case_slots().
ConstrainedExpression fixed_case_expression(ConstraintCase c, std::span<const double> values);

}  // namespace tfc
