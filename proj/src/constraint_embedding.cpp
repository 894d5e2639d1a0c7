#include "tfc/constraint_embedding.hpp"

#include <cmath>
#include <string>

#include "tfc/error.hpp"

namespace tfc {

namespace {

constexpr int kMaxConstraints = 6;
constexpr double kPivotThreshold = 1e-10;

// d^order/dx^order of x^exponent at x.
double monomial_derivative(int exponent, int order, double x) {
  if (order > exponent) return 0.0;
  double falling = 1.0;
  for (int j = 0; j < order; ++j) falling *= exponent - j;
  const int power = exponent - order;
  return power == 0 ? falling : falling * std::pow(x, power);
}

bool full_column_rank(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return false;
  return s(s.size() - 1) > kPivotThreshold * s(0);
}

bool same_functional(const LinearFunctional& a, const LinearFunctional& b) {
  if (a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].order != b.terms[i].order || a.terms[i].location != b.terms[i].location ||
        a.terms[i].weight != b.terms[i].weight) {
      return false;
    }
  }
  return true;
}

}  // namespace

LinearFunctional LinearFunctional::point(int order, double location) {
  return LinearFunctional{{FunctionalTerm{1.0, order, location}}};
}

LinearFunctional LinearFunctional::difference(int order, double a, double b) {
  return LinearFunctional{{FunctionalTerm{1.0, order, a}, FunctionalTerm{-1.0, order, b}}};
}

double LinearFunctional::apply_monomial(int exponent) const {
  double sum = 0.0;
  for (const auto& t : terms) {
    sum += t.weight * monomial_derivative(exponent, t.order, t.location);
  }
  return sum;
}

double LinearFunctional::apply(const std::function<double(int, double)>& g) const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.weight * g(t.order, t.location);
  return sum;
}

double Polynomial::eval(double x, int order) const {
  // Horner on the order-th derivative coefficients.
  double acc = 0.0;
  for (int e = degree(); e >= order; --e) {
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= e - j;
    acc = acc * x + falling * coeffs_[e];
  }
  return acc;
}

std::vector<Polynomial> BetaSet::polynomials() const {
  const int n = size();
  int max_exp = 0;
  for (int e : monomial_support) max_exp = std::max(max_exp, e);
  std::vector<Polynomial> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> c(max_exp + 1, 0.0);
    for (int j = 0; j < n; ++j) c[monomial_support[j]] += coefficients(j, i);
    out.emplace_back(std::move(c));
  }
  return out;
}

BetaSet build_betas(std::span<const LinearFunctional> functionals) {
  const int n = static_cast<int>(functionals.size());
  if (n < 1 || n > kMaxConstraints) {
    throw InvalidArgument("build_betas: constraint count must be in [1, 6], got " +
                          std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    for (const auto& t : functionals[i].terms) {
      if (t.order < 0 || !std::isfinite(t.location)) {
        throw InvalidArgument("build_betas: invalid constraint term");
      }
    }
    for (int j = 0; j < i; ++j) {
      if (same_functional(functionals[i], functionals[j])) {
        throw SingularConstraintSet("build_betas: constraints " + std::to_string(j) + " and " +
                                    std::to_string(i) + " coincide");
      }
    }
  }

  std::vector<int> support;
  Eigen::MatrixXd accepted(n, 0);
  for (int e = 0; e <= n + 4 && static_cast<int>(support.size()) < n; ++e) {
    Eigen::MatrixXd trial(n, accepted.cols() + 1);
    trial.leftCols(accepted.cols()) = accepted;
    for (int i = 0; i < n; ++i) trial(i, accepted.cols()) = functionals[i].apply_monomial(e);
    if (full_column_rank(trial)) {
      accepted = std::move(trial);
      support.push_back(e);
    }
  }
  if (static_cast<int>(support.size()) < n) {
    throw SingularConstraintSet("build_betas: no nonsingular monomial support with exponent <= " +
                                std::to_string(n + 4));
  }

  // A(i, j) = L_i(x^e_j); L_i(beta_k) = (A C)(i, k) = delta_ik gives C = A^-1.
  Eigen::FullPivLU<Eigen::MatrixXd> lu(accepted);
  BetaSet out;
  out.monomial_support = std::move(support);
  out.coefficients = lu.solve(Eigen::MatrixXd::Identity(n, n));
  return out;
}

BetaSet build_betas(std::span<const ConstraintSpec> constraints) {
  std::vector<LinearFunctional> fs;
  fs.reserve(constraints.size());
  for (const auto& c : constraints) fs.push_back(LinearFunctional::point(c.order, c.location));
  return build_betas(fs);
}

Eigen::MatrixXd kronecker_matrix(const BetaSet& betas,
                                 std::span<const LinearFunctional> functionals) {
  const auto polys = betas.polynomials();
  const int n = static_cast<int>(functionals.size());
  Eigen::MatrixXd k(n, betas.size());
  for (int row = 0; row < n; ++row) {
    for (int i = 0; i < betas.size(); ++i) {
      k(row, i) =
          functionals[row].apply([&](int order, double x) { return polys[i].eval(x, order); });
    }
  }
  return k;
}

ConstrainedExpression::ConstrainedExpression(std::vector<LinearFunctional> functionals,
                                             std::vector<double> values,
                                             std::vector<Polynomial> betas)
    : functionals_(std::move(functionals)), values_(std::move(values)), betas_(std::move(betas)) {
  if (functionals_.size() != values_.size() || functionals_.size() != betas_.size()) {
    throw InvalidArgument("ConstrainedExpression: size mismatch");
  }
}

Jet ConstrainedExpression::evaluate(double x, const Jet& g,
                                    std::span<const double> g_functionals) const {
  if (g_functionals.size() != values_.size()) {
    throw InvalidArgument("ConstrainedExpression::evaluate: expected " +
                          std::to_string(values_.size()) + " functional values");
  }
  Jet y = g;
  for (std::size_t i = 0; i < betas_.size(); ++i) {
    const double gap = values_[i] - g_functionals[i];
    const Jet b = betas_[i].jet(x);
    y.value += b.value * gap;
    y.d1 += b.d1 * gap;
    y.d2 += b.d2 * gap;
  }
  return y;
}

Jet ConstrainedExpression::evaluate(double x, const FreeFunction& g) const {
  const auto gf = apply_functionals(g);
  return evaluate(x, Jet{g(0, x), g(1, x), g(2, x)}, gf);
}

std::vector<double> ConstrainedExpression::apply_functionals(const FreeFunction& g) const {
  std::vector<double> out;
  out.reserve(functionals_.size());
  for (const auto& f : functionals_) out.push_back(f.apply(g));
  return out;
}

Jet ConstrainedExpression::constraint_part(double x) const {
  const std::vector<double> zeros(values_.size(), 0.0);
  return evaluate(x, Jet{}, zeros);
}

ConstrainedExpression ConstrainedExpression::with_values(std::vector<double> values) const {
  return ConstrainedExpression(functionals_, std::move(values), betas_);
}

ConstrainedExpression make_constrained_expression(std::span<const ConstraintSpec> constraints) {
  std::vector<LinearFunctional> fs;
  std::vector<double> values;
  for (const auto& c : constraints) {
    fs.push_back(LinearFunctional::point(c.order, c.location));
    values.push_back(c.value);
  }
  const BetaSet betas = build_betas(fs);
  return ConstrainedExpression(std::move(fs), std::move(values), betas.polynomials());
}

ConstrainedExpression build_relative_betas(std::span<const RelativeConstraintSpec> specs) {
  std::vector<LinearFunctional> fs;
  for (const auto& s : specs) {
    if (s.location_a == s.location_b) {
      throw InvalidArgument("build_relative_betas: locations must differ");
    }
    fs.push_back(LinearFunctional::difference(s.order, s.location_a, s.location_b));
  }
  const BetaSet betas = build_betas(fs);
  return ConstrainedExpression(std::move(fs), std::vector<double>(specs.size(), 0.0),
                               betas.polynomials());
}

std::array<CaseSlot, 2> case_slots(ConstraintCase c) {
  using C = ConstraintCase;
  switch (c) {
    case C::ivp_y_dy: return {{{0, -1.0}, {1, -1.0}}};
    case C::ivp_y_ddy: return {{{0, -1.0}, {2, -1.0}}};
    case C::ivp_dy_ddy: return {{{1, -1.0}, {2, -1.0}}};
    case C::bvp_y_y: return {{{0, -1.0}, {0, 1.0}}};
    case C::bvp_y_dy: return {{{0, -1.0}, {1, 1.0}}};
    case C::bvp_y_ddy: return {{{0, -1.0}, {2, 1.0}}};
    case C::bvp_dy_y: return {{{1, -1.0}, {0, 1.0}}};
    case C::bvp_dy_dy: return {{{1, -1.0}, {1, 1.0}}};
    case C::bvp_dy_ddy: return {{{1, -1.0}, {2, 1.0}}};
    case C::bvp_ddy_y: return {{{2, -1.0}, {0, 1.0}}};
    case C::bvp_ddy_dy: return {{{2, -1.0}, {1, 1.0}}};
    case C::bvp_ddy_ddy: return {{{2, -1.0}, {2, 1.0}}};
  }
  throw UnknownCase("case_slots: unknown case");
}

std::string_view to_string(ConstraintCase c) {
  using C = ConstraintCase;
  switch (c) {
    case C::ivp_y_dy: return "ivp_y_dy";
    case C::ivp_y_ddy: return "ivp_y_ddy";
    case C::ivp_dy_ddy: return "ivp_dy_ddy";
    case C::bvp_y_y: return "bvp_y_y";
    case C::bvp_y_dy: return "bvp_y_dy";
    case C::bvp_y_ddy: return "bvp_y_ddy";
    case C::bvp_dy_y: return "bvp_dy_y";
    case C::bvp_dy_dy: return "bvp_dy_dy";
    case C::bvp_dy_ddy: return "bvp_dy_ddy";
    case C::bvp_ddy_y: return "bvp_ddy_y";
    case C::bvp_ddy_dy: return "bvp_ddy_dy";
    case C::bvp_ddy_ddy: return "bvp_ddy_ddy";
  }
  return "unknown";
}

ConstraintCase case_from_string(std::string_view name) {
  for (auto c : kAllCases) {
    if (to_string(c) == name) return c;
  }
  throw UnknownCase("unknown constraint case '" + std::string(name) + "'");
}

std::optional<ConstraintCase> identify_case(int order_a, double loc_a, int order_b, double loc_b) {
  for (auto c : kAllCases) {
    const auto s = case_slots(c);
    const bool direct = s[0].order == order_a && s[0].location == loc_a && s[1].order == order_b &&
                        s[1].location == loc_b;
    const bool swapped = s[0].order == order_b && s[0].location == loc_b && s[1].order == order_a &&
                         s[1].location == loc_a;
    if (direct || swapped) return c;
  }
  return std::nullopt;
}

ConstrainedExpression fixed_case_expression(ConstraintCase c, std::span<const double> values) {
  if (values.size() != 2) {
    throw InvalidArgument("fixed_case_expression: expected 2 constraint values");
  }
  using C = ConstraintCase;
  using P = Polynomial;
  std::array<P, 2> betas;
  switch (c) {
    // y = g + (y1 - g1) + (x + 1)(dy1 - dg1)
    case C::ivp_y_dy: betas = {P({1.0}), P({1.0, 1.0})}; break;
    // y = g - x (y1 - g1) + (x^2 + x)/2 (ddy1 - ddg1)
    case C::ivp_y_ddy: betas = {P({0.0, -1.0}), P({0.0, 0.5, 0.5})}; break;
    // y = g + x (dy1 - dg1) + (x^2/2 + x)(ddy1 - ddg1)
    case C::ivp_dy_ddy: betas = {P({0.0, 1.0}), P({0.0, 1.0, 0.5})}; break;
    // y = g + (1 - x)/2 (y1 - g1) + (1 + x)/2 (y2 - g2)
    case C::bvp_y_y: betas = {P({0.5, -0.5}), P({0.5, 0.5})}; break;
    // y = g + (y1 - g1) + (x + 1)(dy2 - dg2)
    case C::bvp_y_dy: betas = {P({1.0}), P({1.0, 1.0})}; break;
    // y = g - x (y1 - g1) + (x^2 + x)/2 (ddy2 - ddg2)
    case C::bvp_y_ddy: betas = {P({0.0, -1.0}), P({0.0, 0.5, 0.5})}; break;
    // y = g + (y2 - g2) + (x - 1)(dy1 - dg1)
    case C::bvp_dy_y: betas = {P({-1.0, 1.0}), P({1.0})}; break;
    // y = g + x/2 (1 - x/2)(dy1 - dg1) + x/2 (1 + x/2)(dy2 - dg2)
    case C::bvp_dy_dy: betas = {P({0.0, 0.5, -0.25}), P({0.0, 0.5, 0.25})}; break;
    // y = g + x (dy1 - dg1) + x (x/2 + 1)(ddy2 - ddg2)
    case C::bvp_dy_ddy: betas = {P({0.0, 1.0}), P({0.0, 1.0, 0.5})}; break;
    // y = g + x (y2 - g2) + x/2 (x - 1)(ddy1 - ddg1)
    case C::bvp_ddy_y: betas = {P({0.0, -0.5, 0.5}), P({0.0, 1.0})}; break;
    // y = g + x (dy2 - dg2) + x/2 (x - 2)(ddy1 - ddg1)
    case C::bvp_ddy_dy: betas = {P({0.0, -1.0, 0.5}), P({0.0, 1.0})}; break;
    // y = g + x^2/12 (3 - x)(ddy1 - ddg1) + x^2/12 (3 + x)(ddy2 - ddg2)
    case C::bvp_ddy_ddy:
      betas = {P({0.0, 0.0, 0.25, -1.0 / 12.0}), P({0.0, 0.0, 0.25, 1.0 / 12.0})};
      break;
    default: throw UnknownCase("fixed_case_expression: unknown case");
  }
  const auto slots = case_slots(c);
  std::vector<LinearFunctional> fs = {LinearFunctional::point(slots[0].order, slots[0].location),
                                      LinearFunctional::point(slots[1].order, slots[1].location)};
  return ConstrainedExpression(std::move(fs), {values[0], values[1]}, {betas[0], betas[1]});
}

}  // namespace tfc
