#include "tfc/problem_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tfc/error.hpp"
#include "tfc/expression.hpp"

namespace tfc {

namespace {

using nlohmann::json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Numbers may be written literally or as constant expressions ("2*pi").
double read_real(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const double v = parse_expression(j.get<std::string>())(0.0);
    if (!std::isfinite(v)) throw ConfigError(where + ": value is not finite");
    return v;
  }
  throw ConfigError(where + ": expected a number or expression string");
}

std::string read_expression(const json& j, const std::string& where) {
  std::string src;
  if (j.is_number()) {
    src = format_number(j.get<double>());
  } else if (j.is_string()) {
    src = j.get<std::string>();
  } else {
    throw ConfigError(where + ": expected an expression string");
  }
  parse_expression(src);  // surface ParseError early
  return src;
}

int read_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

std::array<double, 2> read_interval(const json& j) {
  const json& iv = require(j, "interval", "problem");
  if (!iv.is_array() || iv.size() != 2) throw ConfigError("interval: expected [t1, t2]");
  return {read_real(iv[0], "interval[0]"), read_real(iv[1], "interval[1]")};
}

SolverSettings read_solver(const json& j) {
  SolverSettings s;
  if (!j.contains("solver")) return s;
  const json& sj = j.at("solver");
  if (!sj.is_object()) throw ConfigError("solver: expected an object");
  if (sj.contains("m")) s.m = read_int(sj.at("m"), "solver.m");
  if (sj.contains("N")) s.N = read_int(sj.at("N"), "solver.N");
  if (sj.contains("scaling")) s.scaling = scaling_from_string(sj.at("scaling").get<std::string>());
  if (sj.contains("nodes")) s.nodes = node_layout_from_string(sj.at("nodes").get<std::string>());
  if (sj.contains("weights")) {
    std::vector<double> w;
    for (const auto& v : sj.at("weights")) w.push_back(read_real(v, "solver.weights"));
    s.weights = std::move(w);
  }
  if (sj.contains("m_range")) {
    const json& r = sj.at("m_range");
    if (!r.is_array() || r.size() != 2) throw ConfigError("solver.m_range: expected [min, max]");
    s.m_min = read_int(r[0], "solver.m_range[0]");
    s.m_max = read_int(r[1], "solver.m_range[1]");
  }
  return s;
}

json solver_json(const SolverSettings& s) {
  json j = {{"m", s.m},
            {"N", s.N},
            {"scaling", std::string(to_string(s.scaling))},
            {"nodes", std::string(to_string(s.nodes))},
            {"m_range", {s.m_min, s.m_max}}};
  if (s.weights) j["weights"] = *s.weights;
  return j;
}

ExpressionMatrix read_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + ": expected a 2x2 array");
  ExpressionMatrix out;
  for (int r = 0; r < 2; ++r) {
    if (!j[r].is_array() || j[r].size() != 2) throw ConfigError(where + ": expected a 2x2 array");
    for (int c = 0; c < 2; ++c) {
      out[r][c] = read_expression(j[r][c],
                                  where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return out;
}

std::array<double, 2> read_vec2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + ": expected 2 values");
  return {read_real(j[0], where + "[0]"), read_real(j[1], where + "[1]")};
}

Matrix2Function matrix_function(const ExpressionMatrix& m) {
  std::array<std::array<Expression, 2>, 2> e{
      {{parse_expression(m[0][0]), parse_expression(m[0][1])},
       {parse_expression(m[1][0]), parse_expression(m[1][1])}}};
  return [e](double t) {
    Eigen::Matrix2d a;
    a << e[0][0](t), e[0][1](t), e[1][0](t), e[1][1](t);
    return a;
  };
}

void validate_solver(const SolverSettings& s) {
  s.config().validate();
  if (s.m_min < 2 || s.m_max < s.m_min) throw ConfigError("solver.m_range is invalid");
  if (s.N < s.m_max + 1) throw ConfigError("solver.N must be >= m_range max + 1");
}

}  // namespace

std::string_view to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::ivp: return "ivp";
    case ProblemKind::bvp: return "bvp";
    case ProblemKind::control: return "control";
  }
  return "bvp";
}

CollocationConfig SolverSettings::config() const {
  CollocationConfig c;
  c.m = m;
  c.N = N;
  c.weights = weights;
  c.scaling = scaling;
  c.nodes = nodes;
  return c;
}

LinearODE2 ScalarProblemSpec::to_ode() const {
  LinearODE2 ode;
  ode.f2 = parse_expression(f2);
  ode.f1 = parse_expression(f1);
  ode.f0 = parse_expression(f0);
  ode.f = parse_expression(f);
  ode.t1 = t1;
  ode.t2 = t2;
  return ode;
}

std::vector<PointConstraint> ScalarProblemSpec::point_constraints() const {
  std::vector<PointConstraint> out;
  for (const auto& c : constraints) {
    double t = 0.0;
    if (const auto* label = std::get_if<std::string>(&c.at)) {
      if (*label == "t1") {
        t = t1;
      } else if (*label == "t2") {
        t = t2;
      } else {
        throw ConfigError("constraint 'at' must be \"t1\", \"t2\" or a number");
      }
    } else {
      t = std::get<double>(c.at);
    }
    out.push_back({c.order, t, c.value});
  }
  return out;
}

void ScalarProblemSpec::validate() const {
  if (!(t2 > t1)) throw ConfigError("interval: t2 must exceed t1");
  const LinearODE2 ode = to_ode();
  for (double t : {t1, t2}) {
    for (const auto* fn : {&ode.f2, &ode.f1, &ode.f0, &ode.f}) {
      if (!std::isfinite((*fn)(t))) {
        throw ConfigError("coefficients must be finite at both interval endpoints");
      }
    }
  }
  const auto pcs = point_constraints();
  if (pcs.size() != 2) throw ConfigError("exactly 2 constraints are required");
  const DomainMap map(t1, t2);
  ConstraintCase c;
  try {
    c = case_for(map, pcs);
  } catch (const UnknownCase& e) {
    throw ConfigError(e.what());
  }
  const bool is_ivp = c == ConstraintCase::ivp_y_dy || c == ConstraintCase::ivp_y_ddy ||
                      c == ConstraintCase::ivp_dy_ddy;
  if (kind == ProblemKind::ivp && !is_ivp) {
    throw ConfigError("kind 'ivp' needs both constraints at t1");
  }
  if (kind == ProblemKind::bvp && is_ivp) {
    throw ConfigError("kind 'bvp' needs one constraint at t1 and one at t2");
  }
  validate_solver(solver);
}

StateCostateProblem ControlProblemSpec::to_problem() const {
  StateCostateProblem p;
  p.A11 = matrix_function(A11);
  p.A12 = matrix_function(A12);
  p.A21 = matrix_function(A21);
  p.A22 = matrix_function(A22);
  p.x0 = Eigen::Vector2d(x0[0], x0[1]);
  p.lambda_f = Eigen::Vector2d(lambda_f[0], lambda_f[1]);
  p.t0 = t0;
  p.tf = tf;
  return p;
}

void ControlProblemSpec::validate() const {
  if (!(tf > t0)) throw ConfigError("interval: tf must exceed t0");
  const auto p = to_problem();
  for (double t : {t0, tf}) {
    for (const auto* fn : {&p.A11, &p.A12, &p.A21, &p.A22}) {
      if (!(*fn)(t).allFinite())
        throw ConfigError("blocks must be finite at both interval endpoints");
    }
  }
  validate_solver(solver);
}

ProblemFile problem_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("problem: expected a JSON object");
  const int version = read_int(require(j, "schema_version", "problem"), "schema_version");
  if (version != kProblemSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(version));
  }
  const std::string kind = require(j, "kind", "problem").get<std::string>();
  const std::string id = j.value("id", std::string());
  const auto interval = read_interval(j);

  if (kind == "control") {
    ControlProblemSpec c;
    c.id = id;
    c.t0 = interval[0];
    c.tf = interval[1];
    const json& blocks = require(j, "blocks", "problem");
    c.A11 = read_matrix(require(blocks, "A11", "blocks"), "blocks.A11");
    c.A12 = read_matrix(require(blocks, "A12", "blocks"), "blocks.A12");
    c.A21 = read_matrix(require(blocks, "A21", "blocks"), "blocks.A21");
    c.A22 = read_matrix(require(blocks, "A22", "blocks"), "blocks.A22");
    c.x0 = read_vec2(require(j, "x0", "problem"), "x0");
    c.lambda_f = read_vec2(require(j, "lambda_f", "problem"), "lambda_f");
    c.solver = read_solver(j);
    c.validate();
    return c;
  }
  if (kind != "ivp" && kind != "bvp") {
    throw ConfigError("kind must be one of ivp, bvp, control; got '" + kind + "'");
  }

  ScalarProblemSpec s;
  s.id = id;
  s.kind = kind == "ivp" ? ProblemKind::ivp : ProblemKind::bvp;
  s.t1 = interval[0];
  s.t2 = interval[1];
  const json& coeffs = require(j, "coefficients", "problem");
  s.f2 = read_expression(require(coeffs, "f2", "coefficients"), "coefficients.f2");
  s.f1 = read_expression(require(coeffs, "f1", "coefficients"), "coefficients.f1");
  s.f0 = read_expression(require(coeffs, "f0", "coefficients"), "coefficients.f0");
  s.f = read_expression(require(coeffs, "f", "coefficients"), "coefficients.f");
  const json& cons = require(j, "constraints", "problem");
  if (!cons.is_array()) throw ConfigError("constraints: expected an array");
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const std::string where = "constraints[" + std::to_string(i) + "]";
    ConstraintEntry e;
    e.order = read_int(require(cons[i], "order", where), where + ".order");
    const json& at = require(cons[i], "at", where);
    if (at.is_string() && (at == "t1" || at == "t2")) {
      e.at = at.get<std::string>();
    } else {
      e.at = read_real(at, where + ".at");
    }
    e.value = read_real(require(cons[i], "value", where), where + ".value");
    s.constraints.push_back(std::move(e));
  }
  s.solver = read_solver(j);
  s.validate();
  return s;
}

ProblemFile parse_problem(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return problem_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid problem file: ") + e.what());
  }
}

ProblemFile load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

json to_json(const ProblemFile& problem) {
  if (const auto* c = std::get_if<ControlProblemSpec>(&problem)) {
    return json{{"schema_version", kProblemSchemaVersion},
                {"id", c->id},
                {"kind", "control"},
                {"interval", {c->t0, c->tf}},
                {"blocks", {{"A11", c->A11}, {"A12", c->A12}, {"A21", c->A21}, {"A22", c->A22}}},
                {"x0", c->x0},
                {"lambda_f", c->lambda_f},
                {"solver", solver_json(c->solver)}};
  }
  const auto& s = std::get<ScalarProblemSpec>(problem);
  json cons = json::array();
  for (const auto& c : s.constraints) {
    json at = std::holds_alternative<std::string>(c.at) ? json(std::get<std::string>(c.at))
                                                        : json(std::get<double>(c.at));
    cons.push_back({{"order", c.order}, {"at", at}, {"value", c.value}});
  }
  return json{{"schema_version", kProblemSchemaVersion},
              {"id", s.id},
              {"kind", std::string(to_string(s.kind))},
              {"coefficients", {{"f2", s.f2}, {"f1", s.f1}, {"f0", s.f0}, {"f", s.f}}},
              {"interval", {s.t1, s.t2}},
              {"constraints", cons},
              {"solver", solver_json(s.solver)}};
}

std::string serialize_problem(const ProblemFile& problem) {
  return to_json(problem).dump(2) + "\n";
}

}  // namespace tfc
