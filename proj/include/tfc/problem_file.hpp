#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tfc/collocation.hpp"
#include "tfc/optimal_control.hpp"

namespace tfc {

inline constexpr int kProblemSchemaVersion = 1;

enum class ProblemKind { ivp, bvp, control };

std::string_view to_string(ProblemKind k);

struct SolverSettings {
  int m = 17;
  int N = 1000;
  std::optional<std::vector<double>> weights;
  Scaling scaling = Scaling::column_norm;
  NodeLayout nodes = NodeLayout::uniform;
  int m_min = 3;  // sweep range
  int m_max = 23;

  CollocationConfig config() const;
};

/// Constraint location: "t1", "t2" or an explicit time.
struct ConstraintEntry {
  int order = 0;
  std::variant<std::string, double> at;
  double value = 0.0;
};

/// Scalar second-order problem with coefficient expressions in t.
struct ScalarProblemSpec {
  std::string id;
  ProblemKind kind = ProblemKind::bvp;
  std::string f2 = "1";
  std::string f1 = "0";
  std::string f0 = "0";
  std::string f = "0";
  double t1 = 0.0;
  double t2 = 1.0;
  std::vector<ConstraintEntry> constraints;
  SolverSettings solver;

  /// Parses the expressions; throws ParseError.
  LinearODE2 to_ode() const;
  std::vector<PointConstraint> point_constraints() const;
  /// Expressions finite at both endpoints, two constraints placed as `kind`
  /// requires and matching one of the fixed cases. Throws ConfigError.
  void validate() const;
};

using ExpressionMatrix = std::array<std::array<std::string, 2>, 2>;

struct ControlProblemSpec {
  std::string id;
  ExpressionMatrix A11{{{"0", "0"}, {"0", "0"}}};
  ExpressionMatrix A12{{{"0", "0"}, {"0", "0"}}};
  ExpressionMatrix A21{{{"0", "0"}, {"0", "0"}}};
  ExpressionMatrix A22{{{"0", "0"}, {"0", "0"}}};
  std::array<double, 2> x0{0.0, 0.0};
  std::array<double, 2> lambda_f{0.0, 0.0};
  double t0 = 0.0;
  double tf = 1.0;
  SolverSettings solver;

  StateCostateProblem to_problem() const;
  void validate() const;
};

using ProblemFile = std::variant<ScalarProblemSpec, ControlProblemSpec>;

/// Throws ConfigError on schema problems and ParseError on bad expressions.
ProblemFile problem_from_json(const nlohmann::json& j);
ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem_file(const std::filesystem::path& path);

nlohmann::json to_json(const ProblemFile& problem);
std::string serialize_problem(const ProblemFile& problem);

}  // namespace tfc
