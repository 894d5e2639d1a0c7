#include <doctest.h>

#include <filesystem>
#include <numbers>

#include "tfc/error.hpp"
#include "tfc/oracle.hpp"
#include "tfc/problem_file.hpp"

using namespace tfc;

namespace {

Eigen::VectorXd solve_xi(const ProblemFile& p) {
  if (const auto* s = std::get_if<ScalarProblemSpec>(&p)) {
    const auto pcs = s->point_constraints();
    return solve_problem(s->to_ode(), pcs, s->solver.config()).fit.xi;
  }
  const auto& c = std::get<ControlProblemSpec>(p);
  return solve_state_costate(c.to_problem(), c.solver.config()).fit.xi;
}

const char* kMinimal = R"({
  "schema_version": 1,
  "kind": "bvp",
  "interval": [0, 1],
  "coefficients": {"f2": "1", "f1": "0", "f0": "0", "f": "0"},
  "constraints": [{"order": 0, "at": "t1", "value": 0}, {"order": 0, "at": "t2", "value": 1}],
  "solver": {"m": 6, "N": 40, "m_range": [3, 8]}
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_SUITE("problem_file") {
  TEST_CASE("minimal file") {
    const ProblemFile p = parse_problem(kMinimal);
    const auto& s = std::get<ScalarProblemSpec>(p);
    CHECK(s.kind == ProblemKind::bvp);
    CHECK(s.solver.m == 6);
    CHECK(s.solver.N == 40);
    CHECK(s.solver.scaling == Scaling::column_norm);
    const auto pcs = s.point_constraints();
    REQUIRE(pcs.size() == 2);
    CHECK(pcs[1].t == 1.0);
    CHECK(pcs[1].value == 1.0);
  }

  TEST_CASE("catalog problems survive serialization") {
    for (const auto& c : catalog()) {
      CAPTURE(c.id);
      const std::string text = serialize_problem(c.problem);
      const ProblemFile back = parse_problem(text);
      CHECK(serialize_problem(back) == text);
      const Eigen::VectorXd a = solve_xi(c.problem), b = solve_xi(back);
      REQUIRE(a.size() == b.size());
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("data files match the catalog") {
    for (const auto& c : catalog()) {
      CAPTURE(c.id);
      const auto path = std::filesystem::path(TFC_DATA_DIR) / (c.id + ".json");
      const ProblemFile f = load_problem_file(path);
      const Eigen::VectorXd a = solve_xi(c.problem), b = solve_xi(f);
      REQUIRE(a.size() == b.size());
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("constant expressions in numeric fields") {
    const std::string text = replace(kMinimal, "[0, 1]", R"([0, "pi/2"])");
    const auto s = std::get<ScalarProblemSpec>(parse_problem(text));
    CHECK(s.t2 == doctest::Approx(std::numbers::pi / 2));
  }

  TEST_CASE("rejected files") {
    SUBCASE("not JSON") { CHECK_THROWS_AS(parse_problem("{"), ConfigError); }
    SUBCASE("schema version") {
      CHECK_THROWS_AS(
          parse_problem(replace(kMinimal, "\"schema_version\": 1", "\"schema_version\": 2")),
          ConfigError);
    }
    SUBCASE("unknown kind") {
      CHECK_THROWS_AS(parse_problem(replace(kMinimal, "\"bvp\"", "\"pde\"")), ConfigError);
    }
    SUBCASE("bad expression") {
      CHECK_THROWS_AS(parse_problem(replace(kMinimal, "\"f2\": \"1\"", "\"f2\": \"1 +\"")),
                      ParseError);
    }
    SUBCASE("singular coefficient at an endpoint") {
      CHECK_THROWS_AS(parse_problem(replace(kMinimal, "\"f\": \"0\"", "\"f\": \"1/t\"")),
                      ConfigError);
    }
    SUBCASE("constraints do not match the kind") {
      CHECK_THROWS_AS(parse_problem(replace(kMinimal, "\"bvp\"", "\"ivp\"")), ConfigError);
    }
    SUBCASE("interior constraint") {
      CHECK_THROWS_AS(parse_problem(replace(kMinimal, "\"at\": \"t2\"", "\"at\": 0.5")),
                      ConfigError);
    }
    SUBCASE("too few nodes for the sweep range") {
      CHECK_THROWS_AS(parse_problem(replace(kMinimal, "\"N\": 40", "\"N\": 8")), ConfigError);
    }
    SUBCASE("missing field") {
      CHECK_THROWS_AS(parse_problem(replace(kMinimal, "\"interval\"", "\"range\"")), ConfigError);
    }
    SUBCASE("missing file") {
      CHECK_THROWS_AS(load_problem_file("/nonexistent/problem.json"), ConfigError);
    }
  }

}  // TEST_SUITE
