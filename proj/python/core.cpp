#include <string>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tfc/chebyshev.hpp"
#include "tfc/collocation.hpp"
#include "tfc/diagnostics.hpp"
#include "tfc/error.hpp"
#include "tfc/oracle.hpp"
#include "tfc/problem_file.hpp"

namespace py = pybind11;
using namespace tfc;

namespace {

struct Problem {
  ProblemFile spec;

  const SolverSettings& solver() const {
    return std::visit([](const auto& s) -> const SolverSettings& { return s.solver; }, spec);
  }
  std::string id() const {
    return std::visit([](const auto& s) { return s.id; }, spec);
  }
  std::string kind() const {
    if (const auto* s = std::get_if<ScalarProblemSpec>(&spec))
      return std::string(to_string(s->kind));
    return "control";
  }
  const ScalarProblemSpec& scalar() const {
    const auto* s = std::get_if<ScalarProblemSpec>(&spec);
    if (s == nullptr) throw InvalidArgument("problem '" + id() + "' is a control problem");
    return *s;
  }
  const ControlProblemSpec& control() const {
    const auto* c = std::get_if<ControlProblemSpec>(&spec);
    if (c == nullptr) throw InvalidArgument("problem '" + id() + "' is not a control problem");
    return *c;
  }
};

CollocationConfig config_for(const Problem& p, std::optional<int> m, std::optional<int> N,
                             std::optional<std::string> scaling) {
  CollocationConfig cfg = p.solver().config();
  if (m) cfg.m = *m;
  if (N) cfg.N = *N;
  if (scaling) cfg.scaling = scaling_from_string(*scaling);
  return cfg;
}

py::dict fit_dict(const LeastSquaresFit& f) {
  py::dict d;
  d["residual_mean"] = f.residual_mean;
  d["residual_abs_mean"] = f.residual_abs_mean;
  d["residual_std"] = f.residual_std;
  d["cond_PtP"] = f.cond_PtP;
  d["rank_deficient"] = f.rank_deficient;
  return d;
}

py::dict row_dict(const SweepRow& r) {
  py::dict d;
  d["m"] = r.m;
  d["residual_mean"] = r.residual_mean;
  d["residual_abs_mean"] = r.residual_abs_mean;
  d["residual_std"] = r.residual_std;
  d["cond_PtP"] = r.cond_PtP;
  d["rank_deficient"] = r.rank_deficient;
  d["error"] = r.error;
  return d;
}

struct ScalarResult {
  LSSolution s;

  // Columns y, y', y'' (t-derivatives), one row per time.
  Eigen::MatrixXd evaluate(const Eigen::VectorXd& t) const {
    Eigen::MatrixXd out(t.size(), 3);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const Jet j = s.solution.at(t(i));
      out.row(i) << j.value, j.d1, j.d2;
    }
    return out;
  }
};

struct ControlResult {
  StateCostateResult r;

  // Columns x1, x2, lambda1, lambda2.
  Eigen::MatrixXd evaluate(const Eigen::VectorXd& t) const {
    Eigen::MatrixXd out(t.size(), 4);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      out.row(i) << r.solution.state(t(i)).transpose(), r.solution.costate(t(i)).transpose();
    }
    return out;
  }
};

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Least-squares solver for linear ODEs with constrained expressions";

  static py::exception<Error> error(mod, "TfcError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), (e.code() + ": " + e.what()).c_str());
    }
  });

  py::class_<Problem>(mod, "Problem")
      .def_static(
          "from_catalog", [](const std::string& id) { return Problem{catalog_entry(id).problem}; },
          py::arg("id"))
      .def_static(
          "from_file", [](const std::filesystem::path& p) { return Problem{load_problem_file(p)}; },
          py::arg("path"))
      .def_static(
          "from_json", [](const std::string& text) { return Problem{parse_problem(text)}; },
          py::arg("text"))
      .def("to_json", [](const Problem& p) { return serialize_problem(p.spec); })
      .def_property_readonly("id", &Problem::id)
      .def_property_readonly("kind", &Problem::kind)
      .def_property_readonly(
          "interval",
          [](const Problem& p) {
            return std::visit(
                [](const auto& s) {
                  if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ScalarProblemSpec>) {
                    return std::pair{s.t1, s.t2};
                  } else {
                    return std::pair{s.t0, s.tf};
                  }
                },
                p.spec);
          })
      .def("__repr__",
           [](const Problem& p) { return "<Problem " + p.id() + " (" + p.kind() + ")>"; });

  py::class_<ScalarResult>(mod, "Solution")
      .def_property_readonly("m", [](const ScalarResult& r) { return r.s.solution.m(); })
      .def_property_readonly(
          "case", [](const ScalarResult& r) { return std::string(to_string(r.s.case_id)); })
      .def_property_readonly("fit", [](const ScalarResult& r) { return fit_dict(r.s.fit); })
      .def("__call__", &ScalarResult::evaluate, py::arg("t"),
           "Rows of (y, dy/dt, d2y/dt2) at the given times.");

  py::class_<ControlResult>(mod, "ControlSolution")
      .def_property_readonly("fit", [](const ControlResult& r) { return fit_dict(r.r.fit); })
      .def_property_readonly("dropped_columns",
                             [](const ControlResult& r) { return r.r.dropped_columns; })
      .def("__call__", &ControlResult::evaluate, py::arg("t"),
           "Rows of (x1, x2, lambda1, lambda2) at the given times.");

  mod.def("catalog_ids", [] {
    std::vector<std::string> ids;
    for (const auto& c : catalog()) ids.push_back(c.id);
    return ids;
  });

  mod.def(
      "solve",
      [](const Problem& p, std::optional<int> m, std::optional<int> N,
         std::optional<std::string> scaling) {
        const ScalarProblemSpec& s = p.scalar();
        const auto pcs = s.point_constraints();
        return ScalarResult{solve_problem(s.to_ode(), pcs, config_for(p, m, N, scaling))};
      },
      py::arg("problem"), py::arg("m") = py::none(), py::arg("N") = py::none(),
      py::arg("scaling") = py::none());

  mod.def(
      "sweep",
      [](const Problem& p, std::optional<int> m_min, std::optional<int> m_max,
         std::optional<int> N) {
        const ScalarProblemSpec& s = p.scalar();
        const auto pcs = s.point_constraints();
        const SolveReport r =
            m_sweep(s.to_ode(), pcs, m_min.value_or(s.solver.m_min), m_max.value_or(s.solver.m_max),
                    config_for(p, std::nullopt, N, std::nullopt));
        py::dict d;
        d["classification"] = std::string(to_string(r.classification));
        d["best_m"] = r.best_m;
        py::list rows;
        for (const auto& row : r.per_m) rows.append(row_dict(row));
        d["rows"] = rows;
        return d;
      },
      py::arg("problem"), py::arg("m_min") = py::none(), py::arg("m_max") = py::none(),
      py::arg("N") = py::none());

  mod.def(
      "solve_control",
      [](const Problem& p, std::optional<int> m, std::optional<int> N) {
        const ControlProblemSpec& c = p.control();
        return ControlResult{
            solve_state_costate(c.to_problem(), config_for(p, m, N, std::nullopt))};
      },
      py::arg("problem"), py::arg("m") = py::none(), py::arg("N") = py::none());

  mod.def(
      "chebyshev", [](int m_max, int d_max, double x) { return eval_basis(m_max, d_max, x).table; },
      py::arg("m_max"), py::arg("d_max"), py::arg("x"),
      "table[d][k] = d-th x-derivative of T_k at x.");
}
