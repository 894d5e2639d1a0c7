#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>

#include "tfc/collocation.hpp"
#include "tfc/error.hpp"
#include "tfc/optimal_control.hpp"
#include "tfc/oracle.hpp"
#include "tfc/problem_file.hpp"

namespace tfc::cli {

using nlohmann::json;

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void dump_value(const json& j, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump_value(it.value(), depth + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_value(j[i], depth + 1, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_real(v) : "null";
      return;
    }
    default: out += j.dump();
  }
}

}  // namespace

std::string dump_json(const json& j) {
  std::string out;
  dump_value(j, 0, out);
  out += "\n";
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("IOError", "cannot open " + tmp.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) throw Error("IOError", "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("IOError", "cannot rename into " + path.string() + ": " + ec.message());
  }
}

MRange parse_m_range(std::string_view text) {
  auto to_int = [&](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("--m: expected INT or A..B, got '" + std::string(text) + "'");
    }
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    const int m = to_int(text);
    return {m, m};
  }
  MRange r{to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
  if (r.hi < r.lo) throw ConfigError("--m: range upper bound is below lower bound");
  return r;
}

namespace {

struct Options {
  std::string problem;
  std::string m;
  std::optional<int> N;
  std::string out_dir = ".";
  std::string scaling;
  std::string nodes;
};

struct LoadedProblem {
  ProblemFile problem;
  const CatalogProblem* entry = nullptr;  // set for catalog:<id>
};

LoadedProblem load(const std::string& ref) {
  constexpr std::string_view prefix = "catalog:";
  if (ref.rfind(prefix, 0) == 0) {
    const CatalogProblem& e = catalog_entry(std::string_view(ref).substr(prefix.size()));
    return {e.problem, &e};
  }
  return {load_problem_file(ref), nullptr};
}

void apply_overrides(SolverSettings& s, const Options& o, bool single_m) {
  if (!o.m.empty()) {
    const MRange r = parse_m_range(o.m);
    if (single_m) {
      if (r.lo != r.hi) throw ConfigError("--m: this command takes a single value");
      s.m = r.lo;
      s.m_max = std::max(s.m_max, s.m);
      s.m_min = std::min(s.m_min, s.m);
    } else {
      s.m_min = r.lo;
      s.m_max = r.hi;
    }
  }
  if (o.N) s.N = *o.N;
  if (!o.scaling.empty()) s.scaling = scaling_from_string(o.scaling);
  if (!o.nodes.empty()) s.nodes = node_layout_from_string(o.nodes);
}

std::filesystem::path prepare_out(const Options& o) {
  std::filesystem::path dir(o.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("IOError", "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

json settings_json(const SolverSettings& s) {
  return {{"N", s.N},
          {"scaling", std::string(to_string(s.scaling))},
          {"nodes", std::string(to_string(s.nodes))},
          {"weighted", s.weights.has_value()}};
}

json fit_json(const LeastSquaresFit& f) {
  return {{"residual_mean", f.residual_mean},
          {"residual_abs_mean", f.residual_abs_mean},
          {"residual_std", f.residual_std},
          {"cond_PtP", f.cond_PtP},
          {"rank_deficient", f.rank_deficient}};
}

std::vector<double> uniform_points(double a, double b, int count) {
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = a + (b - a) * i / (count - 1);
  t.back() = b;
  return t;
}

// Error measures of a scalar solution: ODE residual, constraint violation
// and, when available, deviation from the analytic solution.
json scalar_checks(const ScalarProblemSpec& spec, const LinearODE2& ode, const Solution& sol,
                   const LoadedProblem& lp) {
  const auto pcs = spec.point_constraints();
  double de = 0.0;
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;
  const bool analytic = lp.entry && lp.entry->analytic;
  for (double t : uniform_points(spec.t1, spec.t2, 1001)) {
    const Jet y = sol.at(t);
    de = std::max(de, std::abs(residual_t(ode, t, y)));
    if (analytic) {
      const Jet a = (*lp.entry->analytic)(t);
      e0 = std::max(e0, std::abs(y.value - a.value));
      e1 = std::max(e1, std::abs(y.d1 - a.d1));
      e2 = std::max(e2, std::abs(y.d2 - a.d2));
    }
  }
  double cons = 0.0;
  for (const auto& pc : pcs) {
    const Jet y = sol.at(pc.t);
    const double got = pc.order == 0 ? y.value : pc.order == 1 ? y.d1 : y.d2;
    cons = std::max(cons, std::abs(got - pc.value));
  }
  json j = {{"max_de_residual", de}, {"max_constraint_error", cons}};
  if (analytic) {
    j["max_error"] = e0;
    j["max_error_d1"] = e1;
    j["max_error_d2"] = e2;
  }
  return j;
}

int solve_scalar(ScalarProblemSpec spec, const LoadedProblem& lp, const Options& o,
                 std::ostream& out) {
  apply_overrides(spec.solver, o, true);
  spec.validate();
  const LinearODE2 ode = spec.to_ode();
  const auto pcs = spec.point_constraints();
  const CollocationConfig cfg = spec.solver.config();
  const LSSolution res = solve_problem(ode, pcs, cfg);

  const auto dir = prepare_out(o);
  std::string csv = "t,y,dy,ddy,residual\n";
  const DomainMap map(spec.t1, spec.t2);
  for (double x : collocation_nodes(cfg.N, cfg.nodes)) {
    const double t = map.to_t(x);
    const Jet y = res.solution.at(t);
    csv += format_real(t) + "," + format_real(y.value) + "," + format_real(y.d1) + "," +
           format_real(y.d2) + "," + format_real(residual_t(ode, t, y)) + "\n";
  }
  write_file_atomic(dir / "solution.csv", csv);

  json report = {{"command", "solve"},
                 {"problem", spec.id},
                 {"kind", std::string(to_string(spec.kind))},
                 {"case", std::string(to_string(res.case_id))},
                 {"m", cfg.m},
                 {"settings", settings_json(spec.solver)},
                 {"fit", fit_json(res.fit)},
                 {"checks", scalar_checks(spec, ode, res.solution, lp)}};
  write_file_atomic(dir / "report.json", dump_json(report));

  out << spec.id << ": case " << to_string(res.case_id) << ", m=" << cfg.m
      << ", residual_std=" << format_real(res.fit.residual_std) << "\n";
  return kExitOk;
}

int sweep_scalar(ScalarProblemSpec spec, const LoadedProblem& lp, const Options& o,
                 bool classify_exit, std::ostream& out) {
  apply_overrides(spec.solver, o, false);
  spec.validate();
  const LinearODE2 ode = spec.to_ode();
  const auto pcs = spec.point_constraints();
  const CollocationConfig base = spec.solver.config();
  const SolveReport rep = m_sweep(ode, pcs, spec.solver.m_min, spec.solver.m_max, base);

  const auto dir = prepare_out(o);
  std::string csv = "m,residual_mean,residual_abs_mean,residual_std,cond,rank_deficient,error\n";
  for (const auto& r : rep.per_m) {
    csv += std::to_string(r.m) + "," + format_real(r.residual_mean) + "," +
           format_real(r.residual_abs_mean) + "," + format_real(r.residual_std) + "," +
           format_real(r.cond_PtP) + "," + (r.rank_deficient ? "1" : "0") + "," +
           csv_quote(r.error) + "\n";
  }
  write_file_atomic(dir / "sweep.csv", csv);

  json report = {{"command", classify_exit ? "classify" : "sweep"},
                 {"problem", spec.id},
                 {"kind", std::string(to_string(spec.kind))},
                 {"m_range", {spec.solver.m_min, spec.solver.m_max}},
                 {"settings", settings_json(spec.solver)},
                 {"classification", std::string(to_string(rep.classification))},
                 {"best_m", rep.best_m}};
  if (lp.entry && lp.entry->expected_class) {
    report["expected_classification"] = std::string(to_string(*lp.entry->expected_class));
  }
  if (rep.best_m > 0) {
    CollocationConfig cfg = base;
    cfg.m = rep.best_m;
    const LSSolution best = solve_problem(ode, pcs, cfg);
    report["best"] = {{"fit", fit_json(best.fit)},
                      {"checks", scalar_checks(spec, ode, best.solution, lp)}};
  }
  write_file_atomic(dir / "report.json", dump_json(report));

  out << spec.id << ": " << to_string(rep.classification) << " (best_m=" << rep.best_m << ")\n";
  if (!classify_exit) return kExitOk;
  switch (rep.classification) {
    case Classification::no_solution: return kExitNoSolution;
    case Classification::infinite_solutions: return kExitInfinite;
    default: return kExitOk;
  }
}

int solve_control(ControlProblemSpec spec, const Options& o, std::ostream& out) {
  apply_overrides(spec.solver, o, true);
  spec.validate();
  const StateCostateProblem p = spec.to_problem();
  const CollocationConfig cfg = spec.solver.config();
  const StateCostateResult res = solve_state_costate(p, cfg);
  const StateCostateSolution& s = res.solution;

  const auto dir = prepare_out(o);
  const DomainMap map(p.t0, p.tf);
  std::string csv = "t,x1,x2,lambda1,lambda2,residual\n";
  for (double xn : collocation_nodes(cfg.N, cfg.nodes)) {
    const double t = map.to_t(xn);
    const Eigen::Vector2d x = s.state(t), l = s.costate(t);
    const double r = max_dynamics_residual(p, s, std::span<const double>(&t, 1));
    csv += format_real(t) + "," + format_real(x(0)) + "," + format_real(x(1)) + "," +
           format_real(l(0)) + "," + format_real(l(1)) + "," + format_real(r) + "\n";
  }
  write_file_atomic(dir / "solution.csv", csv);

  constexpr int kOracleSteps = 4000;
  const Trajectory ref = shoot_state_costate(p, kOracleSteps);
  double ex = 0.0, el = 0.0;
  for (std::size_t i = 0; i < ref.t.size(); i += 20) {
    const Eigen::Vector2d x = s.state(ref.t[i]), l = s.costate(ref.t[i]);
    ex = std::max({ex, std::abs(x(0) - ref.y[i][0]), std::abs(x(1) - ref.y[i][1])});
    el = std::max({el, std::abs(l(0) - ref.y[i][2]), std::abs(l(1) - ref.y[i][3])});
  }
  const auto grid = uniform_points(p.t0, p.tf, 1001);

  json report = {{"command", "control"},
                 {"problem", spec.id},
                 {"kind", "control"},
                 {"m", cfg.m},
                 {"settings", settings_json(spec.solver)},
                 {"fit", fit_json(res.fit)},
                 {"dropped_columns", res.dropped_columns},
                 {"checks",
                  {{"max_dynamics_residual", max_dynamics_residual(p, s, grid)},
                   {"oracle_max_state_error", ex},
                   {"oracle_max_costate_error", el}}}};
  write_file_atomic(dir / "report.json", dump_json(report));

  out << spec.id << ": control, m=" << cfg.m
      << ", residual_std=" << format_real(res.fit.residual_std) << "\n";
  return kExitOk;
}

bool is_config_error(const std::string& code) {
  return code == "ParseError" || code == "ConfigError" || code == "UnknownCase" ||
         code == "SingularConstraintSet" || code == "InvalidArgument";
}

void add_common(CLI::App* sub, Options& o, const char* m_help) {
  sub->add_option("problem", o.problem, "problem JSON file or catalog:<id>")->required();
  sub->add_option("--m", o.m, m_help);
  sub->add_option("--N", o.N, "collocation node count");
  sub->add_option("--out", o.out_dir, "output directory");
  sub->add_option("--scaling", o.scaling, "column_norm | none");
  sub->add_option("--nodes", o.nodes, "uniform | lobatto");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least-squares solver for linear second-order ODEs", "tfc-solve"};
  app.require_subcommand(1);
  Options o;
  CLI::App* solve = app.add_subcommand("solve", "solve at one basis size");
  CLI::App* sweep = app.add_subcommand("sweep", "residual and conditioning sweep over m");
  CLI::App* classify = app.add_subcommand("classify", "sweep and classify solvability");
  CLI::App* control = app.add_subcommand("control", "solve a state/costate problem");
  add_common(solve, o, "highest Chebyshev index");
  add_common(sweep, o, "INT or A..B");
  add_common(classify, o, "INT or A..B");
  add_common(control, o, "highest Chebyshev index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[UsageError]: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const LoadedProblem lp = load(o.problem);
    const auto* scalar = std::get_if<ScalarProblemSpec>(&lp.problem);
    const auto* ctrl = std::get_if<ControlProblemSpec>(&lp.problem);
    if (control->parsed() || (solve->parsed() && ctrl)) {
      if (!ctrl) throw ConfigError("control: problem kind must be 'control'");
      return solve_control(*ctrl, o, out);
    }
    if (!scalar) throw ConfigError("problem kind 'control' requires the control command");
    if (solve->parsed()) return solve_scalar(*scalar, lp, o, out);
    return sweep_scalar(*scalar, lp, o, classify->parsed(), out);
  } catch (const Error& e) {
    err << "error[" << e.code() << "]: " << e.what() << "\n";
    return is_config_error(e.code()) ? kExitConfig : kExitError;
  } catch (const std::exception& e) {
    err << "error[Internal]: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace tfc::cli
