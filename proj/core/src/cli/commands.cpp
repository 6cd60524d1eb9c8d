#include "critlimit/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "critlimit/cli/report.hpp"

namespace critlimit::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kToleranceKeys = {"tol",          "cluster_radius",   "membership_tol", "endgame_radius",
                                                 "divergence_bound", "path_tol",     "final_tol",      "singular_tol",
                                                 "failure_budget"};

LimitOptions resolve_options(const Problem& p, const RunOptions& ro) {
  LimitOptions lo;
  for (const auto& [key, value] : p.tolerances.items()) {
    if (std::find(kToleranceKeys.begin(), kToleranceKeys.end(), key) == kToleranceKeys.end()) {
      throw InputError("unknown tolerance \"" + key + "\"");
    }
    if (!value.is_number()) throw InputError("tolerance \"" + key + "\" must be a number");
  }
  auto tol = [&](const char* key, double fallback) {
    return p.tolerances.contains(key) ? p.tolerances.at(key).get<double>() : fallback;
  };
  lo.tol = ro.tol.value_or(tol("tol", lo.tol));
  lo.cluster_radius = tol("cluster_radius", lo.cluster_radius);
  lo.membership_tol = tol("membership_tol", lo.membership_tol);
  const double r0 = ro.endgame_radius.value_or(tol("endgame_radius", lo.solve.endgame.r0));
  lo.solve.endgame.r0 = r0;
  lo.solve.tracker.s_endgame = r0;
  lo.solve.endgame.divergence_bound = ro.divergence_bound.value_or(tol("divergence_bound", lo.solve.endgame.divergence_bound));
  lo.solve.tracker.path_tol = tol("path_tol", lo.solve.tracker.path_tol);
  lo.solve.final_tol = tol("final_tol", lo.solve.final_tol);
  lo.solve.singular_tol = tol("singular_tol", lo.solve.singular_tol);
  lo.solve.failure_budget = tol("failure_budget", lo.solve.failure_budget);
  lo.solve.threads = std::max<std::size_t>(1, ro.threads);
  lo.solve.multihom = ro.multihom;

  if (!(r0 > 0.0 && r0 < 0.5)) throw InputError("endgame radius must lie in (0, 0.5)");
  if (!(lo.tol > 0.0) || !(lo.cluster_radius > 0.0) || !(lo.membership_tol > 0.0)) {
    throw InputError("tolerances must be positive");
  }
  if (!(lo.solve.endgame.divergence_bound > 1.0)) throw InputError("divergence bound must exceed 1");
  return lo;
}

std::uint64_t resolve_seed(const Problem& p, const RunOptions& ro, bool needs_seed) {
  if (ro.seed) return *ro.seed;
  if (p.seed) return *p.seed;
  if (needs_seed) throw InputError("the problem has random fields and no seed; set \"seed\" or pass --seed");
  return 0;
}

const Polynomial& require_f(const Problem& p) {
  if (!p.f) throw InputError("the problem has no objective f");
  return *p.f;
}

/// f and g with g = "random" resolved; the objective seed drives t0 and gamma.
ObjectiveSpec resolve_objective(const Problem& p, std::uint64_t seed) {
  Rng rng(seed);
  ObjectiveSpec obj;
  obj.f = require_f(p);
  if (p.g_random) {
    obj.g = random_linear(p.X.ambient_dim(), rng);
  } else if (p.g) {
    obj.g = *p.g;
  } else {
    throw InputError("the problem has no g; give an expression or \"random\"");
  }
  obj.seed = rng.next_seed();
  obj.validate();
  return obj;
}

PolySystem critical_system(const VarietySpec& X, const Polynomial& h) {
  if (X.ideal.size() == X.codim) return build_lagrange_system(X, h);
  if (X.parametrization) return pullback_objective(X, h);
  throw InputError("X needs a complete-intersection ideal or a parametrization");
}

json cmd_solve(const Problem& p, const LimitOptions& lo, std::uint64_t seed) {
  Rng rng(seed);
  Polynomial h;
  std::optional<Complex> t;
  json objective = json::object();
  if (p.f) {
    ObjectiveSpec obj;
    if (p.g || p.g_random) obj = resolve_objective(p, rng.next_seed());
    t = p.t ? *p.t : random_t0(rng);
    h = require_f(p);
    if (p.g || p.g_random) {
      h = h - obj.g * *t;
      objective["g"] = to_string(obj.g, p.X.coords);
    }
    objective["t"] = *t;
  } else if (p.u) {
    h = build_ed_objective(*p.u);
    objective["u"] = *p.u;
  } else {
    throw InputError("solve needs an objective f or a data point u");
  }
  const PolySystem sys = critical_system(p.X, h);
  SolveOptions so = lo.solve;
  if (so.multihom && p.X.ideal.size() == p.X.codim && !p.X.ideal.empty()) {
    so.groups = {{}, {}};
    for (std::size_t i = 0; i < p.X.ambient_dim(); ++i) so.groups[0].push_back(i);
    for (std::size_t j = 0; j < p.X.ideal.size(); ++j) so.groups[1].push_back(p.X.ambient_dim() + j);
  }
  const auto report = solve_system(sys, so, rng.next_seed());

  const bool lagrange = p.X.ideal.size() == p.X.codim;
  json out;
  out["objective"] = objective;
  out["start_system"] = report.start_kind;
  out["gamma"] = report.gamma;
  out["path_counts"] = path_counts(report);
  std::vector<CVec> regular, singular;
  for (const auto& path : report.paths) {
    if (path.status != PathOutcome::Status::Finite) continue;
    const CVec x = lagrange ? CVec(path.endpoint.head(static_cast<Eigen::Index>(p.X.ambient_dim()))) : path.endpoint;
    if (path.singular) {
      singular.push_back(x);
    } else if (!lagrange || on_regular_locus(p.X, std::vector<Complex>(x.data(), x.data() + x.size()))) {
      regular.push_back(x);
    }
  }
  out["solutions"] = sorted_points(regular);
  out["singular_solutions"] = sorted_points(singular);
  out["paths"] = path_table(report);
  return out;
}

json limit_json(const LimitComputation& lc, const VariableTable& coords) {
  json out;
  out["t0"] = lc.t0;
  out["g"] = to_string(lc.g, coords);
  out["generic"] = {{"count", lc.generic_count},
                    {"start_system", lc.generic.report.start_kind},
                    {"path_counts", path_counts(lc.generic.report)}};
  out["limit"] = point_set(lc.lhs);
  out["cardinality"] = lc.lhs.cardinality();
  out["infinity_count"] = lc.infinity_count;
  out["failure_count"] = lc.failure_count;
  out["chain_ambiguous"] = lc.chain_ambiguous;
  out["conservation_ok"] = lc.generic_count == lc.lhs.cardinality() + lc.infinity_count + lc.failure_count;
  out["paths"] = family_path_table(lc);
  return out;
}

json euler_json(const std::optional<long>& expected, std::size_t count) {
  if (!expected) return nullptr;
  return {{"expected_count", *expected}, {"generic_count", count}, {"ok", *expected == static_cast<long>(count)}};
}

json report_json(const LimitReport& r, const VariableTable& coords) {
  json out = limit_json(r.limit, coords);
  out["strata"] = strata_table(r.strata);
  out["problems"] = r.problems;
  out["theorem_verified"] = r.theorem_verified;
  out["euler"] = euler_json(r.euler_expected, r.limit.generic_count);
  return out;
}

bool report_ok(const LimitReport& r) { return r.theorem_verified && r.euler_ok.value_or(true); }

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "solve") return Command::Solve;
  if (name == "limit") return Command::Limit;
  if (name == "verify") return Command::Verify;
  if (name == "ed") return Command::Ed;
  if (name == "milnor") return Command::Milnor;
  throw InputError("unknown command " + name);
}

const char* to_string(Command c) {
  switch (c) {
    case Command::Solve:
      return "solve";
    case Command::Limit:
      return "limit";
    case Command::Verify:
      return "verify";
    case Command::Ed:
      return "ed";
    case Command::Milnor:
      return "milnor";
  }
  return "?";
}

RunResult run(Command command, const Problem& p, const RunOptions& ro) {
  const auto started = std::chrono::steady_clock::now();
  const LimitOptions lo = resolve_options(p, ro);
  const bool ed_mode = command == Command::Ed;
  const bool needs_seed = p.g_random || (ed_mode && p.u.has_value());
  const std::uint64_t seed = resolve_seed(p, ro, needs_seed);

  RunResult result;
  json& rep = result.report;
  rep["command"] = to_string(command);
  rep["problem"] = p.name;
  rep["config"] = config_json(lo, seed);
  rep["config"]["degree"] = ro.degree;

  switch (command) {
    case Command::Solve:
      rep["result"] = cmd_solve(p, lo, seed);
      break;
    case Command::Limit: {
      const ObjectiveSpec obj = resolve_objective(p, seed);
      const auto lc = limit_crit(p.X, obj, lo);
      rep["result"] = limit_json(lc, p.X.coords);
      if (p.euler) {
        rep["result"]["euler"] = euler_json(p.euler->expected_count(p.X.dimension()), lc.generic_count);
      }
      break;
    }
    case Command::Verify: {
      if (p.strata.empty()) throw InputError("verify needs strata");
      const ObjectiveSpec obj = resolve_objective(p, seed);
      const auto r = verify_main_theorem(p.X, obj, p.strata, lo, p.euler);
      rep["result"] = report_json(r, p.X.coords);
      if (!report_ok(r)) result.exit_code = exit_code::verification_failed;
      break;
    }
    case Command::Ed: {
      if (p.u) {
        if (p.strata.empty()) throw InputError("an ED limit needs strata");
        const auto r = ed_limit(p.X, *p.u, p.strata, lo, seed);
        rep["result"] = report_json(r, p.X.coords);
        rep["result"]["u"] = *p.u;
        if (!report_ok(r)) result.exit_code = exit_code::verification_failed;
      } else {
        const auto ed = ed_degree(p.X, lo, seed);
        rep["result"] = {{"ed_degree", ed.degree}, {"draws", ed.draws}, {"paths", ed.paths}};
      }
      break;
    }
    case Command::Milnor: {
      const Polynomial& f = require_f(p);
      if (p.points.empty()) throw InputError("milnor needs \"points\"");
      json list = json::array();
      for (const auto& pt : p.points) {
        list.push_back({{"point", pt}, {"multiplicity", milnor_multiplicity(f, pt, ro.degree)}});
      }
      rep["result"] = {{"points", list}};
      break;
    }
  }
  if (ro.timing) {
    rep["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return result;
}

RunResult error_result(Command command, const std::exception& e) {
  RunResult r;
  r.report["command"] = to_string(command);
  r.report["error"] = e.what();
  if (dynamic_cast<const InputError*>(&e)) {
    r.report["error_kind"] = "input";
    r.exit_code = exit_code::input_error;
  } else if (const auto* pb = dynamic_cast<const PathBudgetError*>(&e)) {
    r.report["error_kind"] = "path_failure_budget";
    r.report["failures"] = pb->failures();
    r.report["paths"] = pb->total();
    r.exit_code = exit_code::path_failure;
  } else if (dynamic_cast<const GenericityFault*>(&e)) {
    r.report["error_kind"] = "genericity";
    r.exit_code = exit_code::path_failure;
  } else if (dynamic_cast<const ConvergenceError*>(&e)) {
    r.report["error_kind"] = "convergence";
    r.exit_code = exit_code::path_failure;
  } else {
    r.report["error_kind"] = "internal";
    r.exit_code = 1;
  }
  return r;
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

}  // namespace critlimit::cli
