#include "critlimit/cli/report.hpp"

#include <algorithm>
#include <cmath>

namespace critlimit::cli {

using nlohmann::json;

json point_json(const CVec& x) {
  json out = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i));
  return out;
}

json sorted_points(std::vector<CVec> points) {
  std::sort(points.begin(), points.end(), lex_less);
  json out = json::array();
  for (const auto& p : points) out.push_back(point_json(p));
  return out;
}

json point_set(PointSet set) {
  set.canonicalize();
  json atoms = json::array();
  for (const auto& a : set.atoms()) atoms.push_back({{"point", point_json(a.point)}, {"multiplicity", a.multiplicity}});
  const double sep = set.min_separation();
  return {{"atoms", atoms},
          {"cardinality", set.cardinality()},
          {"min_separation", std::isfinite(sep) ? json(sep) : json(nullptr)}};
}

json path_counts(const SolveReport& report) {
  std::size_t singular = 0;
  for (const auto& p : report.paths) singular += p.status == PathOutcome::Status::Finite && p.singular;
  return {{"total", report.paths.size()},
          {"finite", report.count(PathOutcome::Status::Finite)},
          {"singular", singular},
          {"infinity", report.count(PathOutcome::Status::AtInfinity)},
          {"failure", report.count(PathOutcome::Status::TrackFailure)}};
}

json path_table(const SolveReport& report) {
  json out = json::array();
  for (const auto& p : report.paths) {
    json row = {{"id", p.path_id}, {"status", to_string(p.status)}};
    if (p.status == PathOutcome::Status::Finite) {
      row["winding"] = p.winding_number;
      row["endpoint"] = point_json(p.endpoint);
      row["singular"] = p.singular;
      row["residual"] = p.residual;
    }
    out.push_back(std::move(row));
  }
  return out;
}

json family_path_table(const LimitComputation& lc) {
  json out = json::array();
  for (const auto& p : lc.paths) {
    json row = {{"id", p.path_id}, {"status", to_string(p.status)}};
    if (p.status == PathOutcome::Status::Finite) {
      row["winding"] = p.winding_number;
      row["endpoint"] = point_json(p.x);
      row["multipliers_diverge"] = p.multipliers_diverge;
    }
    out.push_back(std::move(row));
  }
  return out;
}

json strata_table(const std::vector<StratumReport>& strata) {
  json out = json::array();
  for (const auto& s : strata) {
    json row = {{"name", s.name}, {"solvable", s.solvable}, {"crit_g", point_set(s.crit_g)}, {"vacuous", s.vacuous}};
    row["n"] = s.n ? json(*s.n) : json(nullptr);
    if (!s.message.empty()) row["message"] = s.message;
    out.push_back(std::move(row));
  }
  return out;
}

json config_json(const LimitOptions& o, std::uint64_t seed) {
  const auto& t = o.solve.tracker;
  const auto& e = o.solve.endgame;
  return {
      {"seed", seed},
      {"tol", o.tol},
      {"cluster_radius", o.cluster_radius},
      {"membership_tol", o.membership_tol},
      {"multihom", o.solve.multihom},
      {"threads", o.solve.threads},
      {"failure_budget", o.solve.failure_budget},
      {"singular_tol", o.solve.singular_tol},
      {"final_tol", o.solve.final_tol},
      {"duplicate_tol", o.solve.duplicate_tol},
      {"tracker",
       {{"min_step", t.min_step},
        {"max_step", t.max_step},
        {"initial_step", t.initial_step},
        {"max_corrector_iterations", t.max_corrector_iterations},
        {"path_tol", t.path_tol},
        {"max_first_correction", t.max_first_correction},
        {"max_consecutive_failures", t.max_consecutive_failures},
        {"increase_after", t.increase_after},
        {"increase_factor", t.increase_factor},
        {"s_endgame", t.s_endgame}}},
      {"endgame",
       {{"r0", e.r0},
        {"ratio", e.ratio},
        {"min_rings", e.min_rings},
        {"max_rings", e.max_rings},
        {"loop_samples", e.loop_samples},
        {"max_winding", e.max_winding},
        {"divergence_bound", e.divergence_bound},
        {"agreement_tol", e.agreement_tol},
        {"closure_tol", e.closure_tol},
        {"spread_decay", e.spread_decay},
        {"laurent_tol", e.laurent_tol},
        {"growth_rings", e.growth_rings},
        {"min_growth_exponent", e.min_growth_exponent}}},
  };
}

}  // namespace critlimit::cli
