#include "critlimit/solve.hpp"

#include <cmath>
#include <numeric>
#include <span>

#include "critlimit/parallel.hpp"

namespace critlimit {

const char* to_string(PathOutcome::Status status) {
  switch (status) {
    case PathOutcome::Status::Finite:
      return "finite";
    case PathOutcome::Status::AtInfinity:
      return "infinity";
    case PathOutcome::Status::TrackFailure:
      return "failure";
  }
  return "?";
}

std::size_t SolveReport::count(PathOutcome::Status status) const {
  return static_cast<std::size_t>(
      std::count_if(paths.begin(), paths.end(), [&](const PathOutcome& p) { return p.status == status; }));
}

std::vector<CVec> SolveReport::finite_nonsingular() const {
  std::vector<CVec> out;
  for (const auto& p : paths) {
    if (p.status == PathOutcome::Status::Finite && !p.singular) out.push_back(p.endpoint);
  }
  return out;
}

std::pair<PolySystem, std::vector<CVec>> total_degree_start(const PolySystem& target) {
  if (!target.is_square()) throw InputError("total-degree start needs a square system");
  const std::size_t n = target.num_unknowns();
  std::vector<int> degrees;
  for (const auto& eq : target.equations) degrees.push_back(eq.degree_in(target.unknowns));
  TotalDegreeStart start(degrees);

  PolySystem sys;
  sys.vars = target.vars;
  sys.unknowns = target.unknowns;
  const std::size_t ring = target.vars.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto v = Polynomial::variable(ring, target.unknowns[i]);
    sys.equations.push_back(v.pow(static_cast<unsigned>(degrees[i])) - Polynomial::constant(ring, 1.0));
  }
  std::vector<CVec> points;
  points.reserve(start.num_paths());
  for (std::size_t k = 0; k < start.num_paths(); ++k) points.push_back(start.start_point(k).head(n));
  return {std::move(sys), std::move(points)};
}

double relative_residual(const PolySystem& sys, const CVec& x) {
  std::vector<Complex> pt(x.data(), x.data() + x.size());
  double num = 0.0, scale = 1.0;
  for (const auto& eq : sys.equations) {
    num += std::norm(eq.evaluate(pt));
    scale = std::max(scale, absolute_value_bound(eq, pt));
  }
  return std::sqrt(num) / scale;
}

namespace {

// Descent parameters for the start homotopy; see PathRunner::run.
constexpr int kMaxDescent = 40;
constexpr double kSettledChange = 1e-3;
constexpr double kInfinityNorm = 1e3;
constexpr std::size_t kValuationWindow = 4;
constexpr double kMinValuation = 0.1;
constexpr double kValuationSpread = 0.1;
// A path whose tracking breaks down is judged by a weaker norm test, or by a
// single explosive ring.
constexpr double kFailedInfinityNorm = 1e2;
constexpr double kBurstNorm = 1e5;
constexpr double kBurstValuation = -1.0;

void check_plain_system(const PolySystem& target) {
  if (!target.is_square()) throw InputError("system must be square");
  if (target.parameter || target.vars.size() != target.num_unknowns()) {
    throw InputError("system must have every variable as an unknown");
  }
  for (std::size_t i = 0; i < target.num_unknowns(); ++i) {
    if (target.unknowns[i] != i) throw InputError("unknowns must follow ring order");
  }
}

struct PathRunner {
  const ProjectiveHomotopy& H;
  const PolySystem& target;
  const CompiledSystem& affine;
  const SolveOptions& opts;

  PathOutcome run(HomotopyEvaluator& eval, std::size_t index, const TrackerConfig& tcfg) const {
    PathOutcome out;
    out.path_id = index;
    PathTracker tracker(eval, H.dim(), tcfg);
    PathState st;
    st.s = 1.0;
    st.point = H.start_point(index);
    st.step_size = tcfg.initial_step;
    if (tracker.advance(ParamPath::ray(1.0), st, tcfg.s_endgame) != SegmentStatus::Reached) return out;

    // Radial descent in log |tau| watching the affine coordinates: a steady
    // negative valuation means the path leaves every ball, and such paths
    // often end on positive-dimensional sets at infinity where loops never close.
    const double ratio = opts.endgame.ratio;
    double r = tcfg.s_endgame;
    CVec prev_x = H.dehomogenize(st.point);
    std::vector<double> vals;
    auto steady = [&] {
      if (vals.size() < kValuationWindow) return false;
      const auto tail = std::span<const double>(vals).last(kValuationWindow);
      const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
      return *hi <= -kMinValuation && *hi - *lo <= kValuationSpread;
    };
    auto escaping = [&](double an) { return an >= kInfinityNorm && steady(); };
    for (int k = 0; k < kMaxDescent; ++k) {
      PathState rs;
      rs.s = std::log(r);
      rs.point = st.point;
      rs.step_size = 0.2;
      const auto status = tracker.advance(ParamPath::log_ray(1.0), rs, std::log(r * ratio), -std::log(ratio));
      if (status != SegmentStatus::Reached) {
        // Valuation over the partial ring up to the last accepted point.
        const double an = H.affine_norm(rs.point);
        const double dl = rs.s - std::log(r);
        const double prev_norm = prev_x.cwiseAbs().maxCoeff();
        if (dl < 0.05 * std::log(ratio) && prev_norm > 0.0) vals.push_back(std::log(an / prev_norm) / dl);
        const bool burst = an >= kBurstNorm && !vals.empty() && vals.back() <= kBurstValuation;
        if ((an >= kFailedInfinityNorm && steady()) || burst) out.status = PathOutcome::Status::AtInfinity;
        return out;
      }
      st.point = rs.point;
      r *= ratio;
      const double an = H.affine_norm(st.point);
      if (an > opts.endgame.divergence_bound) {
        out.status = PathOutcome::Status::AtInfinity;
        return out;
      }
      CVec x = H.dehomogenize(st.point);
      const double prev_norm = prev_x.cwiseAbs().maxCoeff();
      vals.push_back(prev_norm > 0.0 ? std::log(std::max(an, 1e-300) / prev_norm) / std::log(ratio) : 0.0);
      const double change = (x - prev_x).norm() / (1.0 + x.norm());
      prev_x = std::move(x);
      if (change <= kSettledChange) break;
      if (escaping(an)) {
        out.status = PathOutcome::Status::AtInfinity;
        return out;
      }
    }

    EndgameConfig ecfg = opts.endgame;
    ecfg.r0 = r;
    ecfg.detect_divergence = false;
    ecfg.primary = -1;
    auto eg = cauchy_endgame(tracker, 1.0, st.point, ecfg);
    if (eg.status != EndgameResult::Status::Converged) return out;
    out.winding_number = eg.winding_number;

    if (H.affine_norm(eg.limit) > opts.endgame.divergence_bound) {
      out.status = PathOutcome::Status::AtInfinity;
      return out;
    }
    CVec x = H.dehomogenize(eg.limit);
    if (relative_smallest_singular_value(affine, x) < opts.singular_tol) {
      out.singular = true;
    } else {
      auto refined = newton_refine(affine, x, 8, 1e-12);
      x = refined.point;
    }
    out.residual = relative_residual(target, x);
    out.endpoint = std::move(x);
    if (out.residual <= opts.final_tol) out.status = PathOutcome::Status::Finite;
    return out;
  }
};

}  // namespace

SolveReport solve_system(const PolySystem& target, const SolveOptions& opts, std::uint64_t seed) {
  check_plain_system(target);
  const std::size_t n = target.num_unknowns();
  Rng rng(seed);
  SolveReport report;
  report.seed = seed;
  report.gamma = rng.unit_complex();

  VariableGroups groups = opts.groups;
  if (!opts.multihom || groups.size() < 2) {
    groups.assign(1, std::vector<std::size_t>(n));
    std::iota(groups.front().begin(), groups.front().end(), 0);
  }
  std::shared_ptr<const StartSystem> start;
  if (groups.size() > 1) {
    start = std::make_shared<LinearProductStart>(group_degrees(target, groups), groups, n, rng);
    report.start_kind = "multihomogeneous";
  } else {
    std::vector<int> degrees;
    for (const auto& eq : target.equations) degrees.push_back(eq.total_degree());
    start = std::make_shared<TotalDegreeStart>(degrees);
    report.start_kind = "total-degree";
  }
  ProjectiveHomotopy H(target, groups, start, report.gamma, rng);
  const CompiledSystem affine(target.equations);
  PathRunner runner{H, target, affine, opts};

  const std::size_t total = H.num_paths();
  report.paths.resize(total);
  auto make = [&] { return H.make_evaluator(); };
  parallel_for(total, opts.threads, make, [&](auto& eval, std::size_t i) {
    report.paths[i] = runner.run(*eval, i, opts.tracker);
  });

  // Two paths landing on the same nonsingular solution means one of them
  // jumped; retrack both with tighter settings.
  std::vector<std::size_t> finite;
  for (std::size_t i = 0; i < total; ++i) {
    if (report.paths[i].status == PathOutcome::Status::Finite && !report.paths[i].singular) finite.push_back(i);
  }
  std::vector<std::size_t> suspects;
  for (std::size_t a = 0; a < finite.size(); ++a) {
    for (std::size_t b = a + 1; b < finite.size(); ++b) {
      const CVec& p = report.paths[finite[a]].endpoint;
      const CVec& q = report.paths[finite[b]].endpoint;
      if ((p - q).norm() <= opts.duplicate_tol * (1.0 + p.norm())) {
        suspects.push_back(finite[a]);
        suspects.push_back(finite[b]);
      }
    }
  }
  std::sort(suspects.begin(), suspects.end());
  suspects.erase(std::unique(suspects.begin(), suspects.end()), suspects.end());
  if (!suspects.empty()) {
    TrackerConfig tight = opts.tracker;
    tight.max_step /= 4.0;
    tight.initial_step /= 4.0;
    tight.max_first_correction /= 100.0;
    parallel_for(suspects.size(), opts.threads, make, [&](auto& eval, std::size_t k) {
      auto p = runner.run(*eval, suspects[k], tight);
      p.retracked = true;
      report.paths[suspects[k]] = std::move(p);
    });
  }

  const std::size_t failures = report.count(PathOutcome::Status::TrackFailure);
  if (opts.enforce_budget && double(failures) > opts.failure_budget * double(total)) {
    throw PathBudgetError(std::to_string(failures) + " of " + std::to_string(total) +
                              " paths failed; rerun with a different --seed",
                          failures, total);
  }
  return report;
}

Complex random_t0(Rng& rng) { return rng.annulus(0.5, 1.5); }

std::optional<std::vector<CVec>> track_from_witness(const GenericWitness& witness, const PolySystem& target,
                                                    const SolveOptions& opts, std::uint64_t seed) {
  check_plain_system(target);
  check_plain_system(witness.system);
  const std::size_t n = target.num_unknowns();
  if (witness.system.num_unknowns() != n) throw InputError("witness and target differ in size");
  Rng rng(seed);
  const Complex gamma = rng.unit_complex();

  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), 0);
  PolySystem P;
  P.vars = target.vars;
  P.vars.add(P.vars.fresh_name("tau"));
  P.unknowns = index;
  P.parameter = n;
  const Polynomial tau = Polynomial::variable(n + 1, n);
  const Polynomial one = Polynomial::constant(n + 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Polynomial a = witness.system.equations[i].embed(index, n + 1);
    const Polynomial b = target.equations[i].embed(index, n + 1);
    P.equations.push_back(gamma * (tau * a) + (one - tau) * b);
  }
  const ParameterHomotopy H(P);
  const CompiledSystem affine(target.equations);

  const std::size_t count = witness.solutions.size();
  std::vector<std::optional<CVec>> ends(count);
  parallel_for(
      count, opts.threads, [&] { return H.make_evaluator(); },
      [&](auto& eval, std::size_t i) {
        PathTracker tracker(*eval, H.dim(), opts.tracker);
        PathState st;
        st.s = 1.0;
        st.point = witness.solutions[i];
        st.step_size = opts.tracker.initial_step;
        if (tracker.advance(ParamPath::ray(1.0), st, 0.0) != SegmentStatus::Reached) return;
        auto refined = newton_refine(affine, st.point, 8, opts.singular_tol);
        if (refined.refused || relative_residual(target, refined.point) > opts.final_tol) return;
        ends[i] = std::move(refined.point);
      });

  std::vector<CVec> out;
  for (auto& e : ends) {
    if (!e) return std::nullopt;
    for (const auto& q : out) {
      if ((*e - q).norm() <= opts.duplicate_tol * (1.0 + q.norm())) return std::nullopt;
    }
    out.push_back(std::move(*e));
  }
  return out;
}

GenericSolve solve_generic(const CriticalFamily& fam, const VarietySpec& X, Complex t0, const SolveOptions& opts,
                           std::uint64_t seed, const GenericWitness* witness) {
  GenericSolve out;
  out.t0 = t0;
  auto on_reg = [&](const CVec& p) {
    std::vector<Complex> x(p.data(), p.data() + fam.ambient_dim);
    return on_regular_locus(X, x);
  };
  if (witness) {
    const PolySystem target = specialize_t(fam, t0);
    if (auto ends = track_from_witness(*witness, target, opts, seed)) {
      out.report.seed = seed;
      out.report.start_kind = "witness";
      for (std::size_t i = 0; i < ends->size(); ++i) {
        PathOutcome p;
        p.status = PathOutcome::Status::Finite;
        p.path_id = i;
        p.endpoint = (*ends)[i];
        p.residual = relative_residual(target, p.endpoint);
        out.report.paths.push_back(p);
        if (on_reg(p.endpoint)) out.solutions.push_back(p.endpoint);
      }
      return out;
    }
  }
  SolveOptions o = opts;
  if (o.multihom && o.groups.empty() && fam.multiplier_count > 0) {
    std::vector<std::size_t> xs(fam.ambient_dim), ls(fam.multiplier_count);
    std::iota(xs.begin(), xs.end(), 0);
    std::iota(ls.begin(), ls.end(), fam.ambient_dim);
    o.groups = {xs, ls};
  }
  out.report = solve_system(specialize_t(fam, t0), o, seed);
  for (const auto& p : out.report.paths) {
    if (p.status == PathOutcome::Status::Finite && !p.singular && on_reg(p.endpoint)) out.solutions.push_back(p.endpoint);
  }
  return out;
}

}  // namespace critlimit
