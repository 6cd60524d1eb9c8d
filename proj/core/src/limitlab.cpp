#include "critlimit/limitlab.hpp"

#include <cmath>
#include <numeric>

#include "critlimit/parallel.hpp"

namespace critlimit {

namespace {

bool vanishes(const Polynomial& p, std::span<const Complex> x, double tol) { return std::abs(p.evaluate(x)) <= tol; }

std::vector<Complex> as_vector(const CVec& x) { return {x.data(), x.data() + x.size()}; }

// Equations that are nonzero constants make the system inconsistent; zero
// equations make it underdetermined.
enum class Degeneracy { None, Inconsistent, Underdetermined };

Degeneracy degeneracy(const PolySystem& sys) {
  bool zero = false;
  for (const auto& eq : sys.equations) {
    if (eq.is_zero()) {
      zero = true;
    } else if (eq.is_constant()) {
      return Degeneracy::Inconsistent;
    }
  }
  return zero ? Degeneracy::Underdetermined : Degeneracy::None;
}

VariableGroups lagrange_groups(std::size_t ambient, std::size_t multipliers) {
  if (multipliers == 0) return {};
  std::vector<std::size_t> xs(ambient), ls(multipliers);
  std::iota(xs.begin(), xs.end(), 0);
  std::iota(ls.begin(), ls.end(), ambient);
  return {xs, ls};
}

}  // namespace

bool in_stratum(const StratumSpec& s, const CVec& x, double tol) {
  const auto pt = as_vector(x);
  for (const auto& q : s.ideal) {
    if (!vanishes(q, pt, tol)) return false;
  }
  for (const auto& ex : s.exclude) {
    bool all = true;
    for (const auto& q : ex) all = all && vanishes(q, pt, tol);
    if (all) return false;
  }
  return true;
}

LimitComputation limit_crit(const VarietySpec& X, const ObjectiveSpec& obj, const LimitOptions& opts) {
  const CriticalFamily fam = build_family(X, obj);
  LimitComputation lc;
  lc.seed = obj.seed;
  lc.g = obj.g;
  Rng rng(obj.seed);
  lc.t0 = random_t0(rng);
  lc.generic = solve_generic(fam, X, lc.t0, opts.solve, rng.next_seed(), opts.witness);
  lc.generic_count = lc.generic.solutions.size();

  const ParameterHomotopy H(fam.system);
  const PolySystem at_zero = specialize_t(fam, 0.0);
  const CompiledSystem zero_sys(at_zero.equations);
  const Complex dir = lc.t0 / std::abs(lc.t0);
  const auto n = static_cast<Eigen::Index>(fam.ambient_dim);

  EndgameConfig ecfg = opts.solve.endgame;
  ecfg.primary = n;
  ecfg.detect_divergence = true;
  TrackerConfig tcfg = opts.solve.tracker;

  const auto& sols = lc.generic.solutions;
  lc.paths.resize(sols.size());
  parallel_for(
      sols.size(), opts.solve.threads, [&] { return H.make_evaluator(); },
      [&](auto& eval, std::size_t i) {
        FamilyPath& out = lc.paths[i];
        out.path_id = i;
        PathTracker tracker(*eval, H.dim(), tcfg);
        PathState st;
        st.s = std::abs(lc.t0);
        st.point = sols[i];
        st.step_size = tcfg.initial_step;
        const auto status = tracker.advance(ParamPath::ray(dir), st, ecfg.r0);
        if (status == SegmentStatus::Escaped) {
          out.status = PathOutcome::Status::AtInfinity;
          return;
        }
        if (status != SegmentStatus::Reached) return;
        const auto eg = cauchy_endgame(tracker, dir, st.point, ecfg);
        out.winding_number = eg.winding_number;
        out.multipliers_diverge = eg.auxiliary_diverge;
        for (std::size_t k = 1; k < eg.estimate_history.size(); ++k) {
          out.estimate_diffs.push_back((eg.estimate_history[k] - eg.estimate_history[k - 1]).head(n).norm());
        }
        if (eg.status == EndgameResult::Status::Diverged) {
          out.status = PathOutcome::Status::AtInfinity;
          return;
        }
        if (eg.status != EndgameResult::Status::Converged) return;
        out.status = PathOutcome::Status::Finite;
        out.x = eg.limit.head(n);
        // A simple limit with finite multipliers sharpens by Newton at t = 0.
        if (!eg.auxiliary_diverge) {
          auto refined = newton_refine(zero_sys, eg.limit, 8, opts.solve.singular_tol);
          if (!refined.refused && (refined.point - eg.limit).head(n).norm() <= opts.cluster_radius) {
            out.x = refined.point.head(n);
          }
        }
      });

  std::vector<CVec> finite;
  for (const auto& p : lc.paths) {
    switch (p.status) {
      case PathOutcome::Status::Finite:
        finite.push_back(p.x);
        break;
      case PathOutcome::Status::AtInfinity:
        ++lc.infinity_count;
        break;
      case PathOutcome::Status::TrackFailure:
        ++lc.failure_count;
        break;
    }
  }
  if (finite.empty()) {
    lc.lhs = PointSet({}, opts.cluster_radius);
  } else {
    auto cl = cluster_points(finite, opts.cluster_radius);
    lc.lhs = std::move(cl.set);
    lc.chain_ambiguous = cl.chain_ambiguous;
  }
  return lc;
}

std::vector<StratumReport> strata_crit(const VarietySpec& X, std::span<const StratumSpec> strata, const Polynomial& g,
                                       const LimitOptions& opts, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<StratumReport> out;
  for (const auto& s : strata) {
    StratumReport rep;
    rep.name = s.name;
    rep.crit_g = PointSet({}, opts.cluster_radius);
    const std::uint64_t sub_seed = rng.next_seed();
    for (const auto& q : s.ideal) {
      if (q.num_vars() != X.ambient_dim()) throw InputError("stratum " + s.name + ": generator in the wrong ring");
    }

    std::vector<CVec> points;
    PolySystem sys;
    std::function<CVec(const CVec&)> to_ambient;
    SolveOptions so = opts.solve;
    if (s.parametrization) {
      VarietySpec Y;
      Y.coords = X.coords;
      Y.parametrization = s.parametrization;
      Y.codim = X.ambient_dim() - std::min(X.ambient_dim(), s.parametrization->params.size());
      sys = pullback_objective(Y, g);
      const auto& map = s.parametrization->map;
      to_ambient = [&map](const CVec& p) {
        const auto pt = as_vector(p);
        CVec x(static_cast<Eigen::Index>(map.size()));
        for (std::size_t i = 0; i < map.size(); ++i) x(static_cast<Eigen::Index>(i)) = map[i].evaluate(pt);
        return x;
      };
      so.groups.clear();
    } else {
      VarietySpec Y;
      Y.coords = X.coords;
      Y.ideal = s.ideal;
      Y.codim = s.ideal.size();
      sys = build_lagrange_system(Y, g);
      const auto n = static_cast<Eigen::Index>(X.ambient_dim());
      to_ambient = [n](const CVec& p) { return CVec(p.head(n)); };
      so.groups = lagrange_groups(X.ambient_dim(), s.ideal.size());
    }

    switch (degeneracy(sys)) {
      case Degeneracy::Inconsistent:
        out.push_back(std::move(rep));
        continue;
      case Degeneracy::Underdetermined:
        rep.solvable = false;
        rep.message = "g has a positive-dimensional critical set on the stratum";
        out.push_back(std::move(rep));
        continue;
      case Degeneracy::None:
        break;
    }
    if (sys.equations.empty()) {
      // A point given by parameters-free data: the parametrization image.
      rep.solvable = false;
      rep.message = "empty critical system";
      out.push_back(std::move(rep));
      continue;
    }

    const auto report = solve_system(sys, so, sub_seed);
    for (const auto& p : report.paths) {
      if (p.status != PathOutcome::Status::Finite || p.singular) continue;
      CVec x = to_ambient(p.endpoint);
      if (in_stratum(s, x, opts.membership_tol)) points.push_back(std::move(x));
    }
    if (!points.empty()) {
      // Crit(g|X_i) is a set: fibers of the parametrization collapse to one atom.
      auto atoms = cluster(points, opts.cluster_radius).atoms();
      for (auto& a : atoms) a.multiplicity = 1;
      rep.crit_g = PointSet(std::move(atoms), opts.cluster_radius);
      rep.crit_g.canonicalize();
    }
    out.push_back(std::move(rep));
  }
  return out;
}

Inference infer_multiplicities(const PointSet& lhs, std::vector<StratumReport> strata, double tol) {
  Inference inf;
  for (auto& s : strata) {
    s.n.reset();
    s.vacuous = false;
    if (!s.solvable) {
      inf.problems.push_back("stratum " + s.name + " could not be solved: " + s.message);
      continue;
    }
    if (s.crit_g.empty()) {
      s.n = 0;
      s.vacuous = true;
      continue;
    }
    std::vector<int> ms;
    for (const auto& a : s.crit_g.atoms()) ms.push_back(lhs.multiplicity_at(a.point, tol));
    if (std::all_of(ms.begin(), ms.end(), [&](int m) { return m == ms.front(); })) {
      s.n = ms.front();
    } else {
      inf.problems.push_back("multiplicity is not constant along stratum " + s.name);
    }
  }
  for (const auto& a : lhs.atoms()) {
    int hits = 0;
    for (const auto& s : strata) {
      for (const auto& c : s.crit_g.atoms()) hits += (c.point - a.point).norm() <= tol;
    }
    if (hits == 0) inf.problems.push_back("a limit point matches no stratum critical point (stratification too coarse?)");
    if (hits > 1) inf.problems.push_back("a limit point matches critical points of several strata");
  }
  inf.strata = std::move(strata);
  return inf;
}

PointSet strata_sum(const std::vector<StratumReport>& strata, double radius) {
  std::vector<PointSet> parts;
  for (const auto& s : strata) {
    if (s.n && *s.n > 0) parts.push_back(s.crit_g.scaled(*s.n));
  }
  return sum(parts, radius);
}

std::optional<long> EulerCheck::expected_count(std::size_t dim) const {
  const long sign = dim % 2 == 0 ? 1 : -1;
  if (chi_eu_u) return sign * *chi_eu_u;
  if (chi_x && hyperplane_points) return sign * (*chi_x - *hyperplane_points);
  return std::nullopt;
}

LimitReport verify_main_theorem(const VarietySpec& X, const ObjectiveSpec& obj, std::span<const StratumSpec> strata,
                                const LimitOptions& opts, const std::optional<EulerCheck>& euler) {
  LimitReport rep;
  rep.limit = limit_crit(X, obj, opts);
  Rng rng(obj.seed ^ 0x5bd1e995ULL);
  auto crit = strata_crit(X, strata, obj.g, opts, rng.next_seed());
  auto inf = infer_multiplicities(rep.limit.lhs, std::move(crit), opts.tol);
  rep.strata = std::move(inf.strata);
  rep.problems = std::move(inf.problems);

  const auto& lc = rep.limit;
  rep.conservation_ok = lc.generic_count == lc.lhs.cardinality() + lc.infinity_count + lc.failure_count;
  const bool determined = std::all_of(rep.strata.begin(), rep.strata.end(), [](const auto& s) { return s.n.has_value(); });
  rep.theorem_verified =
      determined && rep.problems.empty() && multiset_equal(lc.lhs, strata_sum(rep.strata, opts.cluster_radius), opts.tol);
  if (euler) {
    rep.euler_expected = euler->expected_count(X.dimension());
    if (rep.euler_expected) rep.euler_ok = *rep.euler_expected == static_cast<long>(lc.generic_count);
  }
  return rep;
}

std::size_t count_points_at_infinity(const LimitComputation& lc) { return lc.infinity_count; }

std::size_t generic_crit_count(const VarietySpec& X, const ObjectiveSpec& obj, const LimitOptions& opts) {
  const CriticalFamily fam = build_family(X, obj);
  Rng rng(obj.seed);
  const Complex t0 = random_t0(rng);
  return solve_generic(fam, X, t0, opts.solve, rng.next_seed()).solutions.size();
}

EdDegree ed_degree(const VarietySpec& X, const LimitOptions& opts, std::uint64_t seed) {
  X.validate();
  if (X.ideal.size() != X.codim) throw InputError("ED degree needs a complete-intersection ideal");
  Rng rng(seed);
  EdDegree out;
  for (int draw = 0; draw < 2; ++draw) {
    std::vector<Complex> u(X.ambient_dim());
    for (auto& c : u) c = rng.coefficient();
    const PolySystem L = build_lagrange_system(X, build_ed_objective(u));
    SolveOptions so = opts.solve;
    so.groups = lagrange_groups(X.ambient_dim(), X.ideal.size());
    const auto report = solve_system(L, so, rng.next_seed());
    std::size_t count = 0;
    const auto solutions = report.finite_nonsingular();
    for (const auto& x : solutions) {
      count += on_regular_locus(X, std::vector<Complex>(x.data(), x.data() + X.ambient_dim()));
    }
    out.draws.push_back(count);
    out.paths.push_back(report.paths.size());
    if (draw == 0) out.witness = {L, solutions};
  }
  if (out.draws[0] != out.draws[1]) {
    throw GenericityFault("ED degree differs between two random data points (" + std::to_string(out.draws[0]) +
                          " vs " + std::to_string(out.draws[1]) + "); rerun with another seed");
  }
  out.degree = out.draws[0];
  return out;
}

LimitReport ed_limit(const VarietySpec& X, std::span<const Complex> u, std::span<const StratumSpec> strata,
                     const LimitOptions& opts, std::uint64_t seed) {
  if (u.size() != X.ambient_dim()) throw InputError("data point has the wrong dimension");
  Rng rng(seed);
  std::vector<Complex> eps(u.size());
  for (auto& e : eps) e = rng.coefficient();
  ObjectiveSpec obj{build_ed_objective(u), ed_perturbation(eps), rng.next_seed()};
  return verify_main_theorem(X, obj, strata, opts);
}

int milnor_multiplicity(const Polynomial& f, std::span<const Complex> P, int max_degree) {
  const std::size_t N = f.num_vars();
  if (P.size() != N) throw InputError("point has the wrong dimension");
  // Translate so that P is the origin.
  std::vector<Polynomial> shift;
  for (std::size_t i = 0; i < N; ++i) {
    shift.push_back(Polynomial::variable(N, i) + Polynomial::constant(N, P[i]));
  }
  std::vector<Polynomial> grad;
  for (std::size_t i = 0; i < N; ++i) grad.push_back(f.differentiate(i).compose(shift, N));

  // Monomials by total degree, graded lexicographic within a degree.
  std::vector<Polynomial::Exponent> monomials{Polynomial::Exponent(N, 0)};
  std::vector<std::size_t> upto{1};  // number of monomials of degree <= k
  auto extend = [&](int k) {
    std::vector<Polynomial::Exponent> next;
    for (std::size_t m = upto.size() >= 2 ? upto[upto.size() - 2] : 0; m < upto.back(); ++m) {
      for (std::size_t v = 0; v < N; ++v) {
        auto e = monomials[m];
        ++e[v];
        next.push_back(e);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    monomials.insert(monomials.end(), next.begin(), next.end());
    upto.push_back(monomials.size());
    (void)k;
  };

  int prev_dim = -1;
  for (int k = 0; k <= max_degree; ++k) {
    if (k > 0) extend(k);
    const std::size_t cols = upto[static_cast<std::size_t>(k)];
    std::map<Polynomial::Exponent, std::size_t> column;
    for (std::size_t c = 0; c < cols; ++c) column[monomials[c]] = c;

    std::vector<CVec> rows;
    for (std::size_t a = 0; a < cols; ++a) {
      const Polynomial mult = Polynomial::monomial(monomials[a], 1.0);
      for (const auto& gi : grad) {
        CVec row = CVec::Zero(static_cast<Eigen::Index>(cols));
        bool any = false;
        const Polynomial prod = mult * gi;
        for (const auto& [e, c] : prod.terms()) {
          auto it = column.find(e);
          if (it == column.end()) continue;  // above the truncation degree
          row(static_cast<Eigen::Index>(it->second)) = c;
          any = true;
        }
        if (any) rows.push_back(std::move(row));
      }
    }
    Eigen::Index rank = 0;
    if (!rows.empty()) {
      CMat M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
      for (std::size_t r = 0; r < rows.size(); ++r) M.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
      Eigen::BDCSVD<CMat> svd(M);
      const auto& sv = svd.singularValues();
      const double cut = 1e-9 * std::max(1.0, sv(0));
      for (Eigen::Index j = 0; j < sv.size(); ++j) rank += sv(j) > cut;
    }
    const int dim = static_cast<int>(cols) - static_cast<int>(rank);
    if (dim == prev_dim) return dim;
    prev_dim = dim;
  }
  throw ConvergenceError("dual space did not stabilize by degree " + std::to_string(max_degree) +
                         "; the critical point is probably not isolated");
}

}  // namespace critlimit
