#pragma once

#include <optional>
#include <string>
#include <vector>

#include "critlimit/pointset.hpp"
#include "critlimit/solve.hpp"

namespace critlimit {

/// A locally closed piece of X: the zero set of `ideal` minus the zero sets
/// of the `exclude` ideals. Critical points of g on it come from a Lagrange
/// system (complete intersection) or from a parametrization.
struct StratumSpec {
  std::string name;
  std::vector<Polynomial> ideal;
  std::vector<std::vector<Polynomial>> exclude;
  std::optional<Parametrization> parametrization;
};

struct StratumReport {
  std::string name;
  PointSet crit_g;
  /// Solved successfully; otherwise `message` says why.
  bool solvable = true;
  std::optional<int> n;
  /// Crit(g|X_i) is empty, so n_i does not affect the identity and is set to 0.
  bool vacuous = false;
  std::string message;
};

struct LimitOptions {
  SolveOptions solve;
  double cluster_radius = 1e-5;
  /// Matching tolerance for multiset comparisons.
  double tol = 1e-6;
  /// Generators below this count as vanishing in stratum membership tests.
  double membership_tol = 1e-6;
  /// Solved generic member of the objective family; when set, the generic
  /// solve tracks from it instead of running the full start homotopy.
  const GenericWitness* witness = nullptr;
};

/// One path of the t-family from t0 to 0.
struct FamilyPath {
  std::size_t path_id = 0;
  PathOutcome::Status status = PathOutcome::Status::TrackFailure;
  CVec x;  // limit in ambient coordinates (Finite)
  int winding_number = 0;
  bool multipliers_diverge = false;
  std::vector<double> estimate_diffs;
};

struct LimitComputation {
  Complex t0 = 0.0;
  std::uint64_t seed = 0;
  Polynomial g;
  GenericSolve generic;
  std::vector<FamilyPath> paths;
  PointSet lhs;
  bool chain_ambiguous = false;
  std::size_t generic_count = 0;
  std::size_t infinity_count = 0;
  std::size_t failure_count = 0;
};

/// lim_{t->0} Crit((f - t g)|X_reg): solve at a random t0, track every
/// solution along the segment to 0, finish with the Cauchy endgame, and
/// cluster the x parts.
LimitComputation limit_crit(const VarietySpec& X, const ObjectiveSpec& obj, const LimitOptions& opts);

/// Crit(g|X_i) for every stratum, in ambient coordinates.
std::vector<StratumReport> strata_crit(const VarietySpec& X, std::span<const StratumSpec> strata, const Polynomial& g,
                                       const LimitOptions& opts, std::uint64_t seed);

/// Stratum membership: every generator vanishes and no exclusion ideal does.
bool in_stratum(const StratumSpec& s, const CVec& x, double tol);

struct Inference {
  std::vector<StratumReport> strata;
  std::vector<std::string> problems;
};

/// n_i as the common lhs multiplicity over the atoms of Crit(g|X_i).
Inference infer_multiplicities(const PointSet& lhs, std::vector<StratumReport> strata, double tol);

/// sum_i n_i Crit(g|X_i) over strata with determined n_i.
PointSet strata_sum(const std::vector<StratumReport>& strata, double radius);

struct EulerCheck {
  /// chi(Eu_X|U); or chi(X) and the number of points of X on a general hyperplane.
  std::optional<long> chi_eu_u;
  std::optional<long> chi_x;
  std::optional<long> hyperplane_points;

  std::optional<long> expected_count(std::size_t dim) const;
};

struct LimitReport {
  LimitComputation limit;
  std::vector<StratumReport> strata;
  std::vector<std::string> problems;
  bool theorem_verified = false;
  /// generic_count == |lhs| + infinity_count (binding only without failures).
  bool conservation_ok = false;
  std::optional<long> euler_expected;
  std::optional<bool> euler_ok;
};

LimitReport verify_main_theorem(const VarietySpec& X, const ObjectiveSpec& obj, std::span<const StratumSpec> strata,
                                const LimitOptions& opts, const std::optional<EulerCheck>& euler = std::nullopt);

std::size_t count_points_at_infinity(const LimitComputation& lc);

/// |Crit((f - t0 g)|X_reg)| at a random t0.
std::size_t generic_crit_count(const VarietySpec& X, const ObjectiveSpec& obj, const LimitOptions& opts);

struct EdDegree {
  std::size_t degree = 0;
  std::vector<std::size_t> draws;
  std::vector<std::size_t> paths;
  /// The first draw, reusable for ED limits on the same variety.
  GenericWitness witness;
};

/// Number of critical points of d_u on X_reg for random complex u; two
/// independent draws must agree or GenericityFault is raised.
EdDegree ed_degree(const VarietySpec& X, const LimitOptions& opts, std::uint64_t seed);

/// verify_main_theorem for f = d_u and g = 2 sum eps_i x_i with random eps.
LimitReport ed_limit(const VarietySpec& X, std::span<const Complex> u, std::span<const StratumSpec> strata,
                     const LimitOptions& opts, std::uint64_t seed);

/// Dimension of the local algebra C[x]_P / <grad f> via the Macaulay dual
/// space; ConvergenceError when it does not stabilize by `max_degree`.
int milnor_multiplicity(const Polynomial& f, std::span<const Complex> P, int max_degree = 20);

}  // namespace critlimit
