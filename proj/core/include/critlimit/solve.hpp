#pragma once

#include <optional>

#include <string>
#include <utility>

#include "critlimit/critsys.hpp"
#include "critlimit/endgame.hpp"

namespace critlimit {

struct SolveOptions {
  TrackerConfig tracker;
  /// r0 is taken from tracker.s_endgame; divergence is judged projectively.
  EndgameConfig endgame;
  /// Use a linear-product start system over `groups` instead of total degree.
  bool multihom = false;
  VariableGroups groups;
  std::size_t threads = 1;
  /// Largest tolerated fraction of failed paths before PathBudgetError.
  double failure_budget = 0.05;
  bool enforce_budget = true;
  /// Endpoints whose relative smallest Jacobian singular value is below this are singular.
  double singular_tol = 1e-8;
  /// Relative residual bound for a Finite endpoint.
  double final_tol = 1e-8;
  double duplicate_tol = 1e-8;
};

struct PathOutcome {
  enum class Status { Finite, AtInfinity, TrackFailure };
  Status status = Status::TrackFailure;
  CVec endpoint;
  int winding_number = 0;
  double residual = 0.0;
  std::size_t path_id = 0;
  bool singular = false;
  bool retracked = false;
};

const char* to_string(PathOutcome::Status status);

struct SolveReport {
  std::vector<PathOutcome> paths;
  Complex gamma = 0.0;
  std::uint64_t seed = 0;
  std::string start_kind;

  std::size_t count(PathOutcome::Status status) const;
  std::vector<CVec> finite_nonsingular() const;
};

/// The affine start system {z_i^{d_i} - 1} and its roots-of-unity solutions.
std::pair<PolySystem, std::vector<CVec>> total_degree_start(const PolySystem& target);

/// All isolated solutions of a square system by projective homotopy
/// continuation with a Cauchy endgame at the target. Paths are reported in
/// start-point order, independent of the thread count.
SolveReport solve_system(const PolySystem& target, const SolveOptions& opts, std::uint64_t seed);

struct GenericSolve {
  Complex t0 = 0.0;
  SolveReport report;
  /// Nonsingular finite solutions whose x part lies on the regular locus.
  std::vector<CVec> solutions;
};

/// Random t0 with modulus in [0.5, 1.5].
Complex random_t0(Rng& rng);

/// Finite nonsingular solutions of a generic member of a linear family of
/// square systems, e.g. Lagrange systems of one variety with objectives from a
/// fixed linear space.
struct GenericWitness {
  PolySystem system;
  std::vector<CVec> solutions;
};

/// Tracks the witness solutions along gamma*tau*A + (1 - tau)*B to `target`.
/// Only valid when `target` belongs to the witness family. Returns nullopt when
/// a path fails, ends singular, or two paths meet.
std::optional<std::vector<CVec>> track_from_witness(const GenericWitness& witness, const PolySystem& target,
                                                    const SolveOptions& opts, std::uint64_t seed);

/// Solves the family at t = t0: by the full start homotopy, or from `witness`
/// when given and the witness tracking succeeds.
GenericSolve solve_generic(const CriticalFamily& fam, const VarietySpec& X, Complex t0, const SolveOptions& opts,
                           std::uint64_t seed, const GenericWitness* witness = nullptr);

/// Relative residual |F(x)| / max(1, sum of summand magnitudes).
double relative_residual(const PolySystem& sys, const CVec& x);

}  // namespace critlimit
