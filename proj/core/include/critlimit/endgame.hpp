#pragma once

#include <span>
#include <vector>

#include "critlimit/tracker.hpp"

namespace critlimit {

struct EndgameConfig {
  double r0 = 0.1;
  double ratio = 0.5;
  int min_rings = 3;
  int max_rings = 30;
  int loop_samples = 16;
  int max_winding = 32;
  double divergence_bound = 1e8;
  double agreement_tol = 1e-6;
  /// Relative distance under which a loop counts as closed.
  double closure_tol = 1e-8;
  /// Leading coordinates that decide convergence; the rest are auxiliary
  /// (Lagrange multipliers) and only get a divergence flag. -1 means all.
  Eigen::Index primary = -1;
  bool detect_divergence = true;
  /// Rings of steady power-law growth that count as divergence when the bound
  /// itself is out of reach.
  int growth_rings = 4;
  double min_growth_exponent = 0.1;
  /// Convergence needs the loop spread to shrink at least like r^(spread_decay / w).
  double spread_decay = 0.8;
  /// Allowed negative-frequency energy of a ring, relative to the positive
  /// part. A loop around further branch points sees a Laurent series.
  double laurent_tol = 1e-2;
};

struct EndgameResult {
  enum class Status { Converged, Diverged, NoConvergence, TrackFailure };
  Status status = Status::NoConvergence;
  CVec limit;
  int winding_number = 0;
  std::vector<double> radii;
  std::vector<CVec> estimate_history;
  std::vector<int> windings;
  std::vector<double> ring_norms;  // max primary modulus over each ring
  std::vector<double> spreads;     // max primary distance of a sample from the ring mean
  std::vector<double> aux_norms;
  bool auxiliary_diverge = false;
  /// Last tracked point and its parameter value.
  CVec last_point;
  Complex last_tau = 0.0;
};

/// Cauchy endgame around tau = 0. `start` solves the homotopy at
/// tau = cfg.r0 * direction. Each ring loops until the path closes (the loop
/// count is the winding number) and averages the samples.
EndgameResult cauchy_endgame(PathTracker& tracker, Complex direction, const CVec& start, const EndgameConfig& cfg);

/// True iff the norms increase monotonically and the last one exceeds `bound`.
bool classify_divergence(std::span<const double> norms, double bound);

/// True when the last `rings` entries grow like r^-a with a >= min_exponent
/// for radii shrinking by `ratio`.
bool power_law_growth(std::span<const double> norms, int rings, double ratio, double min_exponent);

}  // namespace critlimit
