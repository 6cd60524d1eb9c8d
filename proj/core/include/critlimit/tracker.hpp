#pragma once

#include <cmath>
#include <optional>

#include "critlimit/homotopy.hpp"
#include "critlimit/lu.hpp"

namespace critlimit {

struct TrackerConfig {
  double min_step = 1e-14;
  double max_step = 0.1;
  double initial_step = 0.02;
  int max_corrector_iterations = 3;
  /// Newton corrections below path_tol * (1 + |z|) count as converged.
  double path_tol = 1e-9;
  /// Reject a step whose first correction exceeds this relative size.
  double max_first_correction = 1e-3;
  int max_consecutive_failures = 50;
  int increase_after = 5;
  double increase_factor = 1.5;
  /// Tracking hands over to the endgame at |tau| = s_endgame.
  double s_endgame = 0.1;
  /// Norm at which tracking stops and reports an escape.
  double escape_bound = 1e14;
};

/// A real-parameterized path tau(s) in the complex parameter plane.
struct ParamPath {
  enum class Kind { Ray, LogRay, Circle };
  Kind kind = Kind::Ray;
  Complex direction = 1.0;  // unit modulus
  double radius = 0.0;      // Circle only

  static ParamPath ray(Complex direction) { return {Kind::Ray, direction, 0.0}; }
  /// tau = direction * exp(s): radial motion with scale-free steps.
  static ParamPath log_ray(Complex direction) { return {Kind::LogRay, direction, 0.0}; }
  static ParamPath circle(double radius, Complex direction) { return {Kind::Circle, direction, radius}; }

  Complex tau(double s) const {
    switch (kind) {
      case Kind::Ray:
        return s * direction;
      case Kind::LogRay:
        return std::exp(s) * direction;
      case Kind::Circle:
        return radius * direction * std::polar(1.0, s);
    }
    return 0.0;
  }

  Complex dtau(double s) const {
    switch (kind) {
      case Kind::Ray:
        return direction;
      case Kind::LogRay:
      case Kind::Circle:
        return (kind == Kind::Circle ? Complex(0.0, 1.0) : Complex(1.0)) * tau(s);
    }
    return 0.0;
  }
};

struct PathState {
  double s = 1.0;
  CVec point;
  double step_size = 0.02;
  double newton_residual = 0.0;
  int consecutive_failures = 0;
};

enum class SegmentStatus { Reached, Failed, Escaped };

/// Predictor-corrector on one homotopy: RK4 on the Davidenko equation, Newton
/// correction, step halving on rejection and growth after a run of accepts.
class PathTracker {
 public:
  PathTracker(HomotopyEvaluator& eval, Eigen::Index dim, const TrackerConfig& cfg);

  /// Moves `state` along `path` to s_end. On failure the state keeps the last
  /// accepted point. `max_step` overrides the configured bound when positive.
  SegmentStatus advance(const ParamPath& path, PathState& state, double s_end, double max_step = 0.0);

  /// Newton iterations at fixed tau; returns the last relative correction, or
  /// +inf when the Jacobian is singular or the iterate is not finite.
  double correct(Complex tau, CVec& z, int iterations, double tol);

  /// |H(z, tau)|.
  double residual(const CVec& z, Complex tau);

  const TrackerConfig& config() const noexcept { return cfg_; }
  std::size_t steps() const noexcept { return steps_; }
  Eigen::Index dim() const noexcept { return dim_; }

 private:
  bool tangent(const CVec& z, Complex tau, Complex dtau, CVec& out);

  HomotopyEvaluator& eval_;
  Eigen::Index dim_;
  TrackerConfig cfg_;
  CVec value_, dt_, k1_, k2_, k3_, k4_, trial_, delta_;
  CMat dz_;
  SmallLu lu_;
  std::size_t steps_ = 0;
};

struct NewtonResult {
  CVec point;
  double residual = 0.0;
  /// The Jacobian was judged singular and the iteration refused.
  bool refused = false;
};

/// Newton's method on a square system without parameter. Refuses when the
/// smallest singular value of the Jacobian is below `singular_tol` relative to
/// the larger of the top singular value and the summand magnitude at max(1, |x_i|).
NewtonResult newton_refine(const PolySystem& sys, const CVec& approx, int iters = 8, double singular_tol = 1e-12);
NewtonResult newton_refine(const CompiledSystem& sys, const CVec& approx, int iters = 8, double singular_tol = 1e-12);

/// Smallest singular value of the Jacobian divided by its scale (see newton_refine).
double relative_smallest_singular_value(const CompiledSystem& sys, const CVec& x);

/// |F(x)|.
double system_residual(const CompiledSystem& sys, const CVec& x);

}  // namespace critlimit
