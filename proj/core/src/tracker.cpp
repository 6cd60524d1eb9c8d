#include "critlimit/tracker.hpp"

#include <algorithm>
#include <limits>

namespace critlimit {

namespace {

bool all_finite(const CVec& v) { return v.allFinite(); }

}  // namespace

PathTracker::PathTracker(HomotopyEvaluator& eval, Eigen::Index dim, const TrackerConfig& cfg)
    : eval_(eval),
      dim_(dim),
      cfg_(cfg),
      value_(dim),
      dt_(dim),
      k1_(dim),
      k2_(dim),
      k3_(dim),
      k4_(dim),
      trial_(dim),
      delta_(dim),
      dz_(dim, dim) {}

bool PathTracker::tangent(const CVec& z, Complex tau, Complex dtau, CVec& out) {
  eval_.evaluate(z, tau, value_, dz_, dt_);
  lu_.compute(dz_);
  lu_.solve(dt_, out, true);
  out *= dtau;
  return all_finite(out);
}

double PathTracker::correct(Complex tau, CVec& z, int iterations, double tol) {
  double rel = std::numeric_limits<double>::infinity();
  for (int k = 0; k < iterations; ++k) {
    eval_.evaluate(z, tau, value_, dz_, dt_);
    lu_.compute(dz_);
    lu_.solve(value_, delta_, true);
    if (!all_finite(delta_)) return std::numeric_limits<double>::infinity();
    z += delta_;
    rel = delta_.norm() / (1.0 + z.norm());
    if (rel <= tol) break;
  }
  return rel;
}

double PathTracker::residual(const CVec& z, Complex tau) {
  eval_.evaluate_value(z, tau, value_);
  return value_.norm();
}

SegmentStatus PathTracker::advance(const ParamPath& path, PathState& st, double s_end, double max_step) {
  const double hmax = max_step > 0.0 ? max_step : cfg_.max_step;
  const double dir = s_end >= st.s ? 1.0 : -1.0;
  double h = std::clamp(st.step_size, cfg_.min_step, hmax);
  int streak = 0;

  while (true) {
    const double remaining = dir * (s_end - st.s);
    if (remaining <= 0.0) {
      st.s = s_end;
      st.step_size = h;
      return SegmentStatus::Reached;
    }
    const bool last = h >= remaining;
    const double s_new = last ? s_end : st.s + dir * h;
    const double ds = s_new - st.s;
    const double s_mid = st.s + 0.5 * ds;

    bool accepted = false;
    double last_rel = 0.0;
    if (tangent(st.point, path.tau(st.s), path.dtau(st.s), k1_) &&
        tangent(trial_ = st.point + (0.5 * ds) * k1_, path.tau(s_mid), path.dtau(s_mid), k2_) &&
        tangent(trial_ = st.point + (0.5 * ds) * k2_, path.tau(s_mid), path.dtau(s_mid), k3_) &&
        tangent(trial_ = st.point + ds * k3_, path.tau(s_new), path.dtau(s_new), k4_)) {
      trial_ = st.point + (ds / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
      const Complex tau = path.tau(s_new);
      double prev = std::numeric_limits<double>::infinity();
      for (int k = 0; k < cfg_.max_corrector_iterations; ++k) {
        eval_.evaluate(trial_, tau, value_, dz_, dt_);
        lu_.compute(dz_);
        lu_.solve(value_, delta_, true);
        if (!all_finite(delta_)) break;
        const double dn = delta_.norm();
        trial_ += delta_;
        const double rel = dn / (1.0 + trial_.norm());
        if (k == 0 && rel > cfg_.max_first_correction) break;
        if (rel <= cfg_.path_tol) {
          accepted = true;
          last_rel = rel;
          break;
        }
        if (dn > 0.5 * prev) break;  // not contracting
        prev = dn;
      }
    }

    if (accepted) {
      st.s = s_new;
      st.point = trial_;
      st.newton_residual = last_rel;
      st.consecutive_failures = 0;
      ++steps_;
      if (++streak >= cfg_.increase_after) {
        h = std::min(h * cfg_.increase_factor, hmax);
        streak = 0;
      }
      if (st.point.cwiseAbs().maxCoeff() > cfg_.escape_bound) {
        st.step_size = h;
        return SegmentStatus::Escaped;
      }
    } else {
      streak = 0;
      ++st.consecutive_failures;
      h *= 0.5;
      if (h < cfg_.min_step || st.consecutive_failures > cfg_.max_consecutive_failures) {
        st.step_size = std::max(h, cfg_.min_step);
        return SegmentStatus::Failed;
      }
    }
  }
}

double system_residual(const CompiledSystem& sys, const CVec& x) {
  auto scratch = sys.make_scratch();
  CVec v(static_cast<Eigen::Index>(sys.num_equations()));
  sys.evaluate_values(x.data(), scratch, v.data());
  return v.norm();
}

double relative_smallest_singular_value(const CompiledSystem& sys, const CVec& x) {
  const auto m = static_cast<Eigen::Index>(sys.num_equations());
  const auto n = static_cast<Eigen::Index>(sys.num_vars());
  auto scratch = sys.make_scratch();
  CVec v(m);
  CMat J(m, n);
  sys.evaluate(x.data(), scratch, v.data(), J);
  // Summand magnitudes at max(1, |x_i|): near the origin the Jacobian of a
  // singular root is small in absolute terms, not relative to itself.
  CVec mag = x.cwiseAbs().cwiseMax(1.0).cast<Complex>();
  Eigen::MatrixXd A;
  sys.absolute_jacobian(mag.data(), A);
  Eigen::JacobiSVD<CMat> svd(J);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0.0;
  const double scale = std::max(sv(0), A.norm());
  if (scale == 0.0) return 0.0;
  return sv(sv.size() - 1) / scale;
}

NewtonResult newton_refine(const CompiledSystem& sys, const CVec& approx, int iters, double singular_tol) {
  const auto n = static_cast<Eigen::Index>(sys.num_vars());
  if (static_cast<Eigen::Index>(sys.num_equations()) != n || approx.size() != n) {
    throw InputError("newton_refine needs a square system and a matching start point");
  }
  NewtonResult out{approx, 0.0, false};
  auto scratch = sys.make_scratch();
  CVec F(n), Fn(n);
  CMat J(n, n), Jn(n, n);
  sys.evaluate(out.point.data(), scratch, F.data(), J);
  out.residual = F.norm();
  if (relative_smallest_singular_value(sys, out.point) < singular_tol) {
    out.refused = true;
    return out;
  }
  for (int it = 0; it < iters && out.residual > 0.0; ++it) {
    CVec delta = J.partialPivLu().solve(-F);
    if (!delta.allFinite()) break;
    CVec next = out.point + delta;
    sys.evaluate(next.data(), scratch, Fn.data(), Jn);
    const double r = Fn.norm();
    if (!(r < out.residual)) break;
    out.point = std::move(next);
    out.residual = r;
    F = Fn;
    J = Jn;
    if (delta.norm() <= 1e-15 * (1.0 + out.point.norm())) break;
  }
  return out;
}

NewtonResult newton_refine(const PolySystem& sys, const CVec& approx, int iters, double singular_tol) {
  if (sys.parameter || sys.vars.size() != sys.num_unknowns() || !sys.is_square()) {
    throw InputError("newton_refine needs a square system without parameter");
  }
  return newton_refine(CompiledSystem(sys.equations), approx, iters, singular_tol);
}

}  // namespace critlimit
