#include "critlimit/endgame.hpp"

#include <cmath>
#include <numbers>

namespace critlimit {

bool classify_divergence(std::span<const double> norms, double bound) {
  if (norms.size() < 3) return false;
  for (std::size_t i = 1; i < norms.size(); ++i) {
    if (!(norms[i] > norms[i - 1])) return false;
  }
  return norms.back() > bound;
}

bool power_law_growth(std::span<const double> norms, int rings, double ratio, double min_exponent) {
  if (rings < 2 || norms.size() < static_cast<std::size_t>(rings)) return false;
  const double step = -std::log(ratio);
  for (std::size_t i = norms.size() - static_cast<std::size_t>(rings) + 1; i < norms.size(); ++i) {
    if (!(norms[i - 1] > 0.0) || !std::isfinite(norms[i])) return false;
    if (std::log(norms[i] / norms[i - 1]) / step < min_exponent) return false;
  }
  return true;
}

namespace {

bool increasing_tail(const std::vector<double>& v, int count) {
  if (v.size() < static_cast<std::size_t>(count)) return false;
  for (std::size_t i = v.size() - static_cast<std::size_t>(count) + 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

// Energy of the negative-frequency DFT modes of the primary samples, relative
// to the positive ones. Samples of a genuine cycle are a power series in
// tau^(1/w), so only aliasing puts weight on negative modes.
std::pair<double, double> mode_energies(const std::vector<CVec>& samples, Eigen::Index np) {
  const std::size_t M = samples.size();
  double pos = 0.0, neg = 0.0;
  for (std::size_t k = 1; k < M; ++k) {
    if (2 * k == M) continue;
    CVec c = CVec::Zero(np);
    for (std::size_t j = 0; j < M; ++j) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>((j * k) % M) / static_cast<double>(M);
      c += samples[j].head(np) * Complex(std::cos(a), std::sin(a));
    }
    (2 * k < M ? pos : neg) += c.squaredNorm();
  }
  const double m = static_cast<double>(M);
  return {std::sqrt(pos) / m, std::sqrt(neg) / m};
}

}  // namespace

EndgameResult cauchy_endgame(PathTracker& tracker, Complex direction, const CVec& start, const EndgameConfig& cfg) {
  using Status = EndgameResult::Status;
  EndgameResult res;
  const Eigen::Index dim = start.size();
  const Eigen::Index np = cfg.primary < 0 ? dim : std::min<Eigen::Index>(cfg.primary, dim);
  const bool has_aux = np < dim;
  const int min_rings = has_aux ? std::max(cfg.min_rings, cfg.growth_rings) : cfg.min_rings;
  const int N = cfg.loop_samples;
  const double dtheta = 2.0 * std::numbers::pi / N;
  const double log_step = -std::log(cfg.ratio);

  CVec z = start;
  double step = dtheta;
  double r = cfg.r0;
  std::vector<CVec> samples;

  auto finish = [&](Status s) {
    res.status = s;
    res.last_point = z;
    res.last_tau = r * direction;
    return res;
  };

  for (int ring = 0; ring < cfg.max_rings; ++ring) {
    if (ring > 0) {
      PathState rs;
      rs.s = std::log(r / cfg.ratio);
      rs.point = z;
      rs.step_size = std::min(step, log_step);
      auto status = tracker.advance(ParamPath::log_ray(direction), rs, std::log(r), log_step);
      z = rs.point;
      if (status == SegmentStatus::Escaped && cfg.detect_divergence) return finish(Status::Diverged);
      if (status != SegmentStatus::Reached) return finish(Status::TrackFailure);
    }

    const CVec z0 = z;
    const auto circle = ParamPath::circle(r, direction);
    PathState ls;
    ls.s = 0.0;
    ls.point = z0;
    ls.step_size = dtheta;
    samples.clear();
    int loops = 0;
    bool closed = false;
    while (loops < cfg.max_winding) {
      for (int j = 0; j < N; ++j) {
        samples.push_back(ls.point);
        auto status = tracker.advance(circle, ls, dtheta * (loops * N + j + 1), dtheta);
        if (status != SegmentStatus::Reached) {
          z = ls.point;
          if (status == SegmentStatus::Escaped && cfg.detect_divergence) return finish(Status::Diverged);
          return finish(Status::TrackFailure);
        }
      }
      ++loops;
      if ((ls.point - z0).norm() <= cfg.closure_tol * (1.0 + z0.norm())) {
        closed = true;
        break;
      }
    }
    z = ls.point;
    step = ls.step_size;
    if (!closed) return finish(Status::NoConvergence);

    CVec mean = CVec::Zero(dim);
    for (const auto& s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double norm = 0.0, spread = 0.0, aux = 0.0;
    for (const auto& s : samples) {
      norm = std::max(norm, s.head(np).cwiseAbs().maxCoeff());
      spread = std::max(spread, (s.head(np) - mean.head(np)).norm());
      if (has_aux) aux = std::max(aux, s.tail(dim - np).cwiseAbs().maxCoeff());
    }
    res.radii.push_back(r);
    res.estimate_history.push_back(mean);
    res.windings.push_back(loops);
    res.ring_norms.push_back(norm);
    res.spreads.push_back(spread);
    if (has_aux) {
      res.aux_norms.push_back(aux);
      res.auxiliary_diverge = aux > cfg.divergence_bound ||
                              power_law_growth(res.aux_norms, cfg.growth_rings, cfg.ratio, cfg.min_growth_exponent);
    }
    res.limit = mean;
    res.winding_number = loops;

    if (cfg.detect_divergence) {
      const std::size_t k = res.ring_norms.size();
      if (norm > cfg.divergence_bound && k >= 3 &&
          classify_divergence(std::span<const double>(res.ring_norms).subspan(k - 3), cfg.divergence_bound)) {
        return finish(Status::Diverged);
      }
      if (power_law_growth(res.ring_norms, cfg.growth_rings, cfg.ratio, cfg.min_growth_exponent) &&
          increasing_tail(res.spreads, cfg.growth_rings)) {
        return finish(Status::Diverged);
      }
    }

    if (ring + 1 >= min_rings && ring >= 1) {
      const CVec& prev = res.estimate_history[res.estimate_history.size() - 2];
      const double scale = 1.0 + mean.head(np).norm();
      const double diff = (mean.head(np) - prev.head(np)).norm();
      const double prev_spread = res.spreads[res.spreads.size() - 2];
      const bool agree = diff <= cfg.agreement_tol * scale;
      const bool stable = res.windings[res.windings.size() - 2] == loops;
      // A loop that also circles another branch point has a spread that stays
      // put while its mean stays fixed (the centroid of the sheets), so
      // estimate agreement alone would accept it.
      const bool shrinking = spread <= cfg.agreement_tol * scale ||
                             (prev_spread > 0.0 && std::log(spread / prev_spread) / std::log(cfg.ratio) >=
                                                       cfg.spread_decay / loops);
      if (agree && stable && shrinking) {
        // The mean of such a loop is the centroid of all enclosed sheets and is
        // exact at every radius, so the Laurent part is the telltale.
        const auto [pos, neg] = mode_energies(samples, np);
        if (neg <= cfg.laurent_tol * pos + cfg.agreement_tol * scale) return finish(Status::Converged);
      }
    }
    r *= cfg.ratio;
  }
  r /= cfg.ratio;
  return finish(Status::NoConvergence);
}

}  // namespace critlimit
