#pragma once
/**
 * @file walk.hpp
 * @brief The walk engine: unit steps that never cross the open interior of
 * the convex hull of the past.
 *
 * Two samplers produce the same law. The direct sampler maps one uniform
 * variate affinely onto the allowed arc. The rejection sampler draws i.i.d.
 * full-circle directions until one is legal and remembers the first trial,
 * which the ladder-event analysis needs.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rancher/error.hpp"
#include "rancher/geom.hpp"
#include "rancher/hull.hpp"
#include "rancher/rng.hpp"

namespace rancher {

enum class SamplerMode { Direct, Rejection };

constexpr std::string_view to_string(SamplerMode m) {
  return m == SamplerMode::Direct ? "direct" : "rejection";
}

inline SamplerMode parse_sampler_mode(std::string_view s) {
  if (s == "direct") return SamplerMode::Direct;
  if (s == "rejection") return SamplerMode::Rejection;
  throw Error(ErrorKind::InvalidArgument, "unknown sampler mode '" + std::string(s) + "'");
}

inline constexpr std::uint32_t kMaxRejectionTrials = 1'000'000;

struct StepSample {
  Dir chosen;
  double allowed_arc_length{kTwoPi};
  std::uint32_t trials{1};
  std::optional<Dir> first_trial;  // rejection mode only
};

/// One row of a trajectory. arc_len, trials and first_trial describe the
/// step that produced this position; row 0 carries (2pi, 1, none).
struct StepRecord {
  Point2 pos;
  double d{0.0};
  std::uint32_t hull_size{1};
  double arc_len{kTwoPi};
  std::uint32_t trials{1};
  bool is_ladder{false};
  std::optional<double> first_trial;
};

struct Trajectory {
  std::uint64_t seed{0};
  SamplerMode mode{SamplerMode::Direct};
  std::vector<StepRecord> steps;

  std::size_t n_steps() const { return steps.empty() ? 0 : steps.size() - 1; }
};

/// True iff direction d points strictly into the open interior cone.
inline bool points_into_interior(const InteriorCone& cone, Dir d) {
  if (cone.interior_angle <= 0.0) return false;
  const double off = canonical_angle(d.theta() - cone.dir_next.theta());
  return off > 0.0 && off < cone.interior_angle;
}

class WalkState {
 public:
  explicit WalkState(std::uint64_t seed, SamplerMode mode = SamplerMode::Direct)
      : rng_(seed), mode_(mode) {
    positions_.push_back(Point2{0.0, 0.0});
    cur_idx_ = hull_.insert(positions_.back(), 0);
  }

  std::size_t n() const { return positions_.size() - 1; }
  const Point2& position() const { return positions_.back(); }
  const std::vector<Point2>& positions() const { return positions_; }
  const ConvexHull& hull() const { return hull_; }
  const DiameterState& diameter() const { return diam_; }
  SamplerMode mode() const { return mode_; }
  Rng& rng() { return rng_; }

  InteriorCone cone() const {
    if (cur_idx_ != ConvexHull::npos) return interior_cone_at(hull_, cur_idx_);
    return interior_cone(hull_, position());
  }

  Arc allowed_arc() const { return rancher::allowed_arc(cone()); }

  /// Draw a direction uniformly on the allowed arc; exactly one variate.
  StepSample sample_direct(Rng& rng) const {
    const Arc arc = allowed_arc();
    return {arc.at(rng.uniform01()), arc.length, 1, std::nullopt};
  }

  /// Draw full-circle directions until the first legal one.
  StepSample sample_rejection(Rng& rng) const {
    const InteriorCone c = cone();
    StepSample s;
    s.allowed_arc_length = c.interior_angle > 0.0 ? kTwoPi - c.interior_angle : kTwoPi;
    for (std::uint32_t k = 1; k <= kMaxRejectionTrials; ++k) {
      const Dir trial(kTwoPi * rng.uniform01());
      if (k == 1) s.first_trial = trial;
      if (!points_into_interior(c, trial)) {
        s.chosen = trial;
        s.trials = k;
        return s;
      }
    }
    throw Error(ErrorKind::InternalError, "rejection sampler exceeded trial guard");
  }

  StepSample step_direct() {
    StepSample s = sample_direct(rng_);
    advance(s.chosen);
    return s;
  }

  StepSample step_rejection() {
    StepSample s = sample_rejection(rng_);
    advance(s.chosen);
    return s;
  }

  StepSample step() { return mode_ == SamplerMode::Direct ? step_direct() : step_rejection(); }

  /// Move one unit along d. Callers are responsible for legality.
  void advance(Dir d) {
    const Point2 next = position() + d.unit();
    const std::size_t birth = positions_.size();
    diam_ = update_diameter(diam_, hull_, next, birth);
    cur_idx_ = hull_.insert(next, birth);
    positions_.push_back(next);
  }

 private:
  std::vector<Point2> positions_;
  ConvexHull hull_;
  DiameterState diam_;
  std::size_t cur_idx_{ConvexHull::npos};
  Rng rng_;
  SamplerMode mode_;
};

/// Simulate n_steps steps from the origin. Deterministic in (seed, mode).
inline Trajectory run_walk(std::size_t n_steps, std::uint64_t seed, SamplerMode mode) {
  WalkState state(seed, mode);
  Trajectory traj{seed, mode, {}};
  traj.steps.reserve(n_steps + 1);
  traj.steps.push_back(StepRecord{});
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double d_before = state.diameter().d;
    const StepSample s = state.step();
    StepRecord r;
    r.pos = state.position();
    r.d = state.diameter().d;
    r.hull_size = static_cast<std::uint32_t>(state.hull().size());
    r.arc_len = s.allowed_arc_length;
    r.trials = s.trials;
    r.is_ladder = r.d > d_before;
    if (s.first_trial) r.first_trial = s.first_trial->theta();
    traj.steps.push_back(r);
  }
  return traj;
}

}  // namespace rancher
