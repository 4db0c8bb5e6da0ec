#pragma once
/**
 * @file analysis.hpp
 * @brief One pass of every invariant check over a trajectory.
 *
 * analyze_run() replays a trajectory, builds ladders and frames, sets good
 * flags, tracks the supermartingale and counts violations of each checked
 * inequality. Both the verify command and the ensemble runner use it.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "rancher/drift.hpp"
#include "rancher/hull.hpp"
#include "rancher/observables.hpp"
#include "rancher/walk.hpp"

namespace rancher {

/// Tolerance on frame identities and ladder/record relations.
inline constexpr double kFrameTol = 1e-9;
/// Tolerance on step lengths and per-step diameter growth. Far from the
/// origin the rounding of the stored coordinates dominates, so the check
/// adds a few ulps of the coordinate magnitude (step_tolerance).
inline constexpr double kStepTol = 1e-12;

inline double step_tolerance(const Point2& a, const Point2& b) {
  const double scale = std::max({1.0, std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y)});
  return kStepTol + 8.0 * std::numeric_limits<double>::epsilon() * scale;
}

enum class Check : std::size_t {
  StepLength,         // |X_{n+1} - X_n| = 1
  Legality,           // segment misses the open interior of K_n
  DiameterIncrement,  // d_{n+1} - d_n in [0, 1]
  DiameterColumn,     // stored d matches the replayed diameter
  LadderColumn,       // stored is_ladder matches the replay
  LadderStart,        // tau_0 = 0, tau_1 = 1
  DiametralPair,      // d_tau = |X_tau - X_k|
  SigmaOrder,         // tau_{i+1} <= sigma_{i+1}
  GammaOrder,         // gamma_{i+1} >= tau_i + ceil(gamma d_tau)
  AngleSum,           // phi1 + phi2 = psi1 + psi2 <= pi
  AngleDiff,          // |phi1 - psi1| = |phi2 - psi2| <= pi/2
  RadiusBound,        // R <= d_tau
  DistanceBound,      // D <= R
  DriftR,             // radial drift lower bound
  DriftD,             // transversal drift lower bound
  DriftSum,           // summed drift >= 1/(4 pi^2)
  Quadrature,         // quadrature error <= 1e-10
  GoodSufficient,     // good_sufficient implies good
  LadderEvent,        // A_i implies d_{tau_i + 1} >= d_{tau_i} + 1/2
  RecordSandwich,     // M_n <= d_n <= 2 M_n and the i_n / j_n identities
  FrameError,         // a frame could not be built (corrupt input)
  Count_
};

inline constexpr std::array<std::string_view, static_cast<std::size_t>(Check::Count_)>
    kCheckNames = {"step_length",     "legality",       "d_increment",    "d_column",
                   "ladder_column",   "ladder_start",   "diametral_pair", "sigma_order",
                   "gamma_order",     "angle_sum",      "angle_diff",     "radius_bound",
                   "distance_bound",  "drift_R",        "drift_D",        "drift_sum",
                   "quadrature",      "good_sufficient", "ladder_event",  "record_sandwich",
                   "frame_error"};

struct Violations {
  std::array<std::uint64_t, static_cast<std::size_t>(Check::Count_)> counts{};
  std::uint64_t steps_checked{0};
  std::uint64_t epochs_checked{0};
  std::uint64_t frames_checked{0};
  std::uint64_t drift_frames_checked{0};
  std::uint64_t good_sufficient_frames{0};
  std::uint64_t good_frames{0};
  std::uint64_t borderline_frames{0};
  double max_quadrature_error{0.0};
  double max_step_error{0.0};   // largest | |X_{n+1} - X_n| - 1 |
  double max_d_increment{0.0};  // largest d_{n+1} - d_n

  void flag(Check c, bool violated) {
    if (violated) ++counts[static_cast<std::size_t>(c)];
  }
  std::uint64_t operator[](Check c) const { return counts[static_cast<std::size_t>(c)]; }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  void merge(const Violations& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    steps_checked += o.steps_checked;
    epochs_checked += o.epochs_checked;
    frames_checked += o.frames_checked;
    drift_frames_checked += o.drift_frames_checked;
    good_sufficient_frames += o.good_sufficient_frames;
    good_frames += o.good_frames;
    borderline_frames += o.borderline_frames;
    max_quadrature_error = std::max(max_quadrature_error, o.max_quadrature_error);
    max_step_error = std::max(max_step_error, o.max_step_error);
    max_d_increment = std::max(max_d_increment, o.max_d_increment);
  }
};

struct AnalysisOptions {
  bool drift_checks{true};  // evaluate both drift integrals on every n >= 1 frame
  bool keep_frames{false};
  double tol{kFrameTol};  // tolerance on frame identities and ladder relations
};

struct RunAnalysis {
  std::vector<LadderRecord> ladders;
  std::vector<LensFrame> frames;  // only when keep_frames
  std::vector<std::vector<double>> m_tracks;
  MaxLadders records;
  Violations violations;
};

/// Step-level checks against a replayed hull and diameter.
inline void check_steps(const Trajectory& traj, Violations& v) {
  const auto& rows = traj.steps;
  if (rows.empty()) return;
  ConvexHull hull;
  DiameterState diam;
  hull.try_insert(rows[0].pos, 0);
  for (std::size_t m = 1; m < rows.size(); ++m) {
    const Point2 a = rows[m - 1].pos;
    const Point2 b = rows[m].pos;
    ++v.steps_checked;
    const double tol = step_tolerance(a, b);
    const double len_err = std::abs(dist(a, b) - 1.0);
    v.max_step_error = std::max(v.max_step_error, len_err);
    v.flag(Check::StepLength, !(len_err <= tol));
    v.flag(Check::Legality, segment_hits_interior(hull, a, b));
    const DiameterState next = update_diameter(diam, hull, b, m);
    const double inc = next.d - diam.d;
    v.max_d_increment = std::max(v.max_d_increment, inc);
    v.flag(Check::DiameterIncrement, !(inc >= 0.0 && inc <= 1.0 + tol));
    v.flag(Check::DiameterColumn, !(std::abs(rows[m].d - next.d) <= kFrameTol) ||
                                      rows[m].d < rows[m - 1].d);
    v.flag(Check::LadderColumn, rows[m].is_ladder != (next.d > diam.d));
    hull.try_insert(b, m);
    diam = next;
  }
}

inline RunAnalysis analyze_run(const Trajectory& traj, const WalkConstants& k,
                               const AnalysisOptions& opt = {}) {
  RunAnalysis out;
  Violations& v = out.violations;
  const double tol = opt.tol;
  check_steps(traj, v);

  out.ladders = extract_ladders(traj, k.gamma);
  if (traj.mode == SamplerMode::Rejection) a_events(traj, out.ladders);
  const auto& rows = traj.steps;

  // ladder-level relations
  const auto& lad = out.ladders;
  v.flag(Check::LadderStart, lad.empty() || lad[0].tau != 0 ||
                                 (rows.size() > 1 && (lad.size() < 2 || lad[1].tau != 1)));
  for (std::size_t i = 1; i < lad.size(); ++i) {
    const LadderRecord& r = lad[i];
    ++v.epochs_checked;
    v.flag(Check::DiametralPair, !(std::abs(dist(r.x_tau, r.x_k) - r.d_tau) <= tol));
    if (r.sigma_exit) {
      v.flag(Check::SigmaOrder, !r.delta || r.tau + *r.delta > *r.sigma_exit);
    }
    if (r.gamma_exit) {
      const auto min_exit = r.tau + static_cast<std::size_t>(std::ceil(k.gamma * r.d_tau));
      v.flag(Check::GammaOrder, *r.gamma_exit < min_exit);
    }
    if (r.A && *r.A) {
      v.flag(Check::LadderEvent, !(rows[r.tau + 1].d >= r.d_tau + 0.5 - tol));
    }
  }

  // frames
  std::vector<LensFrame> frames;
  try {
    frames = lens_frames(traj, lad);
  } catch (const Error&) {
    v.flag(Check::FrameError, true);
  }
  good_flags(frames);
  for (const LensFrame& f : frames) {
    ++v.frames_checked;
    const FrameGeometry& g = f.g;
    const double d_tau = lad[f.i].d_tau;
    const double sum_phi = g.phi1 + g.phi2;
    v.flag(Check::AngleSum, !(std::abs(sum_phi - (g.psi1 + g.psi2)) <= tol &&
                              sum_phi <= kPi + tol));
    const double dphi1 = std::abs(g.phi1 - g.psi1);
    v.flag(Check::AngleDiff, !(std::abs(dphi1 - std::abs(g.phi2 - g.psi2)) <= tol &&
                               dphi1 <= kPi / 2.0 + tol));
    v.flag(Check::RadiusBound, !(g.R <= d_tau + tol));
    v.flag(Check::DistanceBound, !(g.D <= g.R + tol));
    v.flag(Check::GoodSufficient, f.good_sufficient && !f.good);
    if (f.n >= 1) {
      v.good_sufficient_frames += f.good_sufficient;
      v.good_frames += f.good;
      v.borderline_frames += f.borderline;
    }
    if (opt.drift_checks && f.n >= 1) {
      ++v.drift_frames_checked;
      try {
        const DriftResult r = drift_R(g.R, g.phi1, g.phi2);
        const DriftResult d = drift_D(g.D, g.psi1, g.psi2);
        const double sum = r.value + d.value;
        v.flag(Check::DriftR, !r.satisfied);
        v.flag(Check::DriftD, !d.satisfied);
        v.flag(Check::DriftSum, !(sum >= kDriftSumBound - kDriftSlack));
        const double qerr = r.quadrature_error + d.quadrature_error;
        v.max_quadrature_error = std::max(v.max_quadrature_error, qerr);
        v.flag(Check::Quadrature, qerr > kDriftQuadMaxError);
      } catch (const Error&) {
        v.flag(Check::Quadrature, true);
      }
    }
  }
  out.m_tracks = supermartingale_track(frames, lad, k);
  if (opt.keep_frames) out.frames = std::move(frames);

  // record process relations
  out.records = max_ladders(traj, lad);
  const MaxLadders& rec = out.records;
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const double dn = rows[n].d;
    const double mn = rec.M[n];
    bool bad = !(mn <= dn + tol && dn <= 2.0 * mn + tol);
    bad |= !(std::abs(lad[rec.i_of_n[n]].d_tau - dn) <= tol);
    bad |= !(std::abs(norm(rows[rec.records[rec.j_of_n[n]].mu].pos) - mn) <= tol);
    v.flag(Check::RecordSandwich, bad);
  }
  return out;
}

}  // namespace rancher
