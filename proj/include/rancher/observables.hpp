#pragma once
/**
 * @file observables.hpp
 * @brief Offline analysis of a stored trajectory: diameter ladder epochs,
 * lens frames, good times, the exponential supermartingale, ladder events
 * and the record process of the distance from the origin.
 *
 * Everything here replays the stored positions through a fresh hull, so the
 * analysis never runs inside the simulation loop and can be repeated from a
 * trajectory file.
 */

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rancher/drift.hpp"
#include "rancher/error.hpp"
#include "rancher/geom.hpp"
#include "rancher/hull.hpp"
#include "rancher/walk.hpp"

namespace rancher {

/// Frames whose radial drift is this close to the good-time threshold are
/// flagged as borderline.
inline constexpr double kBorderlineBand = 1e-6;

struct LadderRecord {
  std::size_t i{0};
  std::size_t tau{0};
  std::size_t k{0};  // birth index of the far diametral endpoint
  Point2 x_tau;
  Point2 x_k;
  Point2 Y;
  double d_tau{0.0};
  std::optional<std::size_t> delta;       // tau_{i+1} - tau_i, absent while open
  std::optional<std::size_t> sigma_exit;  // first exit from the lens
  std::optional<std::size_t> gamma_exit;  // first exit from B(x_tau, gamma d_tau)
  std::optional<bool> A;                  // rejection mode only
};

struct LensFrame {
  std::size_t i{0};
  std::size_t n{0};
  FrameGeometry g;
  Point2 Z;
  double interior_angle{0.0};
  bool full_rank{false};
  bool in_gamma_ball{false};
  bool good{false};
  bool good_sufficient{false};
  bool borderline{false};
  std::optional<double> radial_drift;  // computed for frames inside the ball
};

struct MaxLadderRecord {
  std::size_t j{0};
  std::size_t mu{0};
  double M{0.0};
};

struct MaxLadders {
  std::vector<MaxLadderRecord> records;
  std::vector<double> M;            // M_n per step
  std::vector<std::size_t> j_of_n;  // j_n per step
  std::vector<std::size_t> i_of_n;  // i_n per step
};

/// Diameter ladder epochs. Epoch 0 is (tau=0, d=0); epoch 1 always starts at
/// step 1. sigma and gamma exits are first-exit scans over later positions.
inline std::vector<LadderRecord> extract_ladders(const Trajectory& traj, double gamma) {
  std::vector<LadderRecord> out;
  if (traj.steps.empty()) return out;
  const auto& rows = traj.steps;

  ConvexHull hull;
  DiameterState diam;
  hull.insert(rows[0].pos, 0);
  LadderRecord first;
  first.x_tau = first.x_k = first.Y = rows[0].pos;
  out.push_back(first);

  for (std::size_t m = 1; m < rows.size(); ++m) {
    const Point2 p = rows[m].pos;
    const DiameterState next = update_diameter(diam, hull, p, m);
    hull.try_insert(p, m);
    if (next.d > diam.d) {
      LadderRecord rec;
      rec.i = out.size();
      rec.tau = m;
      rec.k = next.endpoint_a;
      rec.x_tau = p;
      rec.x_k = rows[rec.k].pos;
      rec.Y = midpoint(rec.x_tau, rec.x_k);
      rec.d_tau = next.d;
      out.back().delta = m - out.back().tau;
      out.push_back(rec);
    }
    diam = next;
  }

  for (std::size_t e = 1; e < out.size(); ++e) {
    LadderRecord& rec = out[e];
    const double r_gamma = gamma * rec.d_tau;
    for (std::size_t m = rec.tau + 1; m < rows.size(); ++m) {
      const Point2 p = rows[m].pos;
      const double to_tau = dist(p, rec.x_tau);
      if (!rec.gamma_exit && to_tau > r_gamma) rec.gamma_exit = m;
      if (!rec.sigma_exit && (to_tau > rec.d_tau || dist(p, rec.x_k) > rec.d_tau)) {
        rec.sigma_exit = m;
      }
      if (rec.gamma_exit && rec.sigma_exit) break;
    }
  }
  return out;
}

/// Index of the epoch containing step m (tau_i <= m < tau_{i+1}).
inline std::size_t epoch_of(std::span<const LadderRecord> ladders, std::size_t m) {
  std::size_t lo = 0, hi = ladders.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (ladders[mid].tau <= m) lo = mid; else hi = mid;
  }
  return lo;
}

/// Lens frame of the walker at step m, given the hull K_m.
/// s1 is the boundary edge at X_m from which a boundary walk reaches X_tau
/// before X_k.
inline LensFrame compute_frame(const ConvexHull& hull, const Point2& x, std::size_t m,
                               const LadderRecord& lad) {
  LensFrame f;
  f.i = lad.i;
  f.n = m - lad.tau;
  if (dist(lad.x_tau, lad.x_k) <= kEpsGeom) {
    throw Error(ErrorKind::DegenerateFrame, "diametral segment shorter than tolerance");
  }
  f.g.R = dist(x, lad.Y);
  f.Z = project_onto_line(x, lad.x_tau, lad.x_k);
  f.g.D = dist(x, f.Z);
  f.full_rank = hull.rank() == HullRank::Full;

  const InteriorCone cone = interior_cone(hull, x);
  f.interior_angle = cone.interior_angle;

  Dir s1 = cone.dir_next;
  Dir s2 = cone.dir_prev;
  if (f.full_rank) {
    const double h = static_cast<double>(hull.size());
    auto param_of = [&](const Point2& q, std::size_t birth) {
      if (auto v = hull.find_birth(birth)) return static_cast<double>(*v);
      return hull.boundary_param(q);
    };
    const double px = param_of(x, m);
    auto ccw_offset = [&](double pq) {
      double off = std::fmod(pq - px, h);
      return off < 0.0 ? off + h : off;
    };
    const double off_tau = ccw_offset(param_of(lad.x_tau, lad.tau));
    const double off_k = ccw_offset(param_of(lad.x_k, lad.k));
    if (!(off_tau < off_k)) std::swap(s1, s2);
  }

  const Dir to_y = Dir::of(lad.Y - x);
  f.g.phi1 = angle_between(s1, to_y);
  f.g.phi2 = angle_between(s2, to_y);
  if (f.g.D > kEpsGeom) {
    const Dir to_z = Dir::of(f.Z - x);
    f.g.psi1 = angle_between(s1, to_z);
    f.g.psi2 = angle_between(s2, to_z);
  } else {
    // X on the diametral line (always so at n = 0): Z = X has no direction.
    f.g.psi1 = f.g.phi1;
    f.g.psi2 = f.g.phi2;
  }
  f.in_gamma_ball = f.n == 0 || !lad.gamma_exit || m < *lad.gamma_exit;
  return f;
}

/// Frames for every epoch i >= 1 and 0 <= n < Delta_i (the open last epoch
/// contributes its observed prefix).
inline std::vector<LensFrame> lens_frames(const Trajectory& traj,
                                          std::span<const LadderRecord> ladders) {
  std::vector<LensFrame> out;
  const auto& rows = traj.steps;
  if (rows.size() < 2 || ladders.size() < 2) return out;
  out.reserve(rows.size());
  ConvexHull hull;
  std::size_t e = 0;
  for (std::size_t m = 0; m < rows.size(); ++m) {
    hull.try_insert(rows[m].pos, m);
    while (e + 1 < ladders.size() && ladders[e + 1].tau <= m) ++e;
    if (e >= 1) out.push_back(compute_frame(hull, rows[m].pos, m, ladders[e]));
  }
  return out;
}

/// Set good, good_sufficient and borderline. n = 0 is good by definition;
/// n >= 1 is good when still inside the small ball and the exact radial
/// drift reaches 1/(pi sqrt 8).
inline void good_flags(std::span<LensFrame> frames) {
  for (LensFrame& f : frames) {
    f.good_sufficient = f.in_gamma_ball && f.g.psi1 <= kPi / 4.0;
    if (f.n == 0) {
      f.good = true;
      continue;
    }
    if (!f.in_gamma_ball) {
      f.good = false;
      continue;
    }
    if (!f.radial_drift) f.radial_drift = drift_R(f.g.R, f.g.phi1, f.g.phi2).value;
    const double v = *f.radial_drift;
    f.good = v >= kGoodDriftThreshold - kDriftSlack;
    f.borderline = std::abs(v - kGoodDriftThreshold) <= kBorderlineBand;
  }
}

/// M_{i,n} for each epoch i >= 1, indexed [i-1][n]. Complete epochs get
/// values for n = 0 .. Delta_i (the last one is the zero after the ladder
/// time); the open epoch gets its observed prefix only.
inline std::vector<std::vector<double>> supermartingale_track(
    std::span<const LensFrame> frames, std::span<const LadderRecord> ladders,
    const WalkConstants& k) {
  std::vector<std::vector<double>> out(ladders.size() > 1 ? ladders.size() - 1 : 0);
  double r0 = 0.0;
  double good_count = 0.0;
  for (const LensFrame& f : frames) {
    if (f.i == 0) continue;
    auto& track = out[f.i - 1];
    if (f.n == 0) {
      r0 = f.g.R;
      good_count = 0.0;
    }
    const double expo = f.g.D + k.beta * (f.g.R - r0) - 4.0 * good_count;
    track.push_back(f.n == 0 ? 1.0 : std::exp(-k.c_alll * expo));
    if (f.good) good_count += 1.0;
  }
  for (std::size_t i = 1; i < ladders.size(); ++i) {
    if (ladders[i].delta) out[i - 1].push_back(0.0);
  }
  return out;
}

/// Ladder events: the first rejection trial at tau_i has inner product at
/// least 1/2 with the unit diametral direction. Absent for the epoch that
/// starts at the final step.
inline void a_events(const Trajectory& traj, std::span<LadderRecord> ladders) {
  if (traj.mode != SamplerMode::Rejection) {
    throw Error(ErrorKind::ModeMismatch, "ladder events need rejection-mode trajectories");
  }
  for (LadderRecord& lad : ladders) {
    if (lad.i == 0 || lad.tau + 1 >= traj.steps.size()) continue;
    const auto& trial = traj.steps[lad.tau + 1].first_trial;
    if (!trial) throw Error(ErrorKind::ModeMismatch, "trajectory row lacks a first trial");
    const Point2 u = Dir(*trial).unit();
    const Point2 axis = (lad.x_tau - lad.x_k) / lad.d_tau;
    lad.A = dot(u, axis) >= 0.5;
  }
}

/// Record process of M_n = max_{m <= n} |X_m| and the index maps i_n, j_n.
inline MaxLadders max_ladders(const Trajectory& traj, std::span<const LadderRecord> ladders) {
  MaxLadders out;
  const auto& rows = traj.steps;
  out.M.resize(rows.size());
  out.j_of_n.resize(rows.size());
  out.i_of_n.resize(rows.size());
  std::size_t e = 0;
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const double r = norm(rows[n].pos);
    if (n == 0) {
      out.records.push_back({0, 0, r});
    } else if (r > out.records.back().M) {
      out.records.push_back({out.records.size(), n, r});
    }
    out.M[n] = out.records.back().M;
    out.j_of_n[n] = out.records.back().j;
    while (e + 1 < ladders.size() && ladders[e + 1].tau <= n) ++e;
    out.i_of_n[n] = e;
  }
  return out;
}

}  // namespace rancher
