#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rancher/analysis.hpp"
#include "rancher/observables.hpp"
#include "rancher/walk.hpp"

using namespace rancher;

namespace {

const WalkConstants& K() {
  static const WalkConstants k = derive_constants();
  return k;
}

LadderRecord make_ladder(Point2 x_tau, Point2 x_k) {
  LadderRecord lad;
  lad.i = 1;
  lad.tau = 1;
  lad.k = 0;
  lad.x_tau = x_tau;
  lad.x_k = x_k;
  lad.Y = midpoint(x_tau, x_k);
  lad.d_tau = dist(x_tau, x_k);
  return lad;
}

}  // namespace

TEST(Ladders, StartAtZeroAndOne) {
  const Trajectory t = run_walk(3000, 4, SamplerMode::Direct);
  const auto lad = extract_ladders(t, K().gamma);
  ASSERT_GE(lad.size(), 2u);
  EXPECT_EQ(lad[0].tau, 0u);
  EXPECT_EQ(lad[1].tau, 1u);
  EXPECT_DOUBLE_EQ(lad[1].d_tau, 1.0);
  for (std::size_t i = 1; i < lad.size(); ++i) {
    EXPECT_DOUBLE_EQ(lad[i].d_tau, t.steps[lad[i].tau].d);
    EXPECT_TRUE(t.steps[lad[i].tau].is_ladder);
    if (i + 1 < lad.size()) {
      ASSERT_TRUE(lad[i].delta);
      EXPECT_EQ(lad[i].tau + *lad[i].delta, lad[i + 1].tau);
    } else {
      EXPECT_FALSE(lad[i].delta);
    }
  }
  EXPECT_EQ(epoch_of(lad, 0), 0u);
  EXPECT_EQ(epoch_of(lad, 1), 1u);
  EXPECT_EQ(epoch_of(lad, lad.back().tau + 1), lad.size() - 1);
}

TEST(Ladders, ExitTimesMatchBruteForce) {
  const Trajectory t = run_walk(3000, 5, SamplerMode::Direct);
  const auto lad = extract_ladders(t, K().gamma);
  for (std::size_t i = 1; i < lad.size(); ++i) {
    std::optional<std::size_t> sig, gam;
    for (std::size_t m = lad[i].tau + 1; m < t.steps.size(); ++m) {
      const Point2 p = t.steps[m].pos;
      if (!sig && std::max(dist(p, lad[i].x_tau), dist(p, lad[i].x_k)) > lad[i].d_tau) sig = m;
      if (!gam && dist(p, lad[i].x_tau) > K().gamma * lad[i].d_tau) gam = m;
    }
    ASSERT_EQ(sig, lad[i].sigma_exit);
    ASSERT_EQ(gam, lad[i].gamma_exit);
    if (sig && lad[i].delta) {
      ASSERT_LE(lad[i].tau + *lad[i].delta, *sig);
    }
  }
}

TEST(Frames, LadderTimeFrame) {
  const Trajectory t = run_walk(500, 6, SamplerMode::Direct);
  const auto lad = extract_ladders(t, K().gamma);
  const auto frames = lens_frames(t, lad);
  for (const LensFrame& f : frames) {
    if (f.n != 0) continue;
    EXPECT_NEAR(f.g.R, lad[f.i].d_tau / 2, 1e-12);
    EXPECT_NEAR(f.g.D, 0.0, 1e-12);
    EXPECT_EQ(f.g.psi1, f.g.phi1);
  }
}

TEST(Frames, IsoscelesApexHasEqualAngles) {
  ConvexHull h;
  const Point2 xk{-1, 0}, xt{1, 0}, x{0, 0.5};
  h.insert(xk, 0);
  h.insert(xt, 1);
  h.insert(x, 2);
  const LensFrame f = compute_frame(h, x, 2, make_ladder(xt, xk));
  EXPECT_EQ(f.n, 1u);
  EXPECT_NEAR(f.g.phi1, f.g.phi2, 1e-14);
  EXPECT_NEAR(f.g.psi1, f.g.phi1, 1e-14);
  EXPECT_NEAR(f.g.R, 0.5, 1e-15);
  EXPECT_NEAR(f.g.D, 0.5, 1e-15);
}

TEST(Frames, FirstEdgeFacesLadderPoint) {
  ConvexHull h;
  const Point2 xk{-1, 0}, xt{1, 0}, x{0.5, 0.5};
  for (bool ccw : {true, false}) {
    // mirror the picture so that both boundary orientations are exercised
    const double s = ccw ? 1.0 : -1.0;
    ConvexHull hh;
    hh.insert({xk.x, s * xk.y}, 0);
    hh.insert({xt.x, s * xt.y}, 1);
    hh.insert({x.x, s * x.y}, 2);
    const Point2 X{x.x, s * x.y};
    const LensFrame f = compute_frame(hh, X, 2, make_ladder(xt, xk));
    const FrameGeometry want = oracle::frame_from_geometry(
        X, xt, xk, std::atan2(xt.y - X.y, xt.x - X.x), std::atan2(xk.y - X.y, xk.x - X.x));
    EXPECT_NEAR(f.g.phi1, want.phi1, 1e-14);
    EXPECT_NEAR(f.g.phi2, want.phi2, 1e-14);
    EXPECT_NEAR(f.g.psi1, want.psi1, 1e-14);
    EXPECT_NEAR(f.g.psi2, want.psi2, 1e-14);
    EXPECT_NEAR(f.g.phi1, kPi / 2, 1e-14);
  }
}

TEST(Supermartingale, StartsAtOneAndEndsAtZero) {
  const Trajectory t = run_walk(3000, 7, SamplerMode::Direct);
  const auto lad = extract_ladders(t, K().gamma);
  auto frames = lens_frames(t, lad);
  good_flags(frames);
  const auto tracks = supermartingale_track(frames, lad, K());
  ASSERT_EQ(tracks.size(), lad.size() - 1);
  for (std::size_t i = 1; i < lad.size(); ++i) {
    const auto& tr = tracks[i - 1];
    ASSERT_FALSE(tr.empty());
    EXPECT_EQ(tr.front(), 1.0);
    if (lad[i].delta) {
      EXPECT_EQ(tr.size(), *lad[i].delta + 1);
      EXPECT_EQ(tr.back(), 0.0);
    }
    for (double m : tr) EXPECT_GE(m, 0.0);
  }
}

TEST(LadderEvents, NeedRejectionMode) {
  const Trajectory t = run_walk(100, 8, SamplerMode::Direct);
  auto lad = extract_ladders(t, K().gamma);
  EXPECT_THROW(a_events(t, lad), Error);
}

TEST(LadderEvents, EventImpliesHalfUnitGain) {
  const Trajectory t = run_walk(20000, 9, SamplerMode::Rejection);
  auto lad = extract_ladders(t, K().gamma);
  a_events(t, lad);
  std::size_t n_events = 0;
  for (std::size_t i = 1; i < lad.size(); ++i) {
    if (lad[i].A && *lad[i].A) {
      ++n_events;
      EXPECT_GE(t.steps[lad[i].tau + 1].d, lad[i].d_tau + 0.5 - 1e-9);
    }
  }
  EXPECT_GT(n_events, 100u);
}

TEST(Records, MaxDistanceRecordsMatchScan) {
  const Trajectory t = run_walk(3000, 10, SamplerMode::Direct);
  const auto lad = extract_ladders(t, K().gamma);
  const MaxLadders rec = max_ladders(t, lad);
  double m = 0;
  for (std::size_t n = 0; n < t.steps.size(); ++n) {
    m = std::max(m, norm(t.steps[n].pos));
    ASSERT_EQ(rec.M[n], m);
    ASSERT_LE(rec.M[n], t.steps[n].d + 1e-12);
    ASSERT_LE(t.steps[n].d, 2 * rec.M[n] + 1e-12);
  }
}

TEST(Analysis, HealthyRunsHaveNoViolations) {
  for (auto mode : {SamplerMode::Direct, SamplerMode::Rejection}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Trajectory t = run_walk(5000, seed, mode);
      const RunAnalysis a = analyze_run(t, K());
      for (std::size_t c = 0; c < a.violations.counts.size(); ++c) {
        EXPECT_EQ(a.violations.counts[c], 0u) << kCheckNames[c];
      }
      EXPECT_EQ(a.violations.frames_checked, 5000u);
      EXPECT_GT(a.violations.good_sufficient_frames, 0u);
    }
  }
}

TEST(Analysis, DetectsAnIllegalStep) {
  Trajectory t = run_walk(2000, 11, SamplerMode::Direct);
  // teleport one position into the hull's interior
  t.steps[1500].pos = t.steps[1000].pos;
  const RunAnalysis a = analyze_run(t, K(), {.drift_checks = false});
  EXPECT_GT(a.violations[Check::StepLength], 0u);
}
