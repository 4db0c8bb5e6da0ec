#include <gtest/gtest.h>

#include <vector>

#include "rancher/analysis.hpp"
#include "rancher/rng.hpp"
#include "rancher/stats.hpp"
#include "rancher/walk.hpp"

using namespace rancher;

TEST(Rng, SeedDerivationIsStableAndDistinct) {
  EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.uniform01(), b.uniform01());
  EXPECT_EQ(a.draws(), 100u);
}

TEST(Walk, ZeroStepsGivesOriginRow) {
  const Trajectory t = run_walk(0, 1, SamplerMode::Direct);
  ASSERT_EQ(t.steps.size(), 1u);
  const StepRecord& r = t.steps[0];
  EXPECT_EQ(r.pos.x, 0.0);
  EXPECT_EQ(r.pos.y, 0.0);
  EXPECT_EQ(r.d, 0.0);
  EXPECT_EQ(r.hull_size, 1u);
  EXPECT_DOUBLE_EQ(r.arc_len, kTwoPi);
  EXPECT_EQ(r.trials, 1u);
  EXPECT_FALSE(r.is_ladder);
}

TEST(Walk, FirstStepsAreLadderTimes) {
  for (auto mode : {SamplerMode::Direct, SamplerMode::Rejection}) {
    const Trajectory t = run_walk(2, 9, mode);
    EXPECT_TRUE(t.steps[1].is_ladder);
    EXPECT_DOUBLE_EQ(t.steps[1].d, 1.0);
    EXPECT_DOUBLE_EQ(t.steps[1].arc_len, kTwoPi);
    // a segment hull has empty interior, so the second step is unconstrained
    EXPECT_DOUBLE_EQ(t.steps[2].arc_len, kTwoPi);
  }
}

TEST(Walk, EveryStepIsLegalUnitLength) {
  for (auto mode : {SamplerMode::Direct, SamplerMode::Rejection}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Trajectory t = run_walk(5000, seed, mode);
      Violations v;
      check_steps(t, v);
      EXPECT_EQ(v.total(), 0u);
      EXPECT_EQ(v.steps_checked, 5000u);
    }
  }
}

TEST(Walk, SameSeedSameTrajectory) {
  const Trajectory a = run_walk(2000, 77, SamplerMode::Rejection);
  const Trajectory b = run_walk(2000, 77, SamplerMode::Rejection);
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    ASSERT_EQ(a.steps[i].pos.x, b.steps[i].pos.x);
    ASSERT_EQ(a.steps[i].pos.y, b.steps[i].pos.y);
    ASSERT_EQ(a.steps[i].first_trial, b.steps[i].first_trial);
  }
}

TEST(Walk, DirectModeDrawsOneVariatePerStep) {
  WalkState w(5, SamplerMode::Direct);
  for (int i = 0; i < 1000; ++i) w.step();
  EXPECT_EQ(w.rng().draws(), 1000u);
}

namespace {

WalkState frozen_state(std::uint64_t seed, int steps) {
  WalkState w(seed, SamplerMode::Direct);
  for (int i = 0; i < steps; ++i) w.step();
  return w;
}

}  // namespace

TEST(Walk, DirectSamplerIsUniformOnAllowedArc) {
  const WalkState w = frozen_state(21, 300);
  const Arc arc = w.allowed_arc();
  ASSERT_LT(arc.length, kTwoPi);
  Rng rng(1);
  std::vector<double> u;
  for (int i = 0; i < 20000; ++i) {
    const StepSample s = w.sample_direct(rng);
    u.push_back(canonical_angle(s.chosen.theta() - arc.start.theta()) / arc.length);
  }
  const auto ks = stats::ks_one_sample(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_GT(ks.p_value, 0.001);
}

TEST(Walk, RejectionTrialsAreGeometric) {
  const WalkState w = frozen_state(22, 400);
  const InteriorCone cone = w.cone();
  ASSERT_GT(cone.interior_angle, 0.0);
  const double q = (kTwoPi - cone.interior_angle) / kTwoPi;
  Rng rng(2);
  stats::Moments m;
  for (int i = 0; i < 20000; ++i) {
    const StepSample s = w.sample_rejection(rng);
    ASSERT_FALSE(points_into_interior(cone, s.chosen));
    ASSERT_TRUE(s.first_trial.has_value());
    if (s.trials == 1) {
      ASSERT_EQ(s.first_trial->theta(), s.chosen.theta());
    }
    m.add(s.trials);
  }
  const double se = std::sqrt((1 - q) / (q * q) / m.count);
  EXPECT_NEAR(m.mean(), 1 / q, 4 * se);
}

TEST(Walk, ParseSamplerMode) {
  EXPECT_EQ(parse_sampler_mode("direct"), SamplerMode::Direct);
  EXPECT_EQ(parse_sampler_mode("rejection"), SamplerMode::Rejection);
  EXPECT_THROW(parse_sampler_mode("inverse"), Error);
}
