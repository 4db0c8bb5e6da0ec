#include <gtest/gtest.h>

#include <random>

#include "rancher/error.hpp"
#include "rancher/geom.hpp"

using namespace rancher;

TEST(Geom, CanonicalAngleWrapsIntoHalfOpenCircle) {
  EXPECT_DOUBLE_EQ(canonical_angle(0.0), 0.0);
  EXPECT_NEAR(canonical_angle(-kPi / 2), 1.5 * kPi, 1e-15);
  EXPECT_NEAR(canonical_angle(5 * kPi), kPi, 1e-14);
  EXPECT_LT(canonical_angle(kTwoPi), kTwoPi);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(-100, 100);
  for (int i = 0; i < 10000; ++i) {
    const double t = canonical_angle(U(gen));
    ASSERT_GE(t, 0.0);
    ASSERT_LT(t, kTwoPi);
  }
}

TEST(Geom, DirOfVectorMatchesUnit) {
  const Dir d = Dir::of({0.0, 2.0});
  EXPECT_NEAR(d.theta(), kPi / 2, 1e-15);
  EXPECT_NEAR(d.unit().x, 0.0, 1e-15);
  EXPECT_NEAR(d.unit().y, 1.0, 1e-15);
}

TEST(Geom, OrientSignsAndCollinearTolerance) {
  EXPECT_EQ(orient({0, 0}, {1, 0}, {0, 1}), 1);
  EXPECT_EQ(orient({0, 0}, {1, 0}, {0, -1}), -1);
  EXPECT_EQ(orient({0, 0}, {1, 0}, {2, 0}), 0);
  EXPECT_EQ(orient({0, 0}, {1, 0}, {2, 1e-14}), 0);
}

TEST(Geom, AngleBetweenIsSymmetricAndAtMostPi) {
  EXPECT_NEAR(angle_between(Dir(0.1), Dir(kTwoPi - 0.1)), 0.2, 1e-14);
  EXPECT_NEAR(angle_between(Dir(0.0), Dir(kPi)), kPi, 1e-15);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(0, kTwoPi);
  for (int i = 0; i < 10000; ++i) {
    const Dir a(U(gen)), b(U(gen));
    const double ab = angle_between(a, b);
    ASSERT_NEAR(ab, angle_between(b, a), 1e-15);
    ASSERT_GE(ab, 0.0);
    ASSERT_LE(ab, kPi);
  }
}

TEST(Geom, ArcContainsAndParametrizes) {
  const Arc arc{Dir(1.5 * kPi), kPi};  // from 270 degrees through 0 to 90
  EXPECT_TRUE(arc.contains(Dir(0.0)));
  EXPECT_TRUE(arc.contains(Dir(0.25 * kPi)));
  EXPECT_FALSE(arc.contains(Dir(kPi)));
  EXPECT_NEAR(arc.at(0.5).theta(), 0.0, 1e-15);
  EXPECT_NEAR(arc.end().theta(), 0.5 * kPi, 1e-15);
}

TEST(Geom, ProjectionOntoLine) {
  const Point2 z = project_onto_line({3, 4}, {0, 0}, {10, 0});
  EXPECT_DOUBLE_EQ(z.x, 3.0);
  EXPECT_DOUBLE_EQ(z.y, 0.0);
  try {
    project_onto_line({1, 1}, {2, 2}, {2, 2});
    FAIL() << "expected DegenerateLine";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateLine);
  }
}

TEST(Geom, DistanceToSegmentClampsToEndpoints) {
  EXPECT_DOUBLE_EQ(dist_to_segment({-3, 4}, {0, 0}, {1, 0}), 5.0);
  EXPECT_DOUBLE_EQ(dist_to_segment({0.5, 2}, {0, 0}, {1, 0}), 2.0);
}
