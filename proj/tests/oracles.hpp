#pragma once
// Independent reference computations shared by the unit tests and the
// acceptance runner. None of these call into the code they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/special_functions/ellint_2.hpp>

#include "rancher/drift.hpp"
#include "rancher/geom.hpp"

namespace oracle {

using rancher::Point2;
constexpr double kPi = std::numbers::pi;

/// Strict extreme points of a planar set by Jarvis march, counterclockwise.
/// Points on an edge between two extreme points are not reported.
inline std::vector<Point2> gift_wrap(const std::vector<Point2>& pts) {
  std::vector<Point2> uniq;
  for (const auto& p : pts) {
    if (std::none_of(uniq.begin(), uniq.end(), [&](const Point2& q) { return q == p; })) {
      uniq.push_back(p);
    }
  }
  if (uniq.size() < 3) return uniq;
  auto cross3 = [](const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  auto d2 = [](const Point2& a, const Point2& b) {
    return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
  };
  std::size_t start = 0;
  for (std::size_t i = 1; i < uniq.size(); ++i) {
    if (uniq[i].x < uniq[start].x || (uniq[i].x == uniq[start].x && uniq[i].y < uniq[start].y)) {
      start = i;
    }
  }
  std::vector<Point2> hull;
  std::size_t cur = start;
  do {
    hull.push_back(uniq[cur]);
    std::size_t cand = cur == 0 ? 1 : 0;
    for (std::size_t i = 0; i < uniq.size(); ++i) {
      if (i == cur) continue;
      const double c = cross3(uniq[cur], uniq[cand], uniq[i]);
      // take the most clockwise point; on ties the farthest one
      if (c < 0 || (c == 0 && d2(uniq[cur], uniq[i]) > d2(uniq[cur], uniq[cand]))) cand = i;
    }
    cur = cand;
  } while (cur != start && hull.size() <= uniq.size());
  if (hull.size() >= 3) {
    // all points collinear: the march returns the two ends
    bool flat = true;
    for (std::size_t i = 2; i < hull.size() && flat; ++i) flat = cross3(hull[0], hull[1], hull[i]) == 0;
    if (flat) hull.resize(2);
  }
  return hull;
}

/// Diameter by scanning every pair.
inline double diameter_scan(const std::vector<Point2>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::max(best, std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
    }
  }
  return best;
}

/// Composite midpoint rule for the radial drift.
inline double riemann_drift_R(double R, double phi1, double phi2, std::size_t panels) {
  const double lo = phi2, hi = 2 * kPi - phi1, h = (hi - lo) / static_cast<double>(panels);
  long double sum = 0.0L;
  for (std::size_t i = 0; i < panels; ++i) {
    const double phi = lo + (static_cast<double>(i) + 0.5) * h;
    sum += std::sqrt(R * R - 2 * R * std::cos(phi) + 1);
  }
  return static_cast<double>(sum * h) / (hi - lo) - R;
}

/// Radial drift in closed form. With phi = pi + 2t the integrand becomes
/// (R + 1) sqrt(1 - k^2 sin^2 t), k^2 = 4R / (R + 1)^2, so the integral is an
/// incomplete elliptic integral of the second kind.
inline double elliptic_drift_R(double R, double phi1, double phi2) {
  const double lo = phi2, hi = 2 * kPi - phi1;
  const double k = 2.0 * std::sqrt(R) / (R + 1.0);
  auto E = [&](double phi) { return boost::math::ellint_2(k, (phi - kPi) / 2.0); };
  const double integral = 2.0 * (R + 1.0) * (E(hi) - E(lo));
  return integral / (hi - lo) - R;
}

/// Transversal drift from the primitive D psi - sin psi of D - cos psi,
/// with the sign flipping at psi = arccos D and 2 pi - arccos D.
inline double closed_form_drift_D(double D, double psi1, double psi2) {
  const double lo = psi2, hi = 2 * kPi - psi1;
  auto F = [D](double x) { return D * x - std::sin(x); };
  std::vector<double> cuts{lo};
  if (D < 1.0) {
    const double a = std::acos(D);
    for (double c : {a, 2 * kPi - a}) {
      if (c > lo && c < hi) cuts.push_back(c);
    }
  }
  cuts.push_back(hi);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) integral += std::abs(F(cuts[i + 1]) - F(cuts[i]));
  return integral / (hi - lo) - D;
}

/// Lens-frame parameters for a point X in the lens of a diametral pair,
/// with boundary edge directions s_tau (next to the direction towards
/// x_tau) and s_k (next to x_k). Mirrors the definitions independently.
inline rancher::FrameGeometry frame_from_geometry(Point2 x, Point2 x_tau, Point2 x_k, double th_s1,
                                                  double th_s2) {
  auto angle_to = [](double a, double b) {
    double d = std::fmod(std::abs(a - b), 2 * kPi);
    return d > kPi ? 2 * kPi - d : d;
  };
  const Point2 y{(x_tau.x + x_k.x) / 2, (x_tau.y + x_k.y) / 2};
  const double ex = x_k.x - x_tau.x, ey = x_k.y - x_tau.y;
  const double t = ((x.x - x_tau.x) * ex + (x.y - x_tau.y) * ey) / (ex * ex + ey * ey);
  const Point2 z{x_tau.x + t * ex, x_tau.y + t * ey};
  rancher::FrameGeometry g;
  g.R = std::hypot(x.x - y.x, x.y - y.y);
  g.D = std::hypot(x.x - z.x, x.y - z.y);
  const double th_y = std::atan2(y.y - x.y, y.x - x.x);
  g.phi1 = angle_to(th_s1, th_y);
  g.phi2 = angle_to(th_s2, th_y);
  if (g.D > 1e-12) {
    const double th_z = std::atan2(z.y - x.y, z.x - x.x);
    g.psi1 = angle_to(th_s1, th_z);
    g.psi2 = angle_to(th_s2, th_z);
  } else {
    g.psi1 = g.phi1;
    g.psi2 = g.phi2;
  }
  return g;
}

/// Random admissible frame: diametral segment of length d on the x axis, X
/// uniform in the lens, and a convex interior cone (angle <= pi) at X that
/// contains both diametral endpoints.
template <class Gen>
rancher::FrameGeometry random_frame(Gen& gen) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double d = std::exp(std::log(1.0) + U(gen) * std::log(500.0));
  const Point2 x_tau{d / 2, 0}, x_k{-d / 2, 0};
  Point2 x;
  do {
    x = {(2 * U(gen) - 1) * d / 2, (2 * U(gen) - 1) * d};
  } while (std::hypot(x.x - x_tau.x, x.y - x_tau.y) > d ||
           std::hypot(x.x - x_k.x, x.y - x_k.y) > d ||
           std::hypot(x.x - x_tau.x, x.y - x_tau.y) < 1e-6);
  const double th_tau = std::atan2(x_tau.y - x.y, x_tau.x - x.x);
  const double th_k = std::atan2(x_k.y - x.y, x_k.x - x.x);
  // ccw gap from tau to k, taken the short way
  double gap = std::fmod(th_k - th_tau + 4 * kPi, 2 * kPi);
  const bool tau_first = gap <= kPi;
  if (!tau_first) gap = 2 * kPi - gap;
  const double slack = kPi - gap;
  const double e1 = U(gen) * slack;
  const double e2 = U(gen) * (slack - e1);
  double th_s1, th_s2;
  if (tau_first) {  // cone runs ccw: s1, tau, k, s2
    th_s1 = th_tau - e1;
    th_s2 = th_k + e2;
  } else {  // cone runs ccw: s2, k, tau, s1
    th_s1 = th_tau + e1;
    th_s2 = th_k - e2;
  }
  return frame_from_geometry(x, x_tau, x_k, th_s1, th_s2);
}

}  // namespace oracle
