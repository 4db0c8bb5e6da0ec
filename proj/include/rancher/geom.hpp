#pragma once
/**
 * @file geom.hpp
 * @brief Planar primitives shared by the hull, walk and analysis code.
 *
 * Everything here is a pure function on doubles. Tolerances are absolute and
 * sized for the walk's natural scale (unit steps, coordinates well below 1e6).
 */

#include <cmath>
#include <numbers>

#include "rancher/error.hpp"

namespace rancher {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Orientation / collinearity tolerance on signed doubled areas.
inline constexpr double kEpsGeom = 1e-12;

struct Point2 {
  double x{0.0};
  double y{0.0};

  constexpr Point2() = default;
  constexpr Point2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Point2 operator+(const Point2& r) const { return {x + r.x, y + r.y}; }
  constexpr Point2 operator-(const Point2& r) const { return {x - r.x, y - r.y}; }
  constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Point2 operator/(double s) const { return {x / s, y / s}; }
  constexpr bool operator==(const Point2&) const = default;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Point2 operator*(double s, const Point2& p) { return p * s; }

constexpr double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline double dist(const Point2& a, const Point2& b) { return norm(a - b); }
constexpr Point2 midpoint(const Point2& a, const Point2& b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

/// Reduce any finite angle to [0, 2pi).
inline double canonical_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  // fmod of a value just below a multiple of 2pi can round up to 2pi
  if (t >= kTwoPi) t = 0.0;
  return t;
}

/// A direction in the plane, stored as a canonical angle in [0, 2pi).
class Dir {
 public:
  constexpr Dir() = default;
  explicit Dir(double theta) : theta_(canonical_angle(theta)) {}

  static Dir of(const Point2& v) { return Dir(std::atan2(v.y, v.x)); }

  double theta() const { return theta_; }
  Point2 unit() const { return {std::cos(theta_), std::sin(theta_)}; }

  bool operator==(const Dir&) const = default;

 private:
  double theta_{0.0};
};

/// Counterclockwise arc of directions [start, start + length].
struct Arc {
  Dir start;
  double length{kTwoPi};

  Dir end() const { return Dir(start.theta() + length); }

  /// Closed-arc membership with an angular slack.
  bool contains(Dir d, double slack = 0.0) const {
    const double off = canonical_angle(d.theta() - start.theta());
    return off <= length + slack || off >= kTwoPi - slack;
  }

  /// Map u in [0, 1) affinely onto the arc.
  Dir at(double u) const { return Dir(start.theta() + u * length); }
};

/// Sign of the signed area of (a, b, c); 0 within kEpsGeom.
inline int orient(const Point2& a, const Point2& b, const Point2& c) {
  const double area2 = cross(b - a, c - a);
  if (area2 > kEpsGeom) return 1;
  if (area2 < -kEpsGeom) return -1;
  return 0;
}

/// Unsigned angle between two directions, in [0, pi].
inline double angle_between(Dir u, Dir v) {
  const double d = std::abs(u.theta() - v.theta());
  return d > kPi ? kTwoPi - d : d;
}

/// Foot of the perpendicular from p onto the line through a and b.
inline Point2 project_onto_line(const Point2& p, const Point2& a, const Point2& b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (!(std::sqrt(len2) > kEpsGeom)) {
    throw Error(ErrorKind::DegenerateLine, "line through coincident points");
  }
  const double t = dot(p - a, ab) / len2;
  return a + ab * t;
}

/// Euclidean distance from p to the closed segment ab.
inline double dist_to_segment(const Point2& p, const Point2& a, const Point2& b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return dist(p, a);
  double t = dot(p - a, ab) / len2;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return dist(p, a + ab * t);
}

}  // namespace rancher
