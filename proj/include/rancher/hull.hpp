#pragma once
/**
 * @file hull.hpp
 * @brief Incremental planar convex hull with the queries the walk needs.
 *
 * Vertices are kept counterclockwise in a flat vector. Insertion finds the
 * chain of edges visible from the new point and splices it out, which is
 * linear in the vertex count; hulls of this walk stay small.
 *
 * Every vertex carries its birth index (the step at which it was inserted),
 * so analysis code can find X_k among the current vertices.
 */

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "rancher/error.hpp"
#include "rancher/geom.hpp"

namespace rancher {

/// Distance below which a point counts as lying on a hull edge.
inline constexpr double kBoundaryTol = 1e-9;
/// A segment must penetrate deeper than this to "hit" the open interior.
inline constexpr double kLegalityTol = 1e-9;

enum class HullRank { Empty, Point, Segment, Full };

struct HullVertex {
  Point2 p;
  std::size_t birth{0};
};

enum class InsertOutcome { Extended, OnBoundary, Interior };

class ConvexHull {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  HullRank rank() const { return rank_; }
  std::size_t size() const { return verts_.size(); }
  bool empty() const { return verts_.empty(); }
  std::span<const HullVertex> vertices() const { return verts_; }
  const HullVertex& operator[](std::size_t i) const { return verts_[i]; }

  std::size_t next(std::size_t i) const { return i + 1 == verts_.size() ? 0 : i + 1; }
  std::size_t prev(std::size_t i) const { return i == 0 ? verts_.size() - 1 : i - 1; }

  /// Insert p. Returns the vertex index of p, or npos when p fell on the
  /// boundary and the hull is unchanged. Throws InteriorInsertion when p is
  /// strictly inside, which the walk never produces.
  std::size_t insert(const Point2& p, std::size_t birth) {
    std::size_t idx = npos;
    if (try_insert(p, birth, &idx) == InsertOutcome::Interior) {
      throw Error(ErrorKind::InteriorInsertion, "point strictly inside hull");
    }
    return idx;
  }

  /// Insert p if it is not strictly interior. General point sets use this.
  InsertOutcome try_insert(const Point2& p, std::size_t birth, std::size_t* index = nullptr) {
    if (index) *index = npos;
    switch (rank_) {
      case HullRank::Empty:
        verts_.push_back({p, birth});
        rank_ = HullRank::Point;
        if (index) *index = 0;
        return InsertOutcome::Extended;
      case HullRank::Point:
        if (dist(verts_[0].p, p) <= kEpsGeom) return InsertOutcome::OnBoundary;
        verts_.push_back({p, birth});
        rank_ = HullRank::Segment;
        if (index) *index = 1;
        return InsertOutcome::Extended;
      case HullRank::Segment:
        return insert_into_segment(p, birth, index);
      case HullRank::Full:
        return insert_into_polygon(p, birth, index);
    }
    return InsertOutcome::OnBoundary;
  }

  /// True iff p lies in the open interior (beyond orientation tolerance).
  bool contains_strictly(const Point2& p) const {
    if (rank_ != HullRank::Full) return false;
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      if (orient(verts_[i].p, verts_[next(i)].p, p) <= 0) return false;
    }
    return true;
  }

  std::optional<std::size_t> find_vertex(const Point2& p) const {
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      if (verts_[i].p == p) return i;
    }
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      if (dist(verts_[i].p, p) <= kEpsGeom) return i;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> find_birth(std::size_t birth) const {
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      if (verts_[i].birth == birth) return i;
    }
    return std::nullopt;
  }

  /// Position of a boundary point as (vertex index + fraction along the
  /// outgoing ccw edge), in [0, size). Throws NotOnBoundary.
  double boundary_param(const Point2& q) const {
    if (auto v = find_vertex(q)) return static_cast<double>(*v);
    if (verts_.size() >= 2) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_edge = 0;
      for (std::size_t i = 0; i < verts_.size(); ++i) {
        const double dd = dist_to_segment(q, verts_[i].p, verts_[next(i)].p);
        if (dd < best) {
          best = dd;
          best_edge = i;
        }
      }
      if (best <= kBoundaryTol) {
        const Point2 a = verts_[best_edge].p;
        const Point2 ab = verts_[next(best_edge)].p - a;
        const double t = std::clamp(dot(q - a, ab) / dot(ab, ab), 0.0, 1.0);
        return static_cast<double>(best_edge) + t;
      }
    }
    throw Error(ErrorKind::NotOnBoundary, "point is neither a vertex nor on an edge");
  }

 private:
  InsertOutcome insert_into_segment(const Point2& p, std::size_t birth, std::size_t* index) {
    const Point2 a = verts_[0].p;
    const Point2 b = verts_[1].p;
    const int o = orient(a, b, p);
    if (o == 0) {
      const Point2 ab = b - a;
      const double t = dot(p - a, ab) / dot(ab, ab);
      if (t < 0.0 && dist(p, a) > kEpsGeom) {
        verts_[0] = {p, birth};
        if (index) *index = 0;
        return InsertOutcome::Extended;
      }
      if (t > 1.0 && dist(p, b) > kEpsGeom) {
        verts_[1] = {p, birth};
        if (index) *index = 1;
        return InsertOutcome::Extended;
      }
      return InsertOutcome::OnBoundary;
    }
    rank_ = HullRank::Full;
    if (o > 0) {
      verts_.push_back({p, birth});
      if (index) *index = 2;
    } else {
      verts_.insert(verts_.begin() + 1, HullVertex{p, birth});
      if (index) *index = 1;
    }
    return InsertOutcome::Extended;
  }

  InsertOutcome insert_into_polygon(const Point2& p, std::size_t birth, std::size_t* index) {
    const std::size_t h = verts_.size();
    visible_.assign(h, 0);
    bool any_visible = false;
    bool any_on_line = false;
    for (std::size_t i = 0; i < h; ++i) {
      const int o = orient(verts_[i].p, verts_[next(i)].p, p);
      visible_[i] = o < 0;
      any_visible |= o < 0;
      any_on_line |= o == 0;
    }
    if (!any_visible) {
      return any_on_line ? InsertOutcome::OnBoundary : InsertOutcome::Interior;
    }

    // First visible edge whose predecessor is not visible.
    std::size_t s = 0;
    while (!(visible_[s] && !visible_[prev(s)])) {
      ++s;
      if (s == h) throw Error(ErrorKind::InternalError, "every hull edge visible");
    }
    std::size_t e = s;
    std::size_t removed = 0;
    while (visible_[next(e)] && next(e) != s) {
      e = next(e);
      ++removed;
    }
    // Vertices strictly inside the visible chain, s+1 .. e.
    std::size_t keep_first = next(e);  // v_{e+1}
    std::size_t keep_last = s;         // v_s

    // Drop neighbours that end up collinear with p.
    while (h - removed > 2 &&
           orient(verts_[prev(keep_last)].p, verts_[keep_last].p, p) == 0) {
      keep_last = prev(keep_last);
      ++removed;
    }
    while (h - removed > 2 &&
           orient(verts_[keep_first].p, verts_[next(keep_first)].p, p) == 0) {
      keep_first = next(keep_first);
      ++removed;
    }

    scratch_.clear();
    for (std::size_t i = keep_first;; i = next(i)) {
      scratch_.push_back(verts_[i]);
      if (i == keep_last) break;
    }
    scratch_.push_back({p, birth});
    verts_.swap(scratch_);
    if (index) *index = verts_.size() - 1;
    return InsertOutcome::Extended;
  }

  std::vector<HullVertex> verts_;
  HullRank rank_{HullRank::Empty};
  std::vector<char> visible_;
  std::vector<HullVertex> scratch_;
};

/// Directions from a boundary point along its two incident boundary edges.
/// The open interior cone runs counterclockwise from dir_next to dir_prev.
struct InteriorCone {
  Dir dir_prev;
  Dir dir_next;
  double interior_angle{0.0};
};

/// Cone at the vertex with the given index (no search).
inline InteriorCone interior_cone_at(const ConvexHull& hull, std::size_t i) {
  const Point2 v = hull[i].p;
  if (hull.size() < 2) return {};
  if (hull.rank() != HullRank::Full) {
    const Dir other = Dir::of(hull[hull.next(i)].p - v);
    return {other, other, 0.0};
  }
  const Dir to_next = Dir::of(hull[hull.next(i)].p - v);
  const Dir to_prev = Dir::of(hull[hull.prev(i)].p - v);
  return {to_prev, to_next, canonical_angle(to_prev.theta() - to_next.theta())};
}

inline InteriorCone interior_cone(const ConvexHull& hull, const Point2& v) {
  if (hull.empty()) throw Error(ErrorKind::NotOnBoundary, "empty hull");
  if (auto idx = hull.find_vertex(v)) return interior_cone_at(hull, *idx);
  const double param = hull.boundary_param(v);  // throws NotOnBoundary
  const auto e = static_cast<std::size_t>(param);
  const Dir to_a = Dir::of(hull[e].p - v);
  const Dir to_b = Dir::of(hull[hull.next(e)].p - v);
  if (hull.rank() != HullRank::Full) return {to_a, to_b, 0.0};
  return {to_a, to_b, kPi};
}

/// Allowed step directions at a boundary point: the closed complement of the
/// open interior cone. Full circle when the hull has empty interior.
inline Arc allowed_arc(const InteriorCone& cone) {
  if (cone.interior_angle <= 0.0) return Arc{Dir(0.0), kTwoPi};
  return Arc{cone.dir_prev, kTwoPi - cone.interior_angle};
}

/// True iff the closed segment ab meets the open interior of the hull.
inline bool segment_hits_interior(const ConvexHull& hull, const Point2& a, const Point2& b) {
  if (hull.rank() != HullRank::Full) return false;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const std::size_t h = hull.size();
  for (std::size_t i = 0; i < h; ++i) {
    const Point2 p0 = hull[i].p;
    const Point2 edge = hull[hull.next(i)].p - p0;
    const double len = norm(edge);
    // inward signed distance along the segment: s(t) = s0 + t * s1
    const double s0 = cross(edge, a - p0) / len;
    const double s1 = cross(edge, b - a) / len;
    if (s1 == 0.0) {
      if (!(s0 > kLegalityTol)) return false;
    } else if (s1 > 0.0) {
      lo = std::max(lo, (kLegalityTol - s0) / s1);
    } else {
      hi = std::min(hi, (kLegalityTol - s0) / s1);
    }
  }
  return lo < hi && lo < 1.0 && hi > 0.0;
}

/// Current diameter and the birth indices of a realizing pair.
struct DiameterState {
  double d{0.0};
  std::size_t endpoint_a{0};
  std::size_t endpoint_b{0};
};

/// Diameter after adding p to hull_before. Any new diametral pair contains p,
/// so a scan of the old vertices suffices. Ties go to the smallest birth.
inline DiameterState update_diameter(const DiameterState& ds, const ConvexHull& hull_before,
                                     const Point2& p, std::size_t birth_p) {
  double best = -1.0;
  std::size_t best_birth = 0;
  for (const auto& v : hull_before.vertices()) {
    const double dd = dist(v.p, p);
    if (dd > best || (dd == best && v.birth < best_birth)) {
      best = dd;
      best_birth = v.birth;
    }
  }
  if (best > ds.d) return {best, best_birth, birth_p};
  return ds;
}

}  // namespace rancher
