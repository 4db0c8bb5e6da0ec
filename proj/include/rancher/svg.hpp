#pragma once
/**
 * @file svg.hpp
 * @brief Static SVG pictures of a trajectory: the path, the final hull, the
 * lens of each ladder epoch and the small ball around each ladder point.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "rancher/error.hpp"
#include "rancher/geom.hpp"
#include "rancher/hull.hpp"
#include "rancher/observables.hpp"
#include "rancher/walk.hpp"

namespace rancher {

struct SvgOptions {
  double width{800.0};
  std::size_t max_lenses{50};
  bool lenses{true};
  bool gamma_balls{true};
};

namespace detail {

struct SvgFrame {
  double min_x, max_y, scale, pad;
  // SVG's y axis points down; flip it.
  double sx(double x) const { return pad + (x - min_x) * scale; }
  double sy(double y) const { return pad + (max_y - y) * scale; }
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace detail

/// Render a trajectory. The lens of epoch i is the intersection of the two
/// closed balls of radius d_tau around X_tau and X_k; its corners sit at
/// Y +- (sqrt(3)/2) d_tau times the unit normal of the diametral segment.
inline void render_svg(std::ostream& os, const Trajectory& traj,
                       const std::vector<LadderRecord>& ladders, double gamma,
                       const SvgOptions& opt = {}) {
  const auto& rows = traj.steps;
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (const auto& r : rows) {
    min_x = std::min(min_x, r.pos.x);
    max_x = std::max(max_x, r.pos.x);
    min_y = std::min(min_y, r.pos.y);
    max_y = std::max(max_y, r.pos.y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
  const double pad = 20.0;
  const double scale = (opt.width - 2 * pad) / span;
  const detail::SvgFrame fr{min_x, max_y, scale, pad};
  const double w = 2 * pad + (max_x - min_x) * scale;
  const double h = 2 * pad + (max_y - min_y) * scale;
  using detail::num;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\""
     << num(h) << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (opt.lenses || opt.gamma_balls) {
    std::vector<std::size_t> picks;
    const std::size_t n_lad = ladders.size() > 1 ? ladders.size() - 1 : 0;
    const std::size_t stride = std::max<std::size_t>(1, (n_lad + opt.max_lenses - 1) /
                                                            std::max<std::size_t>(1, opt.max_lenses));
    for (std::size_t i = 1; i < ladders.size(); i += stride) picks.push_back(i);
    if (n_lad > 0 && picks.back() != ladders.size() - 1) picks.push_back(ladders.size() - 1);

    for (std::size_t i : picks) {
      const LadderRecord& l = ladders[i];
      if (opt.lenses && l.d_tau > 0.0) {
        const Point2 axis = (l.x_tau - l.x_k) / l.d_tau;
        const Point2 perp{-axis.y, axis.x};
        const Point2 c1 = l.Y + perp * (std::sqrt(3.0) / 2.0 * l.d_tau);
        const Point2 c2 = l.Y - perp * (std::sqrt(3.0) / 2.0 * l.d_tau);
        const double r = l.d_tau * scale;
        // Both arcs bulge away from the segment; same sweep flag closes the lens.
        os << "<path d=\"M " << num(fr.sx(c1.x)) << ' ' << num(fr.sy(c1.y)) << " A " << num(r)
           << ' ' << num(r) << " 0 0 1 " << num(fr.sx(c2.x)) << ' ' << num(fr.sy(c2.y))
           << " A " << num(r) << ' ' << num(r) << " 0 0 1 " << num(fr.sx(c1.x)) << ' '
           << num(fr.sy(c1.y))
           << " Z\" fill=\"#4a90d9\" fill-opacity=\"0.04\" stroke=\"#4a90d9\" "
              "stroke-opacity=\"0.5\" stroke-width=\"0.6\"/>\n";
      }
      if (opt.gamma_balls) {
        os << "<circle cx=\"" << num(fr.sx(l.x_tau.x)) << "\" cy=\"" << num(fr.sy(l.x_tau.y))
           << "\" r=\"" << num(std::max(gamma * l.d_tau * scale, 0.5))
           << "\" fill=\"none\" stroke=\"#d9534f\" stroke-width=\"0.6\"/>\n";
      }
    }
  }

  ConvexHull hull;
  for (std::size_t m = 0; m < rows.size(); ++m) hull.try_insert(rows[m].pos, m);
  os << "<polygon points=\"";
  for (const auto& v : hull.vertices()) os << num(fr.sx(v.p.x)) << ',' << num(fr.sy(v.p.y)) << ' ';
  os << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  os << "<polyline points=\"";
  for (const auto& r : rows) os << num(fr.sx(r.pos.x)) << ',' << num(fr.sy(r.pos.y)) << ' ';
  os << "\" fill=\"none\" stroke=\"#222\" stroke-width=\"0.5\"/>\n";

  os << "<circle cx=\"" << num(fr.sx(0)) << "\" cy=\"" << num(fr.sy(0))
     << "\" r=\"3\" fill=\"#2a2\"/>\n";
  if (!rows.empty()) {
    os << "<circle cx=\"" << num(fr.sx(rows.back().pos.x)) << "\" cy=\""
       << num(fr.sy(rows.back().pos.y)) << "\" r=\"3\" fill=\"#c22\"/>\n";
  }
  os << "</svg>\n";
}

inline void render_svg_file(const std::string& path, const Trajectory& traj,
                            const std::vector<LadderRecord>& ladders, double gamma,
                            const SvgOptions& opt = {}) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  render_svg(os, traj, ladders, gamma, opt);
  if (!os) throw Error(ErrorKind::Io, "write failed on '" + path + "'");
}

}  // namespace rancher
