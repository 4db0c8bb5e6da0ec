#pragma once
/**
 * @file drift.hpp
 * @brief Exact one-step conditional drifts of R and D, and the derived
 * constants that drive the good-time and supermartingale machinery.
 *
 * Conditional on the past, the step direction measured from the walker's
 * view of the centre (resp. of the foot Z) is uniform on [a2, 2pi - a1],
 * where a1, a2 are the angles between the two boundary edges and that view.
 * The drifts are therefore one-dimensional averages:
 *
 *   E[R'] = avg over phi of sqrt(R^2 - 2 R cos(phi) + 1)
 *   E[D'] = avg over psi of |D - cos(psi)|
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "rancher/error.hpp"
#include "rancher/geom.hpp"
#include "rancher/quadrature.hpp"

namespace rancher {

/// Target accuracy of a drift value, and the failure threshold.
inline constexpr double kDriftQuadTol = 1e-12;
inline constexpr double kDriftQuadMaxError = 1e-10;
/// Slack on every drift inequality.
inline constexpr double kDriftSlack = 1e-9;

struct DriftResult {
  double value{0.0};
  double bound{0.0};
  bool satisfied{false};
  double quadrature_error{0.0};
};

/// The scalar parameters of a lens frame that the drift formulas consume.
struct FrameGeometry {
  double R{0.0};
  double D{0.0};
  double phi1{0.0};
  double phi2{0.0};
  double psi1{0.0};
  double psi2{0.0};
};

namespace detail {

inline void check_angles(double a1, double a2, const char* what) {
  const bool ok = a1 >= -kDriftSlack && a2 >= -kDriftSlack && a1 <= kPi + kDriftSlack &&
                  a2 <= kPi + kDriftSlack && a1 + a2 <= kPi + kDriftSlack;
  if (!ok) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + ": angles outside the admissible range");
  }
}

inline double clamp_angle(double a) { return a < 0.0 ? 0.0 : (a > kPi ? kPi : a); }

}  // namespace detail

/// Expected increment of the distance to the centre.
inline DriftResult drift_R(double R, double phi1, double phi2) {
  detail::check_angles(phi1, phi2, "drift_R");
  phi1 = detail::clamp_angle(phi1);
  phi2 = detail::clamp_angle(phi2);
  const double lo = phi2;
  const double hi = kTwoPi - phi1;
  const double len = hi - lo;
  auto integrand = [R](double phi) {
    const double dx = R - std::cos(phi);
    const double dy = std::sin(phi);
    return std::sqrt(dx * dx + dy * dy);
  };
  const QuadResult q = integrate_adaptive(integrand, lo, hi, kDriftQuadTol * len);
  DriftResult r;
  r.value = q.value / len - R;
  r.quadrature_error = q.abs_error / len;
  r.bound = (std::sin(phi1) + std::sin(phi2)) / kTwoPi;
  r.satisfied = r.value >= r.bound - kDriftSlack;
  if (r.quadrature_error > kDriftQuadMaxError) {
    throw Error(ErrorKind::QuadratureFailure, "drift_R did not reach 1e-10");
  }
  return r;
}

/// Expected increment of the distance to the diametral line. The integrand
/// has kinks where cos(psi) = D; the integral is split there.
inline DriftResult drift_D(double D, double psi1, double psi2) {
  detail::check_angles(psi1, psi2, "drift_D");
  psi1 = detail::clamp_angle(psi1);
  psi2 = detail::clamp_angle(psi2);
  const double lo = psi2;
  const double hi = kTwoPi - psi1;
  const double len = hi - lo;
  std::array<double, 2> kinks{};
  std::size_t n_kinks = 0;
  if (D < 1.0) {
    const double k = std::acos(D);
    kinks[n_kinks++] = k;
    kinks[n_kinks++] = kTwoPi - k;
  }
  auto integrand = [D](double psi) { return std::abs(D - std::cos(psi)); };
  const QuadResult q = integrate_adaptive(integrand, lo, hi, kDriftQuadTol * len,
                                          std::span<const double>(kinks.data(), n_kinks));
  DriftResult r;
  r.value = q.value / len - D;
  r.quadrature_error = q.abs_error / len;
  r.bound = (std::sin(psi1) + std::sin(psi2)) / kTwoPi;
  r.satisfied = r.value >= r.bound - kDriftSlack;
  if (r.quadrature_error > kDriftQuadMaxError) {
    throw Error(ErrorKind::QuadratureFailure, "drift_D did not reach 1e-10");
  }
  return r;
}

/// Lower bound on the summed drift of R + D.
inline constexpr double kDriftSumBound = 1.0 / (4.0 * kPi * kPi);

inline DriftResult drift_sum_check(const FrameGeometry& g) {
  const DriftResult r = drift_R(g.R, g.phi1, g.phi2);
  const DriftResult d = drift_D(g.D, g.psi1, g.psi2);
  DriftResult s;
  s.value = r.value + d.value;
  s.bound = kDriftSumBound;
  s.satisfied = s.value >= s.bound - kDriftSlack;
  s.quadrature_error = r.quadrature_error + d.quadrature_error;
  return s;
}

/// Threshold on the radial drift that makes a step index "good".
inline const double kGoodDriftThreshold = 1.0 / (kPi * std::sqrt(8.0));

struct WalkConstants {
  double beta{0.0};
  double gamma{0.0};
  double c_ekg{0.0};
  double c_boun{0.0};
  double c_alll{0.0};
  double c_ofer{0.0};
  double c_witri{0.0};
  double c_posi{0.0};
};

/// 1 - c*c_ekg + (c*c_boun)^2 exp(c*c_boun) / 2, minus one (kept small and exact).
inline double taylor_excess(double c, double c_ekg, double c_boun) {
  const double cb = c * c_boun;
  return -c * c_ekg + 0.5 * cb * cb * std::exp(cb);
}

/// Per-step decay rate implied by a choice of c; negative when c is too large.
inline double decay_rate(double c, double c_ekg, double c_boun) {
  return -std::log1p(taylor_excess(c, c_ekg, c_boun));
}

/// Fix beta and gamma, then pick c_alll to maximize the decay rate and
/// derive the remaining constants from it.
inline WalkConstants derive_constants() {
  WalkConstants k;
  k.beta = 1.0 + 4.0 * kPi * std::sqrt(8.0);
  k.gamma = 1.0 / (2.0 * k.beta);
  k.c_ekg = 1.0 / (4.0 * kPi * kPi);
  k.c_boun = 1.0 + k.beta + 4.0;

  auto rate = [&](double c) { return decay_rate(c, k.c_ekg, k.c_boun); };

  // log-spaced scan of (0, 1e-3]
  constexpr int kScan = 600;
  const double log_lo = std::log(1e-12);
  const double log_hi = std::log(1e-3);
  int best = 0;
  double best_rate = -1.0;
  std::array<double, kScan + 1> grid{};
  for (int i = 0; i <= kScan; ++i) {
    grid[i] = std::exp(log_lo + (log_hi - log_lo) * i / kScan);
    const double r = rate(grid[i]);
    if (r > best_rate) {
      best_rate = r;
      best = i;
    }
  }
  // golden-section refinement on the bracketing cells
  double a = grid[best > 0 ? best - 1 : 0];
  double b = grid[best < kScan ? best + 1 : kScan];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = rate(x1);
  double f2 = rate(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-16 * b; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = rate(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = rate(x1);
    }
  }
  k.c_alll = 0.5 * (a + b);
  k.c_ofer = rate(k.c_alll);
  k.c_witri = k.c_alll * (1.0 + 2.0 * k.beta) / k.c_ofer;
  k.c_posi = k.gamma * k.c_ofer / (k.c_witri + k.gamma);
  return k;
}

/// Largest relative residual over the defining relations of the constants.
inline double constants_residual(const WalkConstants& k) {
  auto rel = [](double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
  };
  double worst = 0.0;
  worst = std::max(worst, rel(k.beta, 1.0 + 4.0 * kPi * std::sqrt(8.0)));
  worst = std::max(worst, rel(k.gamma, 1.0 / (2.0 * k.beta)));
  worst = std::max(worst, rel(k.beta * k.gamma, 0.5));
  worst = std::max(worst, rel(k.c_ekg, 1.0 / (4.0 * kPi * kPi)));
  worst = std::max(worst, rel(k.c_boun, 1.0 + k.beta + 4.0));
  worst = std::max(worst, rel(k.c_ofer, decay_rate(k.c_alll, k.c_ekg, k.c_boun)));
  worst = std::max(worst, rel(k.c_witri, k.c_alll * (1.0 + 2.0 * k.beta) / k.c_ofer));
  worst = std::max(worst, rel(k.c_posi, k.gamma * k.c_ofer / (k.c_witri + k.gamma)));
  if (!(k.c_alll > 0.0) || !(taylor_excess(k.c_alll, k.c_ekg, k.c_boun) < 0.0)) {
    worst = std::max(worst, 1.0);
  }
  return worst;
}

/// Prefactor of the supermartingale bound: exp(c_alll * c_boun).
inline double supermartingale_prefactor(const WalkConstants& k) {
  return std::exp(k.c_alll * k.c_boun);
}

/// FNV-1a digest of the constants printed with round-trip precision.
inline std::string constants_digest(const WalkConstants& k) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[64];
  for (double v : {k.beta, k.gamma, k.c_ekg, k.c_boun, k.c_alll, k.c_ofer, k.c_witri, k.c_posi}) {
    const int n = std::snprintf(buf, sizeof buf, "%.17g;", v);
    for (int i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rancher
