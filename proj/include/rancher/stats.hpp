#pragma once
/**
 * @file stats.hpp
 * @brief Small statistical helpers for the Monte Carlo estimators.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "rancher/error.hpp"

namespace rancher::stats {

/// Count / sum / sum of squares; merging is commutative and associative.
struct Moments {
  double count{0.0};
  double sum{0.0};
  double sumsq{0.0};

  void add(double x) {
    count += 1.0;
    sum += x;
    sumsq += x * x;
  }
  void merge(const Moments& o) {
    count += o.count;
    sum += o.sum;
    sumsq += o.sumsq;
  }
  double mean() const { return count > 0 ? sum / count : 0.0; }
  double variance() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, (sumsq - count * m * m) / (count - 1.0));
  }
  double se() const { return count > 1 ? std::sqrt(variance() / count) : 0.0; }
};

/// Linear-interpolation quantile of a sorted sample (Hyndman-Fan type 7).
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic{0.0};
  double p_value{1.0};
};

/// Asymptotic p-value with the Stephens small-sample correction.
inline double ks_p_value(double d, double n_eff) {
  const double s = std::sqrt(n_eff);
  return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::InsufficientData, "empty KS sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb))};
}

template <class Cdf>
KsResult ks_one_sample(std::vector<double> a, Cdf&& cdf) {
  if (a.empty()) throw Error(ErrorKind::InsufficientData, "empty KS sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n)};
}

struct Interval {
  double lo{0.0};
  double hi{1.0};
};

/// Exact binomial (Clopper-Pearson) interval at confidence 1 - alpha.
inline Interval clopper_pearson(std::size_t k, std::size_t n, double alpha = 0.05) {
  if (n == 0) return {0.0, 1.0};
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  Interval iv;
  iv.lo = k == 0 ? 0.0 : boost::math::ibeta_inv(kk, nn - kk + 1.0, alpha / 2.0);
  iv.hi = k == n ? 1.0 : boost::math::ibeta_inv(kk + 1.0, nn - kk, 1.0 - alpha / 2.0);
  return iv;
}

struct LinearFit {
  double slope{0.0};
  double intercept{0.0};
  double r2{0.0};
  std::size_t points{0};
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  LinearFit f;
  f.points = std::min(x.size(), y.size());
  if (f.points < 2) return f;
  const double n = static_cast<double>(f.points);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < f.points; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < f.points; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

/// Sufficient statistics for a correlation between paired observations.
struct PairMoments {
  double n{0.0};
  double sa{0.0}, sb{0.0}, saa{0.0}, sbb{0.0}, sab{0.0};

  void add(double a, double b) {
    n += 1.0;
    sa += a;
    sb += b;
    saa += a * a;
    sbb += b * b;
    sab += a * b;
  }
  void merge(const PairMoments& o) {
    n += o.n;
    sa += o.sa;
    sb += o.sb;
    saa += o.saa;
    sbb += o.sbb;
    sab += o.sab;
  }
  double correlation() const {
    if (n < 2) return 0.0;
    const double cov = sab - sa * sb / n;
    const double va = saa - sa * sa / n;
    const double vb = sbb - sb * sb / n;
    return (va > 0.0 && vb > 0.0) ? cov / std::sqrt(va * vb) : 0.0;
  }
  /// Standard error of the sample correlation under independence.
  double null_se() const { return n > 1 ? 1.0 / std::sqrt(n) : 1.0; }
};

}  // namespace rancher::stats
