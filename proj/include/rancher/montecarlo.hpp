#pragma once
/**
 * @file montecarlo.hpp
 * @brief Ensembles of independent walks and the estimators built on them.
 *
 * Run r uses seed derive_seed(master_seed, r). Workers pull run indices from
 * a shared counter and each writes only its own result slot; estimators then
 * fold the summaries in run order, so output is bit-identical for any worker
 * count.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rancher/analysis.hpp"
#include "rancher/drift.hpp"
#include "rancher/error.hpp"
#include "rancher/rng.hpp"
#include "rancher/stats.hpp"
#include "rancher/walk.hpp"

namespace rancher {

struct EnsembleConfig {
  std::size_t runs{1};
  std::size_t steps{10'000};
  std::uint64_t master_seed{1};
  SamplerMode mode{SamplerMode::Rejection};
  std::vector<std::size_t> checkpoints;
  std::size_t workers{0};          // 0 = hardware concurrency
  std::size_t m_horizon{64};       // largest n tracked for E[M_{i,n}]
  bool drift_checks{false};        // exact drift integrals on every frame

  void validate() const {
    if (runs < 1) throw Error(ErrorKind::InvalidArgument, "runs must be >= 1");
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
      throw Error(ErrorKind::InvalidArgument, "checkpoints must be sorted");
    }
    if (!checkpoints.empty() && checkpoints.back() > steps) {
      throw Error(ErrorKind::InvalidArgument, "checkpoint beyond the last step");
    }
  }
};

/// Evenly spread default checkpoints ending at steps.
inline std::vector<std::size_t> default_checkpoints(std::size_t steps) {
  std::vector<std::size_t> out;
  for (std::size_t c : {1, 10, 100, 500, 1000, 2000, 5000, 10000, 20000, 50000, 100000}) {
    if (c <= steps) out.push_back(c);
  }
  if (out.empty() || out.back() != steps) out.push_back(steps);
  return out;
}

struct CheckpointValue {
  std::size_t n{0};
  double norm{0.0};
  double d{0.0};
  double M{0.0};
};

struct RunSummary {
  std::size_t run_index{0};
  std::uint64_t seed{0};
  std::vector<CheckpointValue> checkpoints;
  std::size_t ladder_count{0};          // i_n at the final step
  std::vector<std::uint32_t> deltas;    // complete epochs i >= 1
  std::vector<std::uint32_t> delta_epoch;
  std::vector<char> a_flags;            // epochs i >= 1 with A_i defined
  std::uint64_t a_with_gain{0};         // A_i epochs whose first step gained >= 1/2
  std::vector<stats::Moments> m_moments;  // per n, complete epochs
  Violations violations;
};

inline RunSummary summarize_run(const EnsembleConfig& cfg, std::size_t run,
                                const WalkConstants& k) {
  RunSummary s;
  s.run_index = run;
  s.seed = derive_seed(cfg.master_seed, run);
  const Trajectory traj = run_walk(cfg.steps, s.seed, cfg.mode);
  AnalysisOptions opt;
  opt.drift_checks = cfg.drift_checks;
  const RunAnalysis a = analyze_run(traj, k, opt);
  s.violations = a.violations;

  for (std::size_t c : cfg.checkpoints) {
    s.checkpoints.push_back({c, norm(traj.steps[c].pos), traj.steps[c].d, a.records.M[c]});
  }
  s.ladder_count = a.records.i_of_n.back();

  for (std::size_t i = 1; i < a.ladders.size(); ++i) {
    const LadderRecord& r = a.ladders[i];
    if (r.delta) {
      s.deltas.push_back(static_cast<std::uint32_t>(*r.delta));
      s.delta_epoch.push_back(static_cast<std::uint32_t>(i));
    }
    if (r.A) {
      s.a_flags.push_back(*r.A ? 1 : 0);
      if (*r.A && traj.steps[r.tau + 1].d >= r.d_tau + 0.5 - kFrameTol) ++s.a_with_gain;
    }
  }

  s.m_moments.resize(cfg.m_horizon + 1);
  for (std::size_t i = 1; i < a.ladders.size(); ++i) {
    if (!a.ladders[i].delta) continue;
    const auto& track = a.m_tracks[i - 1];
    for (std::size_t n = 0; n <= cfg.m_horizon; ++n) {
      s.m_moments[n].add(n < track.size() ? track[n] : 0.0);
    }
  }
  return s;
}

/// Run the ensemble on a worker pool. Results are ordered by run index.
inline std::vector<RunSummary> run_ensemble(const EnsembleConfig& cfg, const WalkConstants& k) {
  cfg.validate();
  std::vector<RunSummary> results(cfg.runs);
  std::size_t workers = cfg.workers ? cfg.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, cfg.runs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t r = next++; r < cfg.runs; r = next++) {
      try {
        results[r] = summarize_run(cfg, r, k);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

inline Violations merged_violations(const std::vector<RunSummary>& runs) {
  Violations v;
  for (const auto& r : runs) v.merge(r.violations);
  return v;
}

// ---------------------------------------------------------------- speed

struct SampleStats {
  double mean{0.0}, se{0.0}, min{0.0}, max{0.0};
  double p01{0.0}, p05{0.0}, p25{0.0}, p50{0.0}, p75{0.0}, p95{0.0}, p99{0.0};
};

inline SampleStats sample_stats(std::vector<double> xs) {
  SampleStats s;
  if (xs.empty()) return s;
  std::sort(xs.begin(), xs.end());
  stats::Moments m;
  for (double x : xs) m.add(x);
  s.mean = m.mean();
  s.se = m.se();
  s.min = xs.front();
  s.max = xs.back();
  s.p01 = stats::quantile_sorted(xs, 0.01);
  s.p05 = stats::quantile_sorted(xs, 0.05);
  s.p25 = stats::quantile_sorted(xs, 0.25);
  s.p50 = stats::quantile_sorted(xs, 0.50);
  s.p75 = stats::quantile_sorted(xs, 0.75);
  s.p95 = stats::quantile_sorted(xs, 0.95);
  s.p99 = stats::quantile_sorted(xs, 0.99);
  return s;
}

struct SpeedPoint {
  std::size_t n{0};
  SampleStats speed;       // |X_n| / n
  SampleStats diam_speed;  // d_n / n
};

inline std::vector<SpeedPoint> estimate_speed(const std::vector<RunSummary>& runs) {
  std::vector<SpeedPoint> out;
  if (runs.empty()) return out;
  for (std::size_t c = 0; c < runs.front().checkpoints.size(); ++c) {
    const std::size_t n = runs.front().checkpoints[c].n;
    if (n == 0) continue;
    std::vector<double> sp, ds;
    for (const auto& r : runs) {
      sp.push_back(r.checkpoints[c].norm / static_cast<double>(n));
      ds.push_back(r.checkpoints[c].d / static_cast<double>(n));
    }
    out.push_back({n, sample_stats(std::move(sp)), sample_stats(std::move(ds))});
  }
  return out;
}

// ---------------------------------------------------------------- tails

struct TailFit {
  stats::LinearFit fit;
  std::size_t sample_size{0};
  std::size_t max_level{0};
};

struct TailEstimate {
  std::vector<std::size_t> levels;
  std::vector<double> survival;  // P[Delta >= level]
  std::size_t sample_size{0};
  double fitted_rate{0.0};       // slope of log-survival per unit level
  double fit_r2{0.0};
  std::size_t fit_max_level{0};
  std::vector<TailFit> deciles;  // by epoch index i
};

inline constexpr std::size_t kMinTailEpochs = 1000;
/// Epochs of one walk are dependent; pooling needs independent replicates.
inline constexpr std::size_t kMinTailRuns = 2;

/// Log-linear fit of the survival function over the resolvable levels:
/// survival >= 10/N, and below 1 (P[Delta >= 1] = 1 holds for every walk and
/// carries no information about the tail).
inline TailFit fit_survival(const std::vector<std::uint32_t>& deltas,
                            std::vector<std::size_t>* levels_out = nullptr,
                            std::vector<double>* survival_out = nullptr) {
  TailFit tf;
  tf.sample_size = deltas.size();
  if (deltas.empty()) return tf;
  const std::size_t max_delta = *std::max_element(deltas.begin(), deltas.end());
  std::vector<std::size_t> hist(max_delta + 2, 0);
  for (auto d : deltas) ++hist[d];
  const double n = static_cast<double>(deltas.size());
  std::vector<double> xs, ys;
  std::size_t at_least = deltas.size();
  for (std::size_t level = 1; level <= max_delta; ++level) {
    const double surv = static_cast<double>(at_least) / n;
    if (levels_out) levels_out->push_back(level);
    if (survival_out) survival_out->push_back(surv);
    if (surv >= 10.0 / n && surv < 1.0) {
      xs.push_back(static_cast<double>(level));
      ys.push_back(std::log(surv));
      tf.max_level = level;
    }
    at_least -= hist[level];
  }
  tf.fit = stats::linear_fit(xs, ys);
  return tf;
}

inline TailEstimate delta_tails(const std::vector<RunSummary>& runs) {
  std::vector<std::uint32_t> pooled;
  std::size_t max_epoch = 1;
  for (const auto& r : runs) {
    pooled.insert(pooled.end(), r.deltas.begin(), r.deltas.end());
    for (auto e : r.delta_epoch) max_epoch = std::max<std::size_t>(max_epoch, e);
  }
  if (runs.size() < kMinTailRuns) {
    throw Error(ErrorKind::InsufficientData, "tail estimation needs at least 2 independent runs");
  }
  if (pooled.size() < kMinTailEpochs) {
    throw Error(ErrorKind::InsufficientData,
                "only " + std::to_string(pooled.size()) + " complete ladder epochs");
  }
  TailEstimate t;
  t.sample_size = pooled.size();
  const TailFit all = fit_survival(pooled, &t.levels, &t.survival);
  t.fitted_rate = all.fit.slope;
  t.fit_r2 = all.fit.r2;
  t.fit_max_level = all.max_level;

  std::vector<std::vector<std::uint32_t>> by_decile(10);
  for (const auto& r : runs) {
    for (std::size_t j = 0; j < r.deltas.size(); ++j) {
      const std::size_t dec = std::min<std::size_t>(9, 10 * (r.delta_epoch[j] - 1) / max_epoch);
      by_decile[dec].push_back(r.deltas[j]);
    }
  }
  for (const auto& d : by_decile) t.deciles.push_back(fit_survival(d));
  return t;
}

// ---------------------------------------------------------------- LDP

struct LdpPoint {
  std::size_t n{0};
  std::size_t count{0};  // runs with |X_n| <= c n
  std::size_t runs{0};
  double p{0.0};
  stats::Interval ci;
};

struct LdpCurve {
  double c{0.0};
  std::vector<LdpPoint> points;
  std::optional<stats::LinearFit> log_slope;  // log p vs n where counts > 0
};

inline std::vector<LdpCurve> ldp_curve(const std::vector<RunSummary>& runs,
                                       const std::vector<double>& speeds) {
  std::vector<LdpCurve> out;
  if (runs.empty()) return out;
  for (double c : speeds) {
    LdpCurve curve;
    curve.c = c;
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < runs.front().checkpoints.size(); ++k) {
      LdpPoint pt;
      pt.n = runs.front().checkpoints[k].n;
      pt.runs = runs.size();
      for (const auto& r : runs) {
        if (r.checkpoints[k].norm <= c * static_cast<double>(pt.n)) ++pt.count;
      }
      pt.p = static_cast<double>(pt.count) / static_cast<double>(pt.runs);
      pt.ci = stats::clopper_pearson(pt.count, pt.runs);
      if (pt.count > 0 && pt.n > 0) {
        xs.push_back(static_cast<double>(pt.n));
        ys.push_back(std::log(pt.p));
      }
      curve.points.push_back(pt);
    }
    if (xs.size() >= 2) curve.log_slope = stats::linear_fit(xs, ys);
    out.push_back(std::move(curve));
  }
  return out;
}

// ---------------------------------------------------------------- supermartingale

struct DecayPoint {
  std::size_t n{0};
  double mean{0.0};
  double se{0.0};
  double bound{0.0};  // exp(c_alll c_boun) exp(-c_ofer n)
};

struct DecayCurve {
  std::vector<DecayPoint> points;
  std::size_t epochs{0};
};

inline DecayCurve supermartingale_decay(const std::vector<RunSummary>& runs,
                                        const WalkConstants& k) {
  DecayCurve out;
  if (runs.empty() || runs.front().m_moments.empty()) {
    throw Error(ErrorKind::InsufficientData, "no supermartingale samples");
  }
  std::vector<stats::Moments> pooled(runs.front().m_moments.size());
  for (const auto& r : runs) {
    for (std::size_t n = 0; n < pooled.size(); ++n) pooled[n].merge(r.m_moments[n]);
  }
  out.epochs = static_cast<std::size_t>(pooled[0].count);
  if (out.epochs == 0) throw Error(ErrorKind::InsufficientData, "no complete epochs");
  const double pre = supermartingale_prefactor(k);
  for (std::size_t n = 0; n < pooled.size(); ++n) {
    out.points.push_back({n, pooled[n].mean(), pooled[n].se(),
                          pre * std::exp(-k.c_ofer * static_cast<double>(n))});
  }
  return out;
}

// ---------------------------------------------------------------- ladder events

/// P[A_i]: the first trial must land in an arc of half-width arccos(1/2).
inline double ladder_event_probability() { return 2.0 * std::acos(0.5) / kTwoPi; }

struct AStatistics {
  std::size_t epochs{0};
  std::size_t hits{0};
  double p_hat{0.0};
  double se{0.0};
  stats::Interval ci;
  double oracle{0.0};
  double lag1_corr{0.0};
  double lag1_se{0.0};
  double gain_fraction{0.0};  // among A_i epochs, fraction with the half-unit gain
};

inline AStatistics a_statistics(const EnsembleConfig& cfg, const std::vector<RunSummary>& runs) {
  if (cfg.mode != SamplerMode::Rejection) {
    throw Error(ErrorKind::ModeMismatch, "ladder events need the rejection sampler");
  }
  AStatistics a;
  a.oracle = ladder_event_probability();
  stats::PairMoments lag;
  std::uint64_t gained = 0;
  for (const auto& r : runs) {
    for (std::size_t i = 0; i < r.a_flags.size(); ++i) {
      ++a.epochs;
      a.hits += static_cast<std::size_t>(r.a_flags[i]);
      if (i + 1 < r.a_flags.size()) lag.add(r.a_flags[i], r.a_flags[i + 1]);
    }
    gained += r.a_with_gain;
  }
  if (a.epochs == 0) throw Error(ErrorKind::InsufficientData, "no ladder events");
  a.p_hat = static_cast<double>(a.hits) / static_cast<double>(a.epochs);
  a.se = std::sqrt(a.oracle * (1.0 - a.oracle) / static_cast<double>(a.epochs));
  a.ci = stats::clopper_pearson(a.hits, a.epochs);
  a.lag1_corr = lag.correlation();
  a.lag1_se = lag.null_se();
  a.gain_fraction = a.hits ? static_cast<double>(gained) / static_cast<double>(a.hits) : 1.0;
  return a;
}

}  // namespace rancher
