#pragma once
/**
 * @file report.hpp
 * @brief JSON views of constants, verification counts and ensemble estimates.
 */

#include <string>
#include <vector>

#include "json.hpp"

#include "rancher/analysis.hpp"
#include "rancher/drift.hpp"
#include "rancher/montecarlo.hpp"

namespace rancher {

using nlohmann::json;

inline json to_json(const WalkConstants& k) {
  return {{"beta", k.beta},     {"gamma", k.gamma},     {"c_ekg", k.c_ekg},
          {"c_boun", k.c_boun}, {"c_alll", k.c_alll},   {"c_ofer", k.c_ofer},
          {"c_witri", k.c_witri}, {"c_posi", k.c_posi}, {"digest", constants_digest(k)},
          {"residual", constants_residual(k)}};
}

inline json to_json(const Violations& v) {
  json counts = json::object();
  for (std::size_t i = 0; i < v.counts.size(); ++i) counts[std::string(kCheckNames[i])] = v.counts[i];
  return {{"violations", counts},
          {"total_violations", v.total()},
          {"steps_checked", v.steps_checked},
          {"epochs_checked", v.epochs_checked},
          {"frames_checked", v.frames_checked},
          {"drift_frames_checked", v.drift_frames_checked},
          {"good_frames", v.good_frames},
          {"good_sufficient_frames", v.good_sufficient_frames},
          {"borderline_frames", v.borderline_frames},
          {"max_quadrature_error", v.max_quadrature_error},
          {"max_step_length_error", v.max_step_error},
          {"max_d_increment", v.max_d_increment}};
}

inline json to_json(const stats::Interval& iv) { return json::array({iv.lo, iv.hi}); }

inline json to_json(const stats::LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.points}};
}

inline json to_json(const SampleStats& s) {
  return {{"mean", s.mean}, {"se", s.se},   {"min", s.min},   {"max", s.max},
          {"p01", s.p01},   {"p05", s.p05}, {"p25", s.p25},   {"p50", s.p50},
          {"p75", s.p75},   {"p95", s.p95}, {"p99", s.p99}};
}

inline json to_json(const std::vector<SpeedPoint>& sp) {
  json arr = json::array();
  for (const auto& p : sp) {
    arr.push_back({{"n", p.n}, {"speed", to_json(p.speed)}, {"diameter_speed", to_json(p.diam_speed)}});
  }
  return arr;
}

inline json to_json(const TailEstimate& t) {
  json deciles = json::array();
  for (const auto& d : t.deciles) {
    deciles.push_back({{"sample_size", d.sample_size}, {"max_level", d.max_level}, {"fit", to_json(d.fit)}});
  }
  return {{"sample_size", t.sample_size}, {"levels", t.levels},   {"survival", t.survival},
          {"fitted_rate", t.fitted_rate}, {"fit_r2", t.fit_r2},   {"fit_max_level", t.fit_max_level},
          {"deciles", deciles}};
}

inline json to_json(const std::vector<LdpCurve>& curves) {
  json arr = json::array();
  for (const auto& c : curves) {
    json pts = json::array();
    for (const auto& p : c.points) {
      pts.push_back({{"n", p.n}, {"count", p.count}, {"runs", p.runs}, {"p", p.p}, {"ci", to_json(p.ci)}});
    }
    json item = {{"c", c.c}, {"points", pts}};
    item["log_slope"] = c.log_slope ? to_json(*c.log_slope) : json(nullptr);
    arr.push_back(item);
  }
  return arr;
}

inline json to_json(const DecayCurve& d) {
  json pts = json::array();
  for (const auto& p : d.points) {
    pts.push_back({{"n", p.n}, {"mean", p.mean}, {"se", p.se}, {"bound", p.bound}});
  }
  return {{"epochs", d.epochs}, {"points", pts}};
}

inline json to_json(const AStatistics& a) {
  return {{"epochs", a.epochs},       {"hits", a.hits},           {"p_hat", a.p_hat},
          {"se", a.se},               {"ci", to_json(a.ci)},      {"oracle", a.oracle},
          {"lag1_corr", a.lag1_corr}, {"lag1_se", a.lag1_se},     {"gain_fraction", a.gain_fraction}};
}

inline json insufficient(const std::string& why) {
  return {{"insufficient_data", true}, {"reason", why}};
}

}  // namespace rancher
