#include "trajan/anomaly.hpp"

#include <algorithm>
#include <cmath>

#include "trajan/errors.hpp"
#include "trajan/numeric.hpp"

namespace trajan::anomaly {

namespace {

void append_frame_points(const routes::Classified& classified, const routes::FrameSpec& frame,
                         std::vector<double>& u, std::vector<double>& v) {
  for (const auto& point : classified.trajectory.points) {
    Point2 q = routes::to_frame(frame, point.birdeye);
    u.push_back(q.x);
    v.push_back(q.y);
  }
}

}  // namespace

DegreeSweepResult degree_sweep(std::span<const double> u, std::span<const double> v,
                               const SweepConfig& cfg) {
  const long n = static_cast<long>(u.size());
  if (cfg.degree_lo < 1 || cfg.degree_hi < cfg.degree_lo) {
    raise(ErrorCode::ConfigError, "degree range [" + std::to_string(cfg.degree_lo) + ", " +
                                      std::to_string(cfg.degree_hi) + "] is invalid");
  }
  if (n < cfg.degree_lo + 1) {
    raise(ErrorCode::TooFewPoints, std::to_string(n) + " points cannot determine degree " +
                                       std::to_string(cfg.degree_lo));
  }
  int hi = std::min<long>(cfg.degree_hi, n - 1);

  DegreeSweepResult result;
  result.per_degree = polyfit::sweep_mae(u, v, cfg.degree_lo, hi, cfg.condition_limit);
  for (const auto& entry : result.per_degree) {
    if (entry.reliable && entry.mae <= cfg.error_threshold) {
      result.lowest_adequate = entry.degree;
      break;
    }
  }
  return result;
}

BaselineReport build_baseline(std::span<const routes::Classified> classified,
                              std::span<const routes::RouteModel> models,
                              const SweepConfig& sweep, int min_setup_vehicles) {
  std::map<std::string, std::vector<const routes::Classified*>> groups;
  for (const auto& c : classified) groups[c.route_id].push_back(&c);

  std::map<std::string, const routes::RouteModel*> by_id;
  for (const auto& model : models) by_id[model.id] = &model;

  BaselineReport report;
  for (const auto& [route_id, group] : groups) {
    auto model_it = by_id.find(route_id);
    if (model_it == by_id.end()) {
      raise(ErrorCode::ConfigError, "classified trajectories reference unknown route " + route_id);
    }
    if (group.size() < static_cast<size_t>(min_setup_vehicles)) {
      report.insufficient.push_back({route_id, static_cast<long>(group.size())});
      continue;
    }

    std::vector<double> u, v;
    double newest = 0.0;
    for (const auto* c : group) {
      append_frame_points(*c, model_it->second->frame, u, v);
      for (const auto& point : c->trajectory.points) newest = std::max(newest, point.timestamp);
    }

    DegreeSweepResult swept = degree_sweep(u, v, sweep);
    if (!swept.lowest_adequate) {
      raise(ErrorCode::NoAdequateDegree,
            "route " + route_id + ": no degree in [" + std::to_string(sweep.degree_lo) + ", " +
                std::to_string(sweep.degree_hi) + "] reaches MAE " +
                numeric::format_double(sweep.error_threshold));
    }

    Baseline baseline;
    baseline.route_id = route_id;
    baseline.lowest_degree = *swept.lowest_adequate;
    baseline.error_threshold = sweep.error_threshold;
    baseline.sample_count = static_cast<long>(group.size());
    baseline.created_at = newest;
    report.baselines.push_back(std::move(baseline));
  }
  return report;
}

Verdict runtime_check(const routes::Classified& incoming,
                      std::span<const routes::Classified> window,
                      const routes::RouteModel& model, const Baseline& baseline,
                      const SweepConfig& sweep, int degree_threshold) {
  std::vector<double> u, v;
  for (const auto& past : window) append_frame_points(past, model.frame, u, v);
  append_frame_points(incoming, model.frame, u, v);

  SweepConfig cfg = sweep;
  cfg.error_threshold = baseline.error_threshold;
  DegreeSweepResult swept = degree_sweep(u, v, cfg);

  Verdict verdict;
  verdict.trajectory_id = incoming.trajectory.track_id;
  verdict.route_id = incoming.route_id;
  verdict.timestamp =
      incoming.trajectory.points.empty() ? 0.0 : incoming.trajectory.points.back().timestamp;
  verdict.runtime_degree = swept.lowest_adequate.value_or(sweep.degree_hi + 1);
  verdict.baseline_degree = baseline.lowest_degree;
  verdict.degree_diff = verdict.runtime_degree - verdict.baseline_degree;
  verdict.is_anomaly = std::abs(verdict.degree_diff) > degree_threshold;
  verdict.merged_ids.reserve(window.size());
  for (const auto& past : window) verdict.merged_ids.push_back(past.trajectory.track_id);
  return verdict;
}

RuntimeChecker::RuntimeChecker(std::span<const Baseline> baselines,
                               std::span<const routes::RouteModel> models, SweepConfig sweep,
                               int degree_threshold, int window_size)
    : sweep_(sweep), degree_threshold_(degree_threshold), window_size_(window_size) {
  std::map<std::string, const routes::RouteModel*> by_id;
  for (const auto& model : models) by_id[model.id] = &model;
  for (const auto& baseline : baselines) {
    auto it = by_id.find(baseline.route_id);
    if (it == by_id.end()) {
      raise(ErrorCode::ConfigError, "baseline references unknown route " + baseline.route_id);
    }
    states_.emplace(baseline.route_id, RouteState{*it->second, baseline, {}});
  }
}

Verdict RuntimeChecker::check(const routes::Classified& incoming) {
  auto it = states_.find(incoming.route_id);
  if (it == states_.end()) {
    raise(ErrorCode::MissingBaseline, "no baseline for route " + incoming.route_id);
  }
  RouteState& state = it->second;

  std::vector<routes::Classified> window(state.window.begin(), state.window.end());
  Verdict verdict =
      runtime_check(incoming, window, state.model, state.baseline, sweep_, degree_threshold_);

  state.window.push_back(incoming);
  while (state.window.size() > static_cast<size_t>(window_size_)) state.window.pop_front();
  return verdict;
}

Whiskers iqr_threshold(std::span<const int> samples) {
  if (samples.size() < 4) {
    raise(ErrorCode::TooFewSamples,
          std::to_string(samples.size()) + " degree-difference samples; need at least 4");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  Whiskers w;
  w.q1 = numeric::quantile_linear(sorted, 0.25);
  w.q3 = numeric::quantile_linear(sorted, 0.75);
  double iqr = w.q3 - w.q1;
  double lo_fence = w.q1 - 1.5 * iqr;
  double hi_fence = w.q3 + 1.5 * iqr;

  w.lower = sorted.back();
  for (double s : sorted) {
    if (s >= lo_fence) {
      w.lower = s;
      break;
    }
  }
  w.upper = sorted.front();
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (*it <= hi_fence) {
      w.upper = *it;
      break;
    }
  }
  return w;
}

std::vector<RouteDegreeSummary> characterize_normal(
    const std::map<std::string, std::vector<int>>& degrees_per_route) {
  std::vector<RouteDegreeSummary> summaries;
  for (const auto& [route_id, degrees] : degrees_per_route) {
    if (degrees.empty()) continue;
    std::vector<double> sorted(degrees.begin(), degrees.end());
    std::sort(sorted.begin(), sorted.end());
    RouteDegreeSummary summary;
    summary.route_id = route_id;
    summary.p10 = numeric::quantile_linear(sorted, 0.10);
    summary.median = numeric::quantile_linear(sorted, 0.50);
    summary.p90 = numeric::quantile_linear(sorted, 0.90);
    summary.degrees = degrees;
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

}  // namespace trajan::anomaly
