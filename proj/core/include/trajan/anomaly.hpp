#pragma once

#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajan/polyfit.hpp"
#include "trajan/routes.hpp"

namespace trajan::anomaly {

struct SweepConfig {
  int degree_lo = 1;
  int degree_hi = 20;
  double error_threshold = 0.01;  // MAE in normalized route-frame units
  double condition_limit = 1e12;
};

struct DegreeSweepResult {
  std::vector<polyfit::SweepEntry> per_degree;
  /// Minimum reliable degree whose MAE is at or below the threshold; empty
  /// when no degree in range qualifies.
  std::optional<int> lowest_adequate;
};

/// Fits every degree in [degree_lo, degree_hi] to the pooled route-frame
/// points and reports the mean absolute residual per degree. Degrees whose
/// design matrix conditioning exceeds the limit are marked unreliable and
/// never chosen. Throws TooFewPoints when even degree_lo is underdetermined;
/// the top of the range is clamped to point_count - 1 when the pool is small.
DegreeSweepResult degree_sweep(std::span<const double> u, std::span<const double> v,
                               const SweepConfig& cfg);

struct Baseline {
  std::string route_id;
  int lowest_degree = 0;
  double error_threshold = 0.0;
  long sample_count = 0;   // trajectories pooled into the sweep
  double created_at = 0.0; // seconds; newest trajectory timestamp in the pool
};

struct InsufficientGroup {
  std::string route_id;
  long sample_count = 0;
};

struct BaselineReport {
  std::vector<Baseline> baselines;
  /// Route groups below the minimum vehicle count: reported, not dropped.
  std::vector<InsufficientGroup> insufficient;
};

/// Learns one baseline per route from a day's classified trajectories by
/// pooling every trajectory's route-frame points and sweeping degrees.
/// Throws NoAdequateDegree when a qualifying group has no degree in range
/// under the threshold (the threshold is misconfigured).
BaselineReport build_baseline(std::span<const routes::Classified> classified,
                              std::span<const routes::RouteModel> models,
                              const SweepConfig& sweep, int min_setup_vehicles);

struct Verdict {
  int trajectory_id = 0;
  std::string route_id;
  double timestamp = 0.0;  // last point of the checked trajectory
  int runtime_degree = 0;  // degree_hi + 1 acts as the no-adequate-fit sentinel
  int baseline_degree = 0;
  int degree_diff = 0;
  bool is_anomaly = false;
  std::vector<int> merged_ids;  // past-window trajectory ids, oldest first
};

/// One runtime decision: pool the incoming trajectory with the past window
/// of same-route trajectories, sweep degrees with the baseline's threshold,
/// and compare against the baseline degree. |diff| > degree_threshold flags
/// an anomaly; a sweep with no adequate degree counts as degree_hi + 1.
Verdict runtime_check(const routes::Classified& incoming,
                      std::span<const routes::Classified> window,
                      const routes::RouteModel& model, const Baseline& baseline,
                      const SweepConfig& sweep, int degree_threshold);

/// Per-route sequential runtime state: keeps the most recent trajectories of
/// each route (bounded window) and checks each arrival against the stored
/// baseline. Arrivals are recorded after their own check.
class RuntimeChecker {
 public:
  RuntimeChecker(std::span<const Baseline> baselines, std::span<const routes::RouteModel> models,
                 SweepConfig sweep, int degree_threshold, int window_size);

  /// Throws MissingBaseline when the trajectory's route has no baseline.
  Verdict check(const routes::Classified& incoming);

 private:
  struct RouteState {
    routes::RouteModel model;
    Baseline baseline;
    std::deque<routes::Classified> window;
  };
  std::map<std::string, RouteState> states_;
  SweepConfig sweep_;
  int degree_threshold_;
  int window_size_;
};

struct Whiskers {
  double q1 = 0.0;
  double q3 = 0.0;
  double lower = 0.0;  // smallest sample >= Q1 - 1.5 IQR
  double upper = 0.0;  // largest sample <= Q3 + 1.5 IQR
};

/// Box-plot whiskers of the observed degree differences with linearly
/// interpolated quartiles. Values beyond the whiskers are outliers by the
/// box-plot rule. Requires at least 4 samples.
Whiskers iqr_threshold(std::span<const int> samples);

struct RouteDegreeSummary {
  std::string route_id;
  double p10 = 0.0;
  double median = 0.0;
  double p90 = 0.0;
  std::vector<int> degrees;  // one lowest adequate degree per run, input order
};

/// Percentile summary (10th, median, 90th) of per-run lowest adequate
/// degrees for each route, from a batch of no-incident runs.
std::vector<RouteDegreeSummary> characterize_normal(
    const std::map<std::string, std::vector<int>>& degrees_per_route);

}  // namespace trajan::anomaly
