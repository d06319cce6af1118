#include "trajan/anomaly.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "trajan/errors.hpp"
#include "trajan/rng.hpp"

using namespace trajan;

namespace {

routes::RouteModel line_route(const std::string& id = "ew") {
  routes::RouteDefinition def;
  def.id = id;
  def.degree = 2;
  for (int i = 0; i < 9; ++i) def.control_points.push_back({0.1 + 0.8 * i / 8.0, 0.5});
  return routes::fit_route(def);
}

/// A classified trajectory lying on v(u) = 0.5 + amplitude * sin(k pi u'),
/// which needs a high polynomial degree when amplitude is large relative to
/// the adequacy threshold.
routes::Classified wavy_member(const routes::RouteModel& model, int track_id, double amplitude,
                               int waves, double offset, double t0) {
  routes::Classified c;
  c.route_id = model.id;
  c.trajectory.track_id = track_id;
  for (int i = 0; i <= 120; ++i) {
    double u = model.domain_min + (model.domain_max - model.domain_min) * i / 120.0;
    double phase = (u - model.domain_min) / (model.domain_max - model.domain_min);
    double v = 0.5 + offset + amplitude * std::sin(waves * std::numbers::pi * phase);
    c.trajectory.points.push_back({i, t0 + 0.1 * i, {u, v}});
  }
  c.error = std::abs(offset) + std::abs(amplitude);
  return c;
}

routes::Classified straight_member(const routes::RouteModel& model, int track_id, double offset,
                                   double t0) {
  return wavy_member(model, track_id, 0.0, 0, offset, t0);
}

}  // namespace

TEST(DegreeSweep, FindsTheLowestAdequateDegree) {
  std::vector<double> u, v;
  for (int i = 0; i <= 100; ++i) {
    double x = i / 100.0;
    u.push_back(x);
    v.push_back(0.2 + 0.5 * x * x);  // a parabola
  }
  anomaly::SweepConfig cfg;
  auto result = anomaly::degree_sweep(u, v, cfg);
  ASSERT_TRUE(result.lowest_adequate.has_value());
  EXPECT_EQ(*result.lowest_adequate, 2);
}

TEST(DegreeSweep, EmptyWhenNothingQualifies) {
  rng::Sampler sampler(3);
  std::vector<double> u, v;
  for (int i = 0; i <= 80; ++i) {
    u.push_back(i / 80.0);
    v.push_back(sampler.uniform(-1.0, 1.0));  // white noise, amplitude >> threshold
  }
  anomaly::SweepConfig cfg;
  cfg.degree_hi = 6;
  cfg.error_threshold = 1e-6;
  auto result = anomaly::degree_sweep(u, v, cfg);
  EXPECT_FALSE(result.lowest_adequate.has_value());
  EXPECT_EQ(result.per_degree.size(), 6u);
}

TEST(DegreeSweep, ThrowsWhenEvenTheLowestDegreeIsUnderdetermined) {
  std::vector<double> u{0.1, 0.2};
  std::vector<double> v{0.5, 0.6};
  anomaly::SweepConfig cfg;
  cfg.degree_lo = 2;  // needs 3 points
  try {
    anomaly::degree_sweep(u, v, cfg);
    FAIL() << "sweep should have thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPoints);
  }
}

TEST(DegreeSweep, ClampsTheTopDegreeToTheSampleSize) {
  std::vector<double> u{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> v{0.1, 0.2, 0.15, 0.3, 0.25};
  anomaly::SweepConfig cfg;  // degree_hi = 20 against 5 points
  auto result = anomaly::degree_sweep(u, v, cfg);
  ASSERT_FALSE(result.per_degree.empty());
  EXPECT_EQ(result.per_degree.back().degree, 4);  // point_count - 1
}

TEST(IqrThreshold, WorkedExample) {
  std::vector<int> samples{0, 0, 0, 1, 1, 1, 2, 2};
  auto w = anomaly::iqr_threshold(samples);
  EXPECT_DOUBLE_EQ(w.q1, 0.0);
  EXPECT_DOUBLE_EQ(w.q3, 1.25);
  EXPECT_DOUBLE_EQ(w.lower, 0.0);
  EXPECT_DOUBLE_EQ(w.upper, 2.0);  // 2 <= 1.25 + 1.5 * 1.25 = 3.125
}

TEST(IqrThreshold, OutliersSitBeyondTheWhiskers) {
  // With the bulk at 0/1 and IQR = 1, the fences are [-1.5, 2.5]: the 7 is an
  // outlier and the whisker stops at the largest inlier.
  std::vector<int> samples{0, 0, 0, 0, 1, 1, 1, 1, 2, 7};
  auto w = anomaly::iqr_threshold(samples);
  EXPECT_DOUBLE_EQ(w.q1, 0.0);
  EXPECT_DOUBLE_EQ(w.q3, 1.0);
  EXPECT_DOUBLE_EQ(w.upper, 2.0);
  EXPECT_DOUBLE_EQ(w.lower, 0.0);
}

TEST(IqrThreshold, RequiresFourSamples) {
  std::vector<int> samples{0, 1, 2};
  try {
    anomaly::iqr_threshold(samples);
    FAIL() << "iqr_threshold should have thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewSamples);
  }
}

TEST(IqrThreshold, DegenerateAllEqualSamples) {
  std::vector<int> samples{0, 0, 0, 0, 0};
  auto w = anomaly::iqr_threshold(samples);
  EXPECT_DOUBLE_EQ(w.q1, 0.0);
  EXPECT_DOUBLE_EQ(w.q3, 0.0);
  EXPECT_DOUBLE_EQ(w.lower, 0.0);
  EXPECT_DOUBLE_EQ(w.upper, 0.0);
}

TEST(BuildBaseline, LearnsDegreeOneForStraightTraffic) {
  auto model = line_route();
  std::vector<routes::Classified> classified;
  rng::Sampler sampler(17);
  for (int i = 0; i < 25; ++i) {
    classified.push_back(
        straight_member(model, i + 1, sampler.gauss(0.0, 0.002), 10.0 * i));
  }
  anomaly::SweepConfig sweep;
  std::vector<routes::RouteModel> models{model};
  auto report = anomaly::build_baseline(classified, models, sweep, 20);
  ASSERT_EQ(report.baselines.size(), 1u);
  EXPECT_EQ(report.baselines[0].route_id, "ew");
  EXPECT_EQ(report.baselines[0].lowest_degree, 1);
  EXPECT_EQ(report.baselines[0].sample_count, 25);
  EXPECT_DOUBLE_EQ(report.baselines[0].error_threshold, sweep.error_threshold);
  // created_at is data-derived: the newest trajectory timestamp in the pool.
  EXPECT_DOUBLE_EQ(report.baselines[0].created_at, 10.0 * 24 + 0.1 * 120);
  EXPECT_TRUE(report.insufficient.empty());
}

TEST(BuildBaseline, UndersizedGroupsAreReportedNotDropped) {
  auto model = line_route();
  std::vector<routes::Classified> classified;
  for (int i = 0; i < 5; ++i) classified.push_back(straight_member(model, i + 1, 0.0, 0.0));
  anomaly::SweepConfig sweep;
  std::vector<routes::RouteModel> models{model};
  auto report = anomaly::build_baseline(classified, models, sweep, 20);
  EXPECT_TRUE(report.baselines.empty());
  ASSERT_EQ(report.insufficient.size(), 1u);
  EXPECT_EQ(report.insufficient[0].route_id, "ew");
  EXPECT_EQ(report.insufficient[0].sample_count, 5);
}

TEST(BuildBaseline, MisconfiguredThresholdThrows) {
  auto model = line_route();
  std::vector<routes::Classified> classified;
  rng::Sampler sampler(29);
  for (int i = 0; i < 25; ++i) {
    classified.push_back(straight_member(model, i + 1, sampler.gauss(0.0, 0.01), 0.0));
  }
  anomaly::SweepConfig sweep;
  sweep.degree_hi = 8;
  sweep.error_threshold = 1e-12;  // unreachable under the injected offsets
  std::vector<routes::RouteModel> models{model};
  try {
    anomaly::build_baseline(classified, models, sweep, 20);
    FAIL() << "build_baseline should have thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoAdequateDegree);
  }
}

TEST(RuntimeCheck, SentinelWhenNoDegreeFits) {
  auto model = line_route();
  anomaly::Baseline baseline{"ew", 1, 0.01, 25, 0.0};
  anomaly::SweepConfig sweep;
  sweep.degree_hi = 6;
  // A 4-wave squiggle at amplitude 0.15 cannot be captured by degree <= 6
  // under a 0.01 MAE gate.
  auto incoming = wavy_member(model, 77, 0.15, 4, 0.0, 0.0);
  auto verdict = anomaly::runtime_check(incoming, {}, model, baseline, sweep, 2);
  EXPECT_EQ(verdict.trajectory_id, 77);
  EXPECT_EQ(verdict.runtime_degree, 7);  // degree_hi + 1 sentinel
  EXPECT_EQ(verdict.baseline_degree, 1);
  EXPECT_EQ(verdict.degree_diff, 6);
  EXPECT_TRUE(verdict.is_anomaly);
}

TEST(RuntimeCheck, MatchingDegreeIsNormal) {
  auto model = line_route();
  anomaly::Baseline baseline{"ew", 1, 0.01, 25, 0.0};
  anomaly::SweepConfig sweep;
  auto incoming = straight_member(model, 5, 0.001, 0.0);
  std::vector<routes::Classified> window{straight_member(model, 3, -0.001, 0.0),
                                         straight_member(model, 4, 0.002, 0.0)};
  auto verdict = anomaly::runtime_check(incoming, window, model, baseline, sweep, 2);
  EXPECT_EQ(verdict.runtime_degree, 1);
  EXPECT_EQ(verdict.degree_diff, 0);
  EXPECT_FALSE(verdict.is_anomaly);
  ASSERT_EQ(verdict.merged_ids.size(), 2u);
  EXPECT_EQ(verdict.merged_ids[0], 3);
  EXPECT_EQ(verdict.merged_ids[1], 4);
}

TEST(RuntimeChecker, ArrivalsAreCheckedBeforeEnteringTheWindow) {
  auto model = line_route();
  std::vector<anomaly::Baseline> baselines{{"ew", 1, 0.01, 25, 0.0}};
  std::vector<routes::RouteModel> models{model};
  anomaly::SweepConfig sweep;
  anomaly::RuntimeChecker checker(baselines, models, sweep, 2, 5);

  // First arrival: empty window, checked alone.
  auto first = checker.check(straight_member(model, 1, 0.0, 0.0));
  EXPECT_TRUE(first.merged_ids.empty());
  // Second arrival: the first is now in the window.
  auto second = checker.check(straight_member(model, 2, 0.001, 1.0));
  ASSERT_EQ(second.merged_ids.size(), 1u);
  EXPECT_EQ(second.merged_ids[0], 1);
}

TEST(RuntimeChecker, WindowIsBoundedAndOldestFirst) {
  auto model = line_route();
  std::vector<anomaly::Baseline> baselines{{"ew", 1, 0.01, 25, 0.0}};
  std::vector<routes::RouteModel> models{model};
  anomaly::SweepConfig sweep;
  anomaly::RuntimeChecker checker(baselines, models, sweep, 2, 3);

  for (int i = 1; i <= 5; ++i) checker.check(straight_member(model, i, 0.0, double(i)));
  auto verdict = checker.check(straight_member(model, 6, 0.0, 6.0));
  ASSERT_EQ(verdict.merged_ids.size(), 3u);
  EXPECT_EQ(verdict.merged_ids, (std::vector<int>{3, 4, 5}));
}

TEST(RuntimeChecker, UnknownRouteThrowsMissingBaseline) {
  auto model = line_route("other");
  std::vector<anomaly::Baseline> baselines{{"ew", 1, 0.01, 25, 0.0}};
  std::vector<routes::RouteModel> models{line_route("ew"), model};
  anomaly::SweepConfig sweep;
  anomaly::RuntimeChecker checker(baselines, models, sweep, 2, 5);
  try {
    checker.check(straight_member(model, 1, 0.0, 0.0));
    FAIL() << "check should have thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingBaseline);
  }
}

TEST(CharacterizeNormal, PercentilesPerRoute) {
  std::map<std::string, std::vector<int>> degrees;
  degrees["straight"] = std::vector<int>(30, 1);
  std::vector<int> turns;
  for (int i = 0; i < 12; ++i) turns.push_back(3);
  for (int i = 0; i < 18; ++i) turns.push_back(4);
  degrees["turn"] = turns;

  auto summaries = anomaly::characterize_normal(degrees);
  ASSERT_EQ(summaries.size(), 2u);
  const auto& straight = summaries[0].route_id == "straight" ? summaries[0] : summaries[1];
  const auto& turn = summaries[0].route_id == "turn" ? summaries[0] : summaries[1];
  EXPECT_DOUBLE_EQ(straight.p10, 1.0);
  EXPECT_DOUBLE_EQ(straight.median, 1.0);
  EXPECT_DOUBLE_EQ(straight.p90, 1.0);
  EXPECT_DOUBLE_EQ(turn.p10, 3.0);
  EXPECT_DOUBLE_EQ(turn.median, 4.0);
  EXPECT_DOUBLE_EQ(turn.p90, 4.0);
  EXPECT_EQ(turn.degrees.size(), 30u);
}
