#include "trajan/pipeline.hpp"

#include <optional>

#include "trajan/ingest.hpp"

namespace trajan::pipeline {

TrackResult run_tracking(std::istream& detections, const geometry::DistortionModel& lens,
                         const config::PipelineConfig& cfg) {
  TrackResult result;
  std::optional<tracking::Tracker> tracker;
  result.camera = ingest::for_each_frame(
      detections, [&](const CameraFrame& camera, const ingest::FrameBatch& batch) {
        if (!tracker) tracker.emplace(cfg.tracker, lens, camera);
        for (auto& trajectory : tracker->step(batch)) {
          result.trajectories.push_back(std::move(trajectory));
        }
        result.frames += 1;
      });
  if (tracker) {
    for (auto& trajectory : tracker->finish()) {
      result.trajectories.push_back(std::move(trajectory));
    }
  }
  return result;
}

SetupOutcome build_baselines(const CameraFrame& camera, std::span<const Trajectory> trajectories,
                             std::span<const routes::RouteModel> models,
                             const config::PipelineConfig& cfg) {
  SetupOutcome outcome;
  for (const auto& trajectory : trajectories) {
    if (!trajectory.complete) {
      // A cut-off path fits a different polynomial than the route it is
      // from, so partials never enter the pool.
      outcome.skipped_partial += 1;
      continue;
    }
    Trajectory normalized = normalize_trajectory(camera, trajectory);
    auto classified = routes::classify(normalized, models, cfg.domain_margin);
    if (!classified) {
      outcome.unclassified += 1;
      continue;
    }
    outcome.classified.push_back(std::move(*classified));
  }
  outcome.report =
      anomaly::build_baseline(outcome.classified, models, cfg.sweep, cfg.min_setup_vehicles);
  return outcome;
}

DetectOutcome run_detect(std::istream& detections, const geometry::DistortionModel& lens,
                         std::span<const routes::RouteModel> models,
                         std::span<const anomaly::Baseline> baselines,
                         const config::PipelineConfig& cfg) {
  DetectOutcome outcome;
  anomaly::RuntimeChecker checker(baselines, models, cfg.sweep, cfg.degree_threshold,
                                  cfg.window_size);
  std::optional<tracking::Tracker> tracker;

  auto consume = [&](const CameraFrame& camera, std::vector<Trajectory>&& completed) {
    for (auto& trajectory : completed) {
      bool is_partial = !trajectory.complete;
      outcome.tracking.trajectories.push_back(std::move(trajectory));
      if (is_partial) {
        outcome.skipped_partial += 1;
        continue;
      }
      const Trajectory& stored = outcome.tracking.trajectories.back();
      Trajectory normalized = normalize_trajectory(camera, stored);
      auto classified = routes::classify(normalized, models, cfg.domain_margin);
      if (!classified) {
        outcome.unclassified += 1;
        continue;
      }
      outcome.verdicts.push_back(checker.check(*classified));
      outcome.classified.push_back(std::move(*classified));
    }
  };

  outcome.tracking.camera = ingest::for_each_frame(
      detections, [&](const CameraFrame& camera, const ingest::FrameBatch& batch) {
        if (!tracker) tracker.emplace(cfg.tracker, lens, camera);
        consume(camera, tracker->step(batch));
        outcome.tracking.frames += 1;
      });
  if (tracker) consume(outcome.tracking.camera, tracker->finish());
  return outcome;
}

}  // namespace trajan::pipeline
