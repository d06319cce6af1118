#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "trajan/anomaly.hpp"
#include "trajan/config.hpp"
#include "trajan/geometry.hpp"
#include "trajan/routes.hpp"
#include "trajan/tracking.hpp"
#include "trajan/types.hpp"

namespace trajan::pipeline {

struct TrackResult {
  CameraFrame camera;
  /// Completed trajectories in completion order, then stream-end partials.
  std::vector<Trajectory> trajectories;
  long frames = 0;
};

/// Streams a detection file through the tracker. Never materializes the
/// whole detection stream.
TrackResult run_tracking(std::istream& detections, const geometry::DistortionModel& lens,
                         const config::PipelineConfig& cfg);

struct SetupOutcome {
  anomaly::BaselineReport report;
  std::vector<routes::Classified> classified;
  long unclassified = 0;     // complete trajectories overlapping no route
  long skipped_partial = 0;  // stream-end partials, excluded from setup
};

/// Setup phase: classify a day's completed trajectories onto the routes and
/// learn one baseline degree per route. Partial trajectories never enter the
/// pool; a truncated path fits a different degree than the route it is from.
SetupOutcome build_baselines(const CameraFrame& camera, std::span<const Trajectory> trajectories,
                             std::span<const routes::RouteModel> models,
                             const config::PipelineConfig& cfg);

struct DetectOutcome {
  TrackResult tracking;
  std::vector<routes::Classified> classified;  // completion order
  std::vector<anomaly::Verdict> verdicts;      // one per classified trajectory
  long unclassified = 0;
  long skipped_partial = 0;
};

/// Runtime phase: track the stream, classify each trajectory the moment it
/// completes, and check it against the stored baselines with the sliding
/// same-route window. Equivalent to running the stages one after another
/// because it is exactly that composition.
DetectOutcome run_detect(std::istream& detections, const geometry::DistortionModel& lens,
                         std::span<const routes::RouteModel> models,
                         std::span<const anomaly::Baseline> baselines,
                         const config::PipelineConfig& cfg);

}  // namespace trajan::pipeline
