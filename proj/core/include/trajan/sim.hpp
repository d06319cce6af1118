#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajan/geometry.hpp"
#include "trajan/ingest.hpp"
#include "trajan/routes.hpp"

namespace trajan::sim {

inline constexpr double kFps = 10.0;

struct IncidentSpec {
  enum class Kind { Stall, Swerve, Obstacle };
  Kind kind = Kind::Stall;
  std::string route_id;
  double start_time = 0.0;  // seconds
  double duration = 0.0;    // seconds
  double magnitude = 0.0;   // normalized lateral offset (swerve/obstacle)
};

const char* to_string(IncidentSpec::Kind kind);

/// Noise model of one scenario. Every amplitude can be zeroed, which makes
/// the run fully deterministic in the structural seed alone. Lane offsets
/// are per-vehicle and persist for the whole crossing: a two-component
/// Gaussian mixture (most drivers hold the lane center tightly, a few ride
/// wide) hard-capped at lane_max. Lateral noise is per-point jitter on top.
struct NoiseParams {
  double speed_jitter = 0.0;       // relative sd of the per-vehicle speed factor
  double lane_sigma = 0.0;         // narrow mixture component sd
  double lane_wide_sigma = 0.0;    // wide mixture component sd
  double lane_wide_prob = 0.0;     // probability of drawing the wide component
  double lane_max = 0.0;           // hard cap on |lane offset|; 0 disables offsets
  double lateral_sigma = 0.0;      // per-point lateral jitter sd
  double dropout_prob = 0.0;       // per-detection drop probability
  double confidence_base = 0.9;
  double confidence_spread = 0.0;  // confidence uniform in base +- spread/2
};

struct ScenarioScript {
  double duration = 0.0;  // seconds
  std::uint64_t seed = 0;
  /// Seed of the noise streams; defaults to `seed`. Batch runs re-derive it
  /// per run while the structural seed (spawn times, classes) stays fixed.
  std::uint64_t noise_seed = 0;
  double image_width = 1920.0;
  double image_height = 1920.0;
  std::vector<routes::RouteDefinition> routes;
  double spawn_rate = 0.0;  // vehicles per minute per route
  double speed = 0.0;       // route parametric units per second
  NoiseParams noise;
  double box_base = 46.0;  // bbox side in px for a car where K = 1
  std::vector<IncidentSpec> incidents;
};

struct VehicleInfo {
  int id = 0;
  std::string route_id;
  std::string class_label;
  long spawn_frame = 0;
  long exit_frame = -1;  // -1: still in scene when the scenario ended
  bool perturbed = false;  // stalled, or laterally deflected by an incident
};

/// Pre-dropout truth row: where the vehicle really was on each frame.
struct GroundTruthEntry {
  long frame = 0;
  int vehicle_id = 0;
  std::string route_id;
  Point2 birdeye;  // bird's-eye pixels, noise included
  BBox box;        // fisheye pixels
};

struct GroundTruthLog {
  CameraFrame camera;
  std::vector<VehicleInfo> vehicles;
  std::vector<GroundTruthEntry> entries;  // frame-major, vehicle id order
  std::vector<IncidentSpec> incidents;
  long spawned = 0;
  long exited = 0;
  long active_at_end = 0;
};

struct ScenarioOutput {
  ingest::DetectionStream detections;
  GroundTruthLog truth;
};

/// Runs one scenario: Poisson spawning per route, polynomial following with
/// the scripted noise model, incident perturbations, forward fisheye
/// projection of every box, and detector dropout. Bit-deterministic in
/// (script, lens).
ScenarioOutput run_scenario(const ScenarioScript& script, const geometry::DistortionModel& lens);

/// Six one-incident scripts (one per route, kinds cycling stall, swerve,
/// obstacle) plus one no-incident script, all with per-scenario derived
/// seeds. The base script's own incident list is ignored.
std::vector<ScenarioScript> seven_scenario_suite(const ScenarioScript& base);

/// The index-th run of a no-incident batch: the structural seed stays fixed
/// so the traffic pattern is shared, only the noise seed is re-derived.
/// Throws ScriptHasIncidents when the script has incidents.
ScenarioScript batch_variant(const ScenarioScript& no_incident, int index);

/// Thirty batch variants, executed; the canonical day-to-day stability
/// protocol. May run scenarios concurrently; outputs are in run order.
std::vector<ScenarioOutput> thirty_run_batch(const ScenarioScript& no_incident,
                                             const geometry::DistortionModel& lens);

}  // namespace trajan::sim
