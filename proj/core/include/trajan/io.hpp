#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajan/anomaly.hpp"
#include "trajan/geometry.hpp"
#include "trajan/routes.hpp"
#include "trajan/sim.hpp"
#include "trajan/types.hpp"

namespace trajan::io {

/// Reads a whole file; throws IoError naming the path on failure.
std::string read_file(const std::string& path);
/// Writes (replaces) a whole file; throws IoError naming the path on failure.
void write_file(const std::string& path, const std::string& content);

// -------------------------------------------------------------------------
// Lens files: a fitted distortion model.
//   lens
//   center <x> <y>
//   order <n>
//   coefficients <q0> ... <qn>
//   valid_radius <r>
//   residual_rms <v>
struct LensFile {
  geometry::DistortionModel model;
  double residual_rms = 0.0;
};

LensFile parse_lens(std::istream& in);
LensFile load_lens(const std::string& path);
std::string serialize_lens(const geometry::DistortionModel& model, double residual_rms);

// -------------------------------------------------------------------------
// Correspondence files: hand-picked calibration landmarks.
//   pairs
//   center <x> <y>        (optional)
//   order <n>             (optional)
//   <fx> <fy> <bx> <by>   (one row per pair)
struct PairsFile {
  std::vector<geometry::CorrespondencePair> pairs;
  std::optional<Point2> center;
  std::optional<int> order;
};

PairsFile parse_pairs(std::istream& in);
PairsFile load_pairs(const std::string& path);
std::string serialize_pairs(const PairsFile& file);

// -------------------------------------------------------------------------
// Route files: control points in normalized bird's-eye coordinates.
//   routes
//   route <id>
//   degree <n>
//   rotate <degrees>
//   axis <x|y>            (which normalized axis is the parametric abscissa)
//   points <count>
//   <x> <y>               (count rows)
//   end
std::vector<routes::RouteDefinition> parse_routes(std::istream& in);
std::vector<routes::RouteDefinition> load_routes(const std::string& path);
std::string serialize_routes(std::span<const routes::RouteDefinition> defs);

// -------------------------------------------------------------------------
// Trajectory files: bird's-eye pixel tracks emitted by the tracker.
//   trajectories <width> <height> <fps>
//   trajectory <id> <complete|partial> <count>
//   <frame> <timestamp> <x> <y>     (count rows)
//   end
struct TrajectoryFile {
  CameraFrame camera;
  std::vector<Trajectory> trajectories;
};

TrajectoryFile parse_trajectories(std::istream& in);
TrajectoryFile load_trajectories(const std::string& path);
std::string serialize_trajectories(const CameraFrame& camera,
                                   std::span<const Trajectory> trajectories);

// -------------------------------------------------------------------------
// Baseline files: the per-route reference degrees learned during setup.
//   baselines
//   route <id> degree <n> threshold <t> samples <count> created <timestamp>
std::vector<anomaly::Baseline> parse_baselines(std::istream& in);
std::vector<anomaly::Baseline> load_baselines(const std::string& path);
std::string serialize_baselines(std::span<const anomaly::Baseline> baselines);

// -------------------------------------------------------------------------
// Verdict files: one runtime decision per classified trajectory.
//   verdicts
//   <timestamp> <track> <route> <runtime_deg> <baseline_deg> <diff> <normal|anomaly> [merged ids...]
std::vector<anomaly::Verdict> parse_verdicts(std::istream& in);
std::vector<anomaly::Verdict> load_verdicts(const std::string& path);
std::string serialize_verdicts(std::span<const anomaly::Verdict> verdicts);

// -------------------------------------------------------------------------
// Scenario scripts: key-value lines driving the simulator. The `routes` key
// names a route file resolved relative to the script's own directory.
//   scenario
//   duration 240
//   seed 42
//   noise_seed 1337
//   routes junction.routes
//   spawn_rate 5
//   speed 0.035
//   ... noise keys ...
//   image 1920 1920
//   incident <stall|swerve|obstacle> <route> <start> <duration> <magnitude>
sim::ScenarioScript parse_scenario(std::istream& in, const std::string& base_dir);
sim::ScenarioScript load_scenario(const std::string& path);
std::string serialize_scenario(const sim::ScenarioScript& script, const std::string& routes_path);

// -------------------------------------------------------------------------
// Ground-truth logs written next to simulated detections.
//   truth <width> <height> <fps>
//   incident <kind> <route> <start> <duration> <magnitude>
//   vehicle <id> <route> <class> <spawn_frame> <exit_frame> <perturbed>
//   <frame> <vehicle> <route> <bx> <by> <x0> <y0> <x1> <y1>
//   summary <spawned> <exited> <active_at_end>
sim::GroundTruthLog parse_truth(std::istream& in);
sim::GroundTruthLog load_truth(const std::string& path);
std::string serialize_truth(const sim::GroundTruthLog& log);

}  // namespace trajan::io
