#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "trajan/geometry.hpp"
#include "trajan/ingest.hpp"
#include "trajan/types.hpp"

namespace trajan::tracking {

struct TrackerConfig {
  double confidence_threshold = 0.5;
  /// Minimum Jaccard overlap an assigned pair must reach; applied after the
  /// global assignment, pairs below it are demoted to unmatched.
  double gate = 0.1;
  Eigen::Vector4d process_noise_diag{1.0, 1.0, 0.25, 0.25};   // px^2
  Eigen::Vector2d measurement_noise_diag{4.0, 4.0};            // px^2
  double initial_velocity_variance = 1000.0;
  int confirm_hits = 3;
  int max_misses = 5;
  int min_trajectory_len = 10;
  double border_margin = 8.0;  // px, FoV-exit test on the box extent
};

/// Intersection-over-union of two boxes; 0 when they do not overlap.
double jaccard(const BBox& a, const BBox& b);

/// Constant-velocity Kalman state over (x, y, vx, vy) in fisheye pixels.
struct TrackState {
  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
};

TrackState kalman_init(Point2 measurement, const TrackerConfig& cfg);
TrackState kalman_predict(const TrackState& state, const TrackerConfig& cfg);
TrackState kalman_update(const TrackState& state, Point2 measurement, const TrackerConfig& cfg);

/// Pairwise Jaccard affinities, tracks (rows, predicted boxes) x detections
/// (columns).
Eigen::MatrixXd build_cost_matrix(std::span<const BBox> predicted, std::span<const BBox> detections);

struct Assignment {
  std::vector<std::pair<int, int>> matched;  // (row, column)
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_columns;
};

/// Globally optimal one-to-one assignment maximizing total affinity (Munkres),
/// then gating: matched pairs with affinity < gate are demoted to unmatched.
Assignment assign(const Eigen::MatrixXd& affinity, double gate);

struct HistoryPoint {
  long frame = 0;
  double timestamp = 0.0;
  Point2 fisheye;
  Point2 birdeye;
  bool coasted = false;  // filled from a prediction, no detection this frame
};

struct Track {
  int id = 0;
  TrackState state;
  BBox box;  // last associated detection box, coasted by predicted displacement
  int hits = 0;
  int misses = 0;
  bool confirmed = false;
  std::vector<HistoryPoint> history;
};

/// Frame-by-frame multi-object tracker: Munkres association on predicted-box
/// overlap, per-track constant-velocity Kalman smoothing, coasting through
/// detector dropouts, and completion on FoV exit or miss expiry. Bird's-eye
/// positions are attached to every history point through the lens model.
class Tracker {
 public:
  Tracker(TrackerConfig cfg, const geometry::DistortionModel& lens, CameraFrame camera);

  /// Advances one frame; returns trajectories completed at this frame.
  /// Frames must arrive in strictly increasing index order.
  std::vector<Trajectory> step(const ingest::FrameBatch& batch);

  /// Flushes still-open tracks as incomplete trajectories (stream end).
  std::vector<Trajectory> finish();

  const std::vector<Track>& active_tracks() const { return tracks_; }

 private:
  Trajectory emit(const Track& track, bool complete) const;
  bool near_border(const BBox& box) const;

  TrackerConfig cfg_;
  const geometry::DistortionModel& lens_;
  CameraFrame camera_;
  std::vector<Track> tracks_;
  int next_id_ = 1;
  long last_frame_ = -1;
  bool started_ = false;
};

}  // namespace trajan::tracking
