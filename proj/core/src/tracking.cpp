#include "trajan/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "trajan/errors.hpp"

namespace trajan::tracking {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Matrix4d transition() {
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 2) = 1.0;  // dt = 1 frame
  f(1, 3) = 1.0;
  return f;
}

Eigen::Matrix<double, 2, 4> observation() {
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  return h;
}

/// Potentials-based shortest-augmenting-path solver for the square min-cost
/// assignment problem, O(n^3). Returns the column matched to each row.
std::vector<int> solve_min_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

double jaccard(const BBox& a, const BBox& b) {
  double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  double inter = ix * iy;
  double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

TrackState kalman_init(Point2 measurement, const TrackerConfig& cfg) {
  TrackState s;
  s.x << measurement.x, measurement.y, 0.0, 0.0;
  s.P.setZero();
  s.P(0, 0) = cfg.measurement_noise_diag(0);
  s.P(1, 1) = cfg.measurement_noise_diag(1);
  s.P(2, 2) = cfg.initial_velocity_variance;
  s.P(3, 3) = cfg.initial_velocity_variance;
  return s;
}

TrackState kalman_predict(const TrackState& state, const TrackerConfig& cfg) {
  static const Eigen::Matrix4d f = transition();
  TrackState out;
  out.x = f * state.x;
  out.P = f * state.P * f.transpose();
  out.P.diagonal() += cfg.process_noise_diag;
  return out;
}

TrackState kalman_update(const TrackState& state, Point2 measurement,
                         const TrackerConfig& cfg) {
  static const Eigen::Matrix<double, 2, 4> h = observation();
  Eigen::Matrix2d r = cfg.measurement_noise_diag.asDiagonal();
  Eigen::Vector2d z(measurement.x, measurement.y);

  Eigen::Matrix2d s = h * state.P * h.transpose() + r;
  Eigen::Matrix<double, 4, 2> k = state.P * h.transpose() * s.inverse();
  Eigen::Vector2d innovation = z - h * state.x;

  TrackState out;
  out.x = state.x + k * innovation;
  // Joseph form keeps P symmetric positive semi-definite.
  Eigen::Matrix4d a = Eigen::Matrix4d::Identity() - k * h;
  out.P = a * state.P * a.transpose() + k * r * k.transpose();
  return out;
}

Eigen::MatrixXd build_cost_matrix(std::span<const BBox> predicted,
                                  std::span<const BBox> detections) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(predicted.size()),
                    static_cast<Eigen::Index>(detections.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = jaccard(predicted[static_cast<size_t>(i)], detections[static_cast<size_t>(j)]);
    }
  }
  return m;
}

Assignment assign(const Eigen::MatrixXd& affinity, double gate) {
  const int rows = static_cast<int>(affinity.rows());
  const int cols = static_cast<int>(affinity.cols());
  Assignment out;

  std::vector<char> row_matched(rows, 0), col_matched(cols, 0);
  if (rows > 0 && cols > 0) {
    const int n = std::max(rows, cols);
    // Pad to square with affinity-0 dummies; cost = 1 - affinity keeps the
    // minimization equivalent to maximizing total Jaccard.
    Eigen::MatrixXd cost = Eigen::MatrixXd::Ones(n, n);
    cost.topLeftCorner(rows, cols) = Eigen::MatrixXd::Ones(rows, cols) - affinity;
    std::vector<int> row_to_col = solve_min_assignment(cost);
    for (int i = 0; i < rows; ++i) {
      int j = row_to_col[i];
      if (j < 0 || j >= cols) continue;
      if (affinity(i, j) < gate) continue;  // gating after global assignment
      out.matched.emplace_back(i, j);
      row_matched[i] = 1;
      col_matched[j] = 1;
    }
  }
  for (int i = 0; i < rows; ++i) {
    if (!row_matched[i]) out.unmatched_rows.push_back(i);
  }
  for (int j = 0; j < cols; ++j) {
    if (!col_matched[j]) out.unmatched_columns.push_back(j);
  }
  return out;
}

Tracker::Tracker(TrackerConfig cfg, const geometry::DistortionModel& lens, CameraFrame camera)
    : cfg_(cfg), lens_(lens), camera_(camera) {}

namespace {

void append_history(Track& track, const geometry::DistortionModel& lens, long frame,
                    double timestamp, bool coasted) {
  HistoryPoint hp;
  hp.frame = frame;
  hp.timestamp = timestamp;
  hp.fisheye = {track.state.x(0), track.state.x(1)};
  hp.birdeye = geometry::to_birdeye(lens, hp.fisheye).point;
  hp.coasted = coasted;
  track.history.push_back(hp);
}

}  // namespace

bool Tracker::near_border(const BBox& box) const {
  // The box extent, not the center: a box clipped by the image edge means the
  // vehicle is already partially out of frame, even when a fast mover's center
  // never lands inside the margin band.
  return box.x_min <= cfg_.border_margin || box.y_min <= cfg_.border_margin ||
         box.x_max >= camera_.width - cfg_.border_margin ||
         box.y_max >= camera_.height - cfg_.border_margin;
}

std::vector<Trajectory> Tracker::step(const ingest::FrameBatch& batch) {
  if (started_ && batch.frame_index <= last_frame_) {
    raise(ErrorCode::OutOfOrderFrame,
          "frame " + std::to_string(batch.frame_index) + " after frame " +
              std::to_string(last_frame_));
  }
  started_ = true;
  last_frame_ = batch.frame_index;

  std::vector<BBox> det_boxes;
  det_boxes.reserve(batch.detections.size());
  for (const auto& det : batch.detections) {
    if (det.confidence >= cfg_.confidence_threshold) det_boxes.push_back(det.box);
  }

  // Predict every live track and coast its box by the predicted displacement.
  std::vector<BBox> predicted(tracks_.size());
  for (size_t i = 0; i < tracks_.size(); ++i) {
    Track& tr = tracks_[i];
    Eigen::Vector2d before = tr.state.x.head<2>();
    tr.state = kalman_predict(tr.state, cfg_);
    Eigen::Vector2d d = tr.state.x.head<2>() - before;
    tr.box.x_min += d.x();
    tr.box.x_max += d.x();
    tr.box.y_min += d.y();
    tr.box.y_max += d.y();
    predicted[i] = tr.box;
  }

  Eigen::MatrixXd affinity = build_cost_matrix(predicted, det_boxes);
  Assignment assignment = assign(affinity, cfg_.gate);

  for (auto [row, col] : assignment.matched) {
    Track& tr = tracks_[static_cast<size_t>(row)];
    tr.state = kalman_update(tr.state, ingest::bbox_center(det_boxes[static_cast<size_t>(col)]), cfg_);
    tr.box = det_boxes[static_cast<size_t>(col)];
    tr.hits += 1;
    tr.misses = 0;
    if (tr.hits >= cfg_.confirm_hits) tr.confirmed = true;
    append_history(tr, lens_, batch.frame_index, batch.timestamp, false);
  }
  for (int row : assignment.unmatched_rows) {
    Track& tr = tracks_[static_cast<size_t>(row)];
    tr.misses += 1;
    append_history(tr, lens_, batch.frame_index, batch.timestamp, true);
  }
  for (int col : assignment.unmatched_columns) {
    Track tr;
    tr.id = next_id_++;
    const BBox& box = det_boxes[static_cast<size_t>(col)];
    tr.state = kalman_init(ingest::bbox_center(box), cfg_);
    tr.box = box;
    tr.hits = 1;
    tr.confirmed = cfg_.confirm_hits <= 1;
    append_history(tr, lens_, batch.frame_index, batch.timestamp, false);
    tracks_.push_back(std::move(tr));
  }

  // Completion: FoV exit fires immediately for outbound tracks, miss expiry
  // for everything the detector stopped seeing.
  std::vector<Trajectory> completed;
  std::vector<Track> keep;
  keep.reserve(tracks_.size());
  for (auto& tr : tracks_) {
    bool outward = false;
    if (near_border(tr.box)) {
      double vx = tr.state.x(2), vy = tr.state.x(3);
      outward = (tr.box.x_min <= cfg_.border_margin && vx < 0.0) ||
                (tr.box.y_min <= cfg_.border_margin && vy < 0.0) ||
                (tr.box.x_max >= camera_.width - cfg_.border_margin && vx > 0.0) ||
                (tr.box.y_max >= camera_.height - cfg_.border_margin && vy > 0.0);
    }
    bool expired = tr.misses > cfg_.max_misses;
    if (outward || expired) {
      Trajectory t = emit(tr, true);
      if (tr.confirmed && static_cast<int>(t.points.size()) >= cfg_.min_trajectory_len) {
        completed.push_back(std::move(t));
      }
    } else {
      keep.push_back(std::move(tr));
    }
  }
  tracks_ = std::move(keep);
  return completed;
}

std::vector<Trajectory> Tracker::finish() {
  std::vector<Trajectory> out;
  for (const auto& tr : tracks_) {
    Trajectory t = emit(tr, false);
    if (tr.confirmed && static_cast<int>(t.points.size()) >= cfg_.min_trajectory_len) {
      out.push_back(std::move(t));
    }
  }
  tracks_.clear();
  return out;
}

Trajectory Tracker::emit(const Track& track, bool complete) const {
  // Coasted points fill detector dropouts mid-track; a coasted tail is just
  // extrapolation past the last real observation, so it is trimmed.
  size_t end = track.history.size();
  while (end > 0 && track.history[end - 1].coasted) --end;

  Trajectory t;
  t.track_id = track.id;
  t.complete = complete;
  t.points.reserve(end);
  for (size_t i = 0; i < end; ++i) {
    const auto& hp = track.history[i];
    t.points.push_back({hp.frame, hp.timestamp, hp.birdeye});
  }
  return t;
}

}  // namespace trajan::tracking
