#pragma once

#include <cstdint>
#include <vector>

namespace trajan {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

/// Axis-aligned box in pixel coordinates, corners (x_min, y_min)-(x_max, y_max).
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
};

/// Camera-level stream metadata carried by every detection stream header.
struct CameraFrame {
  double width = 0.0;
  double height = 0.0;
  double fps = 0.0;
};

/// Min-max normalization of bird's-eye coordinates onto [0,1]^2 for one camera.
inline Point2 normalize_point(const CameraFrame& cam, Point2 p) {
  return {p.x / cam.width, p.y / cam.height};
}

inline Point2 denormalize_point(const CameraFrame& cam, Point2 p) {
  return {p.x * cam.width, p.y * cam.height};
}

struct TrajectoryPoint {
  long frame = 0;
  double timestamp = 0.0;
  Point2 birdeye;
};

/// Completed vehicle path in bird's-eye coordinates, one point per frame the
/// track was alive. `complete` is false only for tracks flushed at stream end.
struct Trajectory {
  int track_id = 0;
  bool complete = true;
  std::vector<TrajectoryPoint> points;
};

inline Trajectory normalize_trajectory(const CameraFrame& cam, const Trajectory& t) {
  Trajectory out;
  out.track_id = t.track_id;
  out.complete = t.complete;
  out.points.reserve(t.points.size());
  for (const auto& p : t.points) {
    out.points.push_back({p.frame, p.timestamp, normalize_point(cam, p.birdeye)});
  }
  return out;
}

}  // namespace trajan
