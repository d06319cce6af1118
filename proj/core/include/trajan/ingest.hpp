#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "trajan/types.hpp"

namespace trajan::ingest {

struct Detection {
  BBox box;
  double confidence = 0.0;
  std::string class_label;
};

struct FrameBatch {
  long frame_index = 0;
  double timestamp = 0.0;
  std::vector<Detection> detections;
};

struct DetectionStream {
  CameraFrame camera;
  std::vector<FrameBatch> frames;
};

Point2 bbox_center(const BBox& box);

/// Streaming parser for the detection text format:
///   detections <width> <height> <fps>
///   frame <frame_index> <timestamp>
///   <frame_index> <timestamp> <x_min> <y_min> <x_max> <y_max> <confidence> <class>
/// '#'-prefixed and blank lines are skipped. Frame indices must be strictly
/// increasing and every frame declares itself with a `frame` line, so frames
/// with zero detections are first-class. Emits one callback per frame with
/// the already-parsed camera header.
CameraFrame for_each_frame(
    std::istream& in, const std::function<void(const CameraFrame&, const FrameBatch&)>& on_frame);

DetectionStream parse_stream(std::istream& in);
void serialize_stream(std::ostream& out, const DetectionStream& stream);

struct DetectorReport {
  std::string name;
  double map50 = 0.0;
  double map75 = 0.0;
  double map95 = 0.0;
  double inference_seconds = 0.0;
};

/// Weighted detector selection score; mAPs are percentages, inference is in
/// seconds: 0.4*mAP50 + 0.3*mAP75 + 0.1*mAP95 + 0.2*(1 - inference)*100.
/// An inference time above one second is allowed and simply turns the speed
/// term negative.
double detector_score(const DetectorReport& report);

/// Rows: <name> <map50> <map75> <map95> <inference_seconds>
std::vector<DetectorReport> parse_detector_reports(std::istream& in);

}  // namespace trajan::ingest
