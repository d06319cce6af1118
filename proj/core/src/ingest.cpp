#include "trajan/ingest.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

#include "trajan/errors.hpp"
#include "trajan/numeric.hpp"

namespace trajan::ingest {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

[[noreturn]] void malformed(size_t line_no, const std::string& what) {
  raise(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": " + what);
}

double need_double(std::string_view token, size_t line_no, const char* what) {
  auto v = numeric::parse_double(token);
  if (!v) malformed(line_no, std::string("bad ") + what + " '" + std::string(token) + "'");
  return *v;
}

long long need_integer(std::string_view token, size_t line_no, const char* what) {
  auto v = numeric::parse_integer(token);
  if (!v) malformed(line_no, std::string("bad ") + what + " '" + std::string(token) + "'");
  return *v;
}

bool close_to(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Point2 bbox_center(const BBox& box) {
  return {0.5 * (box.x_min + box.x_max), 0.5 * (box.y_min + box.y_max)};
}

CameraFrame for_each_frame(
    std::istream& in, const std::function<void(const CameraFrame&, const FrameBatch&)>& on_frame) {
  CameraFrame camera;
  bool have_header = false;
  bool have_frame = false;
  FrameBatch current;
  std::string line;
  size_t line_no = 0;

  auto flush = [&] {
    if (have_frame) on_frame(camera, current);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    if (!have_header) {
      if (tokens[0] != "detections" || tokens.size() != 4) {
        malformed(line_no, "expected header 'detections <width> <height> <fps>'");
      }
      camera.width = need_double(tokens[1], line_no, "width");
      camera.height = need_double(tokens[2], line_no, "height");
      camera.fps = need_double(tokens[3], line_no, "fps");
      if (!(camera.width > 0.0) || !(camera.height > 0.0) || !(camera.fps > 0.0)) {
        malformed(line_no, "width, height and fps must be positive");
      }
      have_header = true;
      continue;
    }

    if (tokens[0] == "frame") {
      if (tokens.size() != 3) malformed(line_no, "expected 'frame <index> <timestamp>'");
      long idx = static_cast<long>(need_integer(tokens[1], line_no, "frame index"));
      double ts = need_double(tokens[2], line_no, "timestamp");
      if (have_frame && idx <= current.frame_index) {
        raise(ErrorCode::NonMonotonicFrame,
              "line " + std::to_string(line_no) + ": frame " + std::to_string(idx) +
                  " after frame " + std::to_string(current.frame_index));
      }
      if (!close_to(ts, static_cast<double>(idx) / camera.fps)) {
        malformed(line_no, "timestamp " + numeric::format_double(ts) +
                               " inconsistent with fps for frame " + std::to_string(idx));
      }
      flush();
      current = FrameBatch{idx, ts, {}};
      have_frame = true;
      continue;
    }

    // Detection record.
    if (!have_frame) malformed(line_no, "detection before any frame declaration");
    if (tokens.size() != 8) {
      malformed(line_no, "expected 8 fields, got " + std::to_string(tokens.size()));
    }
    long idx = static_cast<long>(need_integer(tokens[0], line_no, "frame index"));
    double ts = need_double(tokens[1], line_no, "timestamp");
    if (idx != current.frame_index || !close_to(ts, current.timestamp)) {
      malformed(line_no, "detection does not belong to the current frame");
    }
    Detection det;
    det.box.x_min = need_double(tokens[2], line_no, "x_min");
    det.box.y_min = need_double(tokens[3], line_no, "y_min");
    det.box.x_max = need_double(tokens[4], line_no, "x_max");
    det.box.y_max = need_double(tokens[5], line_no, "y_max");
    if (!(det.box.x_min < det.box.x_max) || !(det.box.y_min < det.box.y_max)) {
      raise(ErrorCode::InvalidBox, "line " + std::to_string(line_no) + ": degenerate box");
    }
    det.confidence = need_double(tokens[6], line_no, "confidence");
    if (det.confidence < 0.0 || det.confidence > 1.0) {
      malformed(line_no, "confidence outside [0, 1]");
    }
    det.class_label = std::string(tokens[7]);
    current.detections.push_back(std::move(det));
  }

  if (!have_header) {
    raise(ErrorCode::MalformedRecord, "stream has no 'detections' header");
  }
  flush();
  return camera;
}

DetectionStream parse_stream(std::istream& in) {
  DetectionStream stream;
  stream.camera = for_each_frame(in, [&](const CameraFrame&, const FrameBatch& batch) {
    stream.frames.push_back(batch);
  });
  return stream;
}

void serialize_stream(std::ostream& out, const DetectionStream& stream) {
  out << "detections " << numeric::format_double(stream.camera.width) << ' '
      << numeric::format_double(stream.camera.height) << ' '
      << numeric::format_double(stream.camera.fps) << '\n';
  for (const auto& frame : stream.frames) {
    out << "frame " << frame.frame_index << ' ' << numeric::format_double(frame.timestamp)
        << '\n';
    for (const auto& det : frame.detections) {
      out << frame.frame_index << ' ' << numeric::format_double(frame.timestamp) << ' '
          << numeric::format_double(det.box.x_min) << ' '
          << numeric::format_double(det.box.y_min) << ' '
          << numeric::format_double(det.box.x_max) << ' '
          << numeric::format_double(det.box.y_max) << ' '
          << numeric::format_double(det.confidence) << ' ' << det.class_label << '\n';
    }
  }
}

double detector_score(const DetectorReport& report) {
  return 0.4 * report.map50 + 0.3 * report.map75 + 0.1 * report.map95 +
         0.2 * (1.0 - report.inference_seconds) * 100.0;
}

std::vector<DetectorReport> parse_detector_reports(std::istream& in) {
  std::vector<DetectorReport> reports;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 5) {
      malformed(line_no, "expected '<name> <map50> <map75> <map95> <inference_seconds>'");
    }
    DetectorReport r;
    r.name = std::string(tokens[0]);
    r.map50 = need_double(tokens[1], line_no, "map50");
    r.map75 = need_double(tokens[2], line_no, "map75");
    r.map95 = need_double(tokens[3], line_no, "map95");
    r.inference_seconds = need_double(tokens[4], line_no, "inference_seconds");
    for (double m : {r.map50, r.map75, r.map95}) {
      if (m < 0.0 || m > 100.0) malformed(line_no, "mAP outside [0, 100]");
    }
    if (r.inference_seconds < 0.0) malformed(line_no, "negative inference time");
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace trajan::ingest
