#include "trajan/render.hpp"

#include <set>

#include "trajan/numeric.hpp"

namespace trajan::render {

namespace {

using numeric::format_double;

constexpr const char* kRouteColor = "#2b6cb0";
constexpr const char* kTrackColor = "#c53030";
constexpr const char* kAnomalyColor = "#dd6b20";

void append_polyline(std::string& out, const std::vector<Point2>& points, const char* color,
                     const char* width, const char* opacity) {
  if (points.size() < 2) return;
  out += "<polyline fill=\"none\" stroke=\"";
  out += color;
  out += "\" stroke-width=\"";
  out += width;
  out += "\" stroke-opacity=\"";
  out += opacity;
  out += "\" stroke-linecap=\"round\" stroke-linejoin=\"round\" points=\"";
  for (size_t i = 0; i < points.size(); ++i) {
    if (i) out += ' ';
    out += format_double(points[i].x) + ',' + format_double(points[i].y);
  }
  out += "\"/>\n";
}

}  // namespace

std::string render_svg(const CameraFrame& camera, std::span<const routes::RouteModel> routes,
                       std::span<const Trajectory> trajectories,
                       std::span<const anomaly::Verdict> verdicts,
                       const RenderOptions& options) {
  const std::string side = format_double(options.canvas);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + side + ' ' +
                    side + "\" width=\"" + side + "\" height=\"" + side + "\">\n";
  out += "<rect width=\"" + side + "\" height=\"" + side + "\" fill=\"#ffffff\"/>\n";

  std::set<int> anomalous;
  for (const auto& verdict : verdicts) {
    if (verdict.is_anomaly) anomalous.insert(verdict.trajectory_id);
  }

  for (const auto& model : routes) {
    std::vector<Point2> line;
    line.reserve(options.route_samples);
    const int n = options.route_samples > 1 ? options.route_samples : 2;
    for (int i = 0; i < n; ++i) {
      double u = model.domain_min +
                 (model.domain_max - model.domain_min) * static_cast<double>(i) / (n - 1);
      Point2 p = routes::from_frame(model.frame, {u, routes::evaluate(model, u)});
      line.push_back({p.x * options.canvas, p.y * options.canvas});
    }
    append_polyline(out, line, kRouteColor, "3", "0.9");
  }

  const bool scalable = camera.width > 0.0 && camera.height > 0.0;
  for (const auto& trajectory : trajectories) {
    std::vector<Point2> line;
    line.reserve(trajectory.points.size());
    for (const auto& point : trajectory.points) {
      Point2 p = scalable ? normalize_point(camera, point.birdeye) : point.birdeye;
      line.push_back({p.x * options.canvas, p.y * options.canvas});
    }
    bool flagged = anomalous.count(trajectory.track_id) > 0;
    append_polyline(out, line, flagged ? kAnomalyColor : kTrackColor, flagged ? "2.5" : "1.5",
                    flagged ? "1" : "0.6");
  }

  out += "</svg>\n";
  return out;
}

}  // namespace trajan::render
