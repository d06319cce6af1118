#pragma once

#include <span>
#include <string>

#include "trajan/anomaly.hpp"
#include "trajan/routes.hpp"
#include "trajan/types.hpp"

namespace trajan::render {

struct RenderOptions {
  double canvas = 800.0;  // square canvas side in SVG units
  int route_samples = 64;
};

/// Bird's-eye overview as a standalone SVG: route centerlines in blue,
/// trajectories in red, trajectories with an anomaly verdict in orange.
/// Trajectories arrive in bird's-eye pixels and are scaled by the camera
/// frame; route models are already normalized. Valid (empty) SVG for empty
/// inputs.
std::string render_svg(const CameraFrame& camera, std::span<const routes::RouteModel> routes,
                       std::span<const Trajectory> trajectories,
                       std::span<const anomaly::Verdict> verdicts,
                       const RenderOptions& options = {});

}  // namespace trajan::render
