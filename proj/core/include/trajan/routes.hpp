#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajan/types.hpp"

namespace trajan::routes {

/// Choice of fitting frame for one route. Points are rotated about the
/// center of the normalized square, then the axes are optionally swapped so
/// the route is single-valued and monotonic along the abscissa. Routes that
/// run mostly north-south declare y_parametric; diagonal ones declare a
/// rotation.
struct FrameSpec {
  double rotate_deg = 0.0;
  bool y_parametric = false;
};

/// Normalized bird's-eye point -> (abscissa, ordinate) in the route frame.
Point2 to_frame(const FrameSpec& frame, Point2 p);

/// Inverse of to_frame.
Point2 from_frame(const FrameSpec& frame, Point2 q);

/// Operator-drawn route: 8-10 control points in normalized bird's-eye
/// coordinates plus the polynomial degree to fit through them.
struct RouteDefinition {
  std::string id;
  FrameSpec frame;
  int degree = 3;  // in [2, 7]
  std::vector<Point2> control_points;
};

struct RouteModel {
  std::string id;
  FrameSpec frame;
  std::vector<double> coefficients;  // ascending powers over the frame abscissa
  double domain_min = 0.0;
  double domain_max = 0.0;
  double residual_rms = 0.0;
};

/// Ordinate predicted by the route polynomial at frame abscissa u.
double evaluate(const RouteModel& model, double u);

inline constexpr double kDomainMargin = 0.05;

/// Least-squares polynomial through the frame-transformed control points.
/// Throws NonMonotonic when the control points double back along the
/// abscissa and RankDeficient when the fit is underdetermined.
RouteModel fit_route(const RouteDefinition& def);

/// Mean absolute error between the trajectory's frame-transformed points and
/// the route polynomial, over points whose abscissa falls inside the route
/// domain expanded by the margin (a fraction of the domain span). Empty when
/// no point overlaps the domain, which excludes the route from
/// classification rather than failing it.
std::optional<double> trajectory_route_error(const Trajectory& trajectory, const RouteModel& model,
                                             double domain_margin = kDomainMargin);

struct Classified {
  Trajectory trajectory;  // normalized bird's-eye coordinates
  std::string route_id;
  double error = 0.0;
  std::map<std::string, double> per_route_errors;  // overlapping routes only
};

/// Assigns the trajectory to the overlapping route with the lowest MAE; ties
/// break toward the lexicographically smaller route id. Empty when the
/// trajectory overlaps no route at all (unclassifiable, excluded from
/// anomaly statistics).
std::optional<Classified> classify(const Trajectory& trajectory, std::span<const RouteModel> models,
                                   double domain_margin = kDomainMargin);

}  // namespace trajan::routes
