#include "trajan/routes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trajan/errors.hpp"
#include "trajan/numeric.hpp"
#include "trajan/polyfit.hpp"

namespace trajan::routes {

namespace {

constexpr double kPivot = 0.5;  // rotation center of the normalized square
constexpr double kConditionLimit = 1e12;

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

Point2 to_frame(const FrameSpec& frame, Point2 p) {
  double a = deg_to_rad(frame.rotate_deg);
  double c = std::cos(a), s = std::sin(a);
  double dx = p.x - kPivot, dy = p.y - kPivot;
  Point2 r{kPivot + c * dx - s * dy, kPivot + s * dx + c * dy};
  if (frame.y_parametric) return {r.y, r.x};
  return r;
}

Point2 from_frame(const FrameSpec& frame, Point2 q) {
  Point2 r = frame.y_parametric ? Point2{q.y, q.x} : q;
  double a = deg_to_rad(-frame.rotate_deg);
  double c = std::cos(a), s = std::sin(a);
  double dx = r.x - kPivot, dy = r.y - kPivot;
  return {kPivot + c * dx - s * dy, kPivot + s * dx + c * dy};
}

double evaluate(const RouteModel& model, double u) {
  return numeric::polyval(model.coefficients, u);
}

RouteModel fit_route(const RouteDefinition& def) {
  if (def.degree < 2 || def.degree > 7) {
    raise(ErrorCode::ConfigError,
          "route " + def.id + ": degree " + std::to_string(def.degree) + " outside [2, 7]");
  }
  const size_t n = def.control_points.size();
  if (n < static_cast<size_t>(def.degree) + 1) {
    raise(ErrorCode::RankDeficient,
          "route " + def.id + ": " + std::to_string(n) + " control points cannot determine degree " +
              std::to_string(def.degree));
  }

  std::vector<double> u(n), v(n);
  for (size_t i = 0; i < n; ++i) {
    Point2 q = to_frame(def.frame, def.control_points[i]);
    u[i] = q.x;
    v[i] = q.y;
  }
  bool increasing = u[1] > u[0];
  for (size_t i = 1; i < n; ++i) {
    bool ok = increasing ? u[i] > u[i - 1] : u[i] < u[i - 1];
    if (!ok) {
      raise(ErrorCode::NonMonotonic,
            "route " + def.id + ": control points double back along the abscissa at index " +
                std::to_string(i));
    }
  }

  polyfit::Fit fit = polyfit::fit(u, v, def.degree);
  if (!std::isfinite(fit.condition) || fit.condition > kConditionLimit) {
    raise(ErrorCode::RankDeficient, "route " + def.id + ": degenerate design matrix");
  }

  RouteModel model;
  model.id = def.id;
  model.frame = def.frame;
  model.coefficients = std::move(fit.coeffs);
  auto [lo, hi] = std::minmax(u.front(), u.back());
  model.domain_min = lo;
  model.domain_max = hi;
  model.residual_rms = fit.residual_rms;
  return model;
}

std::optional<double> trajectory_route_error(const Trajectory& trajectory, const RouteModel& model,
                                             double domain_margin) {
  double span = model.domain_max - model.domain_min;
  double lo = model.domain_min - domain_margin * span;
  double hi = model.domain_max + domain_margin * span;

  double sum = 0.0;
  long count = 0;
  for (const auto& point : trajectory.points) {
    Point2 q = to_frame(model.frame, point.birdeye);
    if (q.x < lo || q.x > hi) continue;
    sum += std::abs(q.y - evaluate(model, q.x));
    count += 1;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::optional<Classified> classify(const Trajectory& trajectory, std::span<const RouteModel> models,
                                   double domain_margin) {
  Classified result;
  result.trajectory = trajectory;
  bool found = false;
  for (const auto& model : models) {
    std::optional<double> error = trajectory_route_error(trajectory, model, domain_margin);
    if (!error) continue;
    result.per_route_errors[model.id] = *error;
    if (!found || *error < result.error ||
        (*error == result.error && model.id < result.route_id)) {
      result.route_id = model.id;
      result.error = *error;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  return result;
}

}  // namespace trajan::routes
