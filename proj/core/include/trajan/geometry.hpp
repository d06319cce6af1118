#pragma once

#include <span>
#include <vector>

#include "trajan/types.hpp"

namespace trajan::geometry {

/// One hand-picked fisheye/bird's-eye landmark pair used for calibration.
struct CorrespondencePair {
  Point2 fisheye;
  Point2 birdeye;
};

/// Radial distortion model K(z) = q0 + q1 z + ... + qn z^n relating
/// displacements from the distortion center: the fisheye displacement of a
/// point equals K(z) times its bird's-eye displacement, where z is the
/// point's Euclidean distance from the center in the fisheye image.
class DistortionModel {
 public:
  /// Validates K(z) > 0 over [0, valid_radius] (dense sampling); throws
  /// NonPositiveK otherwise.
  DistortionModel(Point2 center, std::vector<double> coefficients, double valid_radius);

  double k_at(double z) const;
  int order() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  Point2 center() const { return center_; }
  double valid_radius() const { return valid_radius_; }

 private:
  Point2 center_;
  std::vector<double> coefficients_;
  double valid_radius_;
};

double radial_distance(Point2 p, Point2 center);

struct DistortionFit {
  DistortionModel model;
  double residual_rms;  // in ratio units K(z)
};

/// Least-squares fit of the distortion polynomial from correspondence pairs.
/// Each pair contributes one ratio sample r_i = |f_i - c| / |b_i - c| at
/// abscissa z_i = |f_i - c|. valid_radius is the largest observed z.
DistortionFit fit_distortion(std::span<const CorrespondencePair> pairs, Point2 center, int order);

struct Projection {
  Point2 point;
  /// Set when z exceeded valid_radius * 1.1; the result is an extrapolation.
  bool extrapolated = false;
};

/// Fisheye pixel -> bird's-eye pixel: center + (p - center) / K(z).
Projection to_birdeye(const DistortionModel& model, Point2 fisheye);

/// Bird's-eye pixel -> fisheye pixel. Solves the scalar radial equation
/// z_f = |p_b - c| * K(z_f) by bracketed bisection (budget 100 iterations).
Point2 to_fisheye(const DistortionModel& model, Point2 birdeye);

}  // namespace trajan::geometry
