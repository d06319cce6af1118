#include "trajan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trajan/errors.hpp"
#include "trajan/numeric.hpp"
#include "trajan/polyfit.hpp"

namespace trajan::geometry {

namespace {

constexpr double kZeroDisplacement = 1e-12;
constexpr double kExtrapolationFactor = 1.1;
constexpr int kRootIterationBudget = 100;
constexpr double kRootTolerance = 1e-10;

}  // namespace

DistortionModel::DistortionModel(Point2 center, std::vector<double> coefficients,
                                 double valid_radius)
    : center_(center), coefficients_(std::move(coefficients)), valid_radius_(valid_radius) {
  if (coefficients_.empty()) {
    raise(ErrorCode::NonPositiveK, "model has no coefficients");
  }
  if (!(valid_radius_ > 0.0)) {
    raise(ErrorCode::ConfigError, "valid_radius must be positive");
  }
  // K must be strictly positive over the calibrated range; a dense scan is
  // enough at the polynomial orders allowed here (<= 6).
  constexpr int kScanSteps = 4096;
  for (int i = 0; i <= kScanSteps; ++i) {
    double z = valid_radius_ * static_cast<double>(i) / kScanSteps;
    double k = numeric::polyval(coefficients_, z);
    if (!(k > 0.0)) {
      raise(ErrorCode::NonPositiveK,
            "K(" + numeric::format_double(z) + ") = " + numeric::format_double(k));
    }
  }
}

double DistortionModel::k_at(double z) const { return numeric::polyval(coefficients_, z); }

double radial_distance(Point2 p, Point2 center) {
  return std::hypot(p.x - center.x, p.y - center.y);
}

DistortionFit fit_distortion(std::span<const CorrespondencePair> pairs, Point2 center,
                             int order) {
  if (order < 0 || order > 6) {
    raise(ErrorCode::ConfigError, "order must lie in [0, 6], got " + std::to_string(order));
  }

  std::vector<double> zs;
  std::vector<double> ratios;
  zs.reserve(pairs.size());
  ratios.reserve(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    double zf = radial_distance(pairs[i].fisheye, center);
    double zb = radial_distance(pairs[i].birdeye, center);
    if (zf < kZeroDisplacement && zb < kZeroDisplacement) {
      continue;  // center maps to center by construction; no constraint
    }
    if (zf < kZeroDisplacement || zb < kZeroDisplacement) {
      raise(ErrorCode::DegeneratePair,
            "pair " + std::to_string(i) + " collapses onto the distortion center");
    }
    zs.push_back(zf);
    ratios.push_back(zf / zb);
  }

  std::vector<double> distinct = zs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }),
                 distinct.end());
  if (static_cast<int>(distinct.size()) < order + 1) {
    raise(ErrorCode::InsufficientCorrespondences,
          "need " + std::to_string(order + 1) + " distinct radii, have " +
              std::to_string(distinct.size()));
  }

  double valid_radius = *std::max_element(zs.begin(), zs.end());

  // Fit against z / valid_radius so the Vandermonde stays well conditioned,
  // then rescale coefficients back to raw z units.
  std::vector<double> scaled(zs.size());
  for (size_t i = 0; i < zs.size(); ++i) scaled[i] = zs[i] / valid_radius;
  polyfit::Fit fit = polyfit::fit(scaled, ratios, order);
  if (!(fit.condition < 1e12)) {
    raise(ErrorCode::InsufficientCorrespondences, "rank-deficient design matrix");
  }

  std::vector<double> coeffs(fit.coeffs.size());
  double scale = 1.0;
  for (size_t k = 0; k < fit.coeffs.size(); ++k) {
    coeffs[k] = fit.coeffs[k] / scale;
    scale *= valid_radius;
  }

  return DistortionFit{DistortionModel(center, std::move(coeffs), valid_radius),
                       fit.residual_rms};
}

Projection to_birdeye(const DistortionModel& model, Point2 fisheye) {
  Point2 c = model.center();
  double z = radial_distance(fisheye, c);
  Projection out;
  out.extrapolated = z > model.valid_radius() * kExtrapolationFactor;
  if (z < kZeroDisplacement) {
    out.point = fisheye;
    return out;
  }
  double k = model.k_at(z);
  if (!(k > 0.0)) {
    raise(ErrorCode::NonPositiveK,
          "K(" + numeric::format_double(z) + ") = " + numeric::format_double(k));
  }
  out.point = c + (1.0 / k) * (fisheye - c);
  return out;
}

Point2 to_fisheye(const DistortionModel& model, Point2 birdeye) {
  Point2 c = model.center();
  double zb = radial_distance(birdeye, c);
  if (zb < kZeroDisplacement) return birdeye;

  auto g = [&](double zf) { return zf - zb * model.k_at(zf); };

  int budget = kRootIterationBudget;
  double lo = 0.0;
  double g_lo = g(lo);  // -zb * K(0) < 0 for a valid model
  double hi = model.valid_radius() * kExtrapolationFactor;
  double g_hi = g(hi);
  while (g_hi < 0.0 && budget > 0) {
    hi *= 1.5;
    g_hi = g(hi);
    --budget;
  }
  if (g_lo > 0.0 || g_hi < 0.0) {
    raise(ErrorCode::NoConvergence,
          "no bracket for radial root at z_b = " + numeric::format_double(zb));
  }

  double mid = 0.5 * (lo + hi);
  while (budget-- > 0) {
    mid = 0.5 * (lo + hi);
    double g_mid = g(mid);
    if (g_mid == 0.0 || hi - lo < kRootTolerance) break;
    if (g_mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo > std::max(kRootTolerance, 1e-9 * hi)) {
    raise(ErrorCode::NoConvergence,
          "radial root did not converge for z_b = " + numeric::format_double(zb));
  }

  double zf = mid;
  double inv = zf / zb;  // = K(z_f) at the root
  return c + inv * (birdeye - c);
}

}  // namespace trajan::geometry
