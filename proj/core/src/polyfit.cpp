#include "trajan/polyfit.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace trajan::polyfit {

namespace {

Eigen::MatrixXd vandermonde(std::span<const double> x, int cols) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(x.size()), cols);
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    double acc = 1.0;
    for (int k = 0; k < cols; ++k) {
      v(i, k) = acc;
      acc *= x[static_cast<size_t>(i)];
    }
  }
  return v;
}

double condition_of(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  double smax = sv(0);
  double smin = sv(sv.size() - 1);
  if (smin <= 0.0 || !std::isfinite(smin)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace

Fit fit(std::span<const double> x, std::span<const double> y, int degree) {
  const Eigen::Index m = static_cast<Eigen::Index>(x.size());
  const int cols = degree + 1;
  Fit out;
  if (m < cols) {
    out.coeffs.assign(static_cast<size_t>(cols), 0.0);
    out.condition = std::numeric_limits<double>::infinity();
    out.residual_rms = std::numeric_limits<double>::quiet_NaN();
    out.residual_mae = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  Eigen::MatrixXd v = vandermonde(x, cols);
  Eigen::Map<const Eigen::VectorXd> b(y.data(), m);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  Eigen::VectorXd c = qr.solve(b);
  Eigen::VectorXd residual = b - v * c;

  out.coeffs.assign(c.data(), c.data() + c.size());
  out.residual_rms = std::sqrt(residual.squaredNorm() / static_cast<double>(m));
  out.residual_mae = residual.cwiseAbs().mean();
  Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  out.condition = condition_of(r);
  return out;
}

std::vector<SweepEntry> sweep_mae(std::span<const double> x, std::span<const double> y,
                                  int degree_lo, int degree_hi, double condition_limit) {
  const Eigen::Index m = static_cast<Eigen::Index>(x.size());
  const int max_cols = degree_hi + 1;

  // Map the abscissa onto [-1, 1]; affine re-parameterization leaves every
  // degree's achievable residual unchanged.
  double lo = x[0], hi = x[0];
  for (double v : x) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double mid = 0.5 * (lo + hi);
  double half = 0.5 * (hi - lo);
  std::vector<double> t(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    t[i] = half > 0.0 ? (x[i] - mid) / half : 0.0;
  }

  const int fact_cols = static_cast<int>(std::min<Eigen::Index>(max_cols, m));
  Eigen::MatrixXd v = vandermonde(t, fact_cols);
  Eigen::Map<const Eigen::VectorXd> b(y.data(), m);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  Eigen::VectorXd qtb = qr.householderQ().adjoint() * b;
  Eigen::MatrixXd r = qr.matrixQR().topRows(fact_cols).triangularView<Eigen::Upper>();

  std::vector<SweepEntry> entries;
  entries.reserve(static_cast<size_t>(degree_hi - degree_lo + 1));
  for (int d = degree_lo; d <= degree_hi; ++d) {
    SweepEntry e;
    e.degree = d;
    const int cols = d + 1;
    if (cols > fact_cols || m < cols) {
      e.mae = std::numeric_limits<double>::quiet_NaN();
      e.condition = std::numeric_limits<double>::infinity();
      e.reliable = false;
      entries.push_back(e);
      continue;
    }
    Eigen::MatrixXd rd = r.topLeftCorner(cols, cols);
    e.condition = condition_of(rd);
    if (!(e.condition <= condition_limit)) {
      e.mae = std::numeric_limits<double>::quiet_NaN();
      e.reliable = false;
      entries.push_back(e);
      continue;
    }
    Eigen::VectorXd c = rd.triangularView<Eigen::Upper>().solve(qtb.head(cols));
    Eigen::VectorXd residual = b - v.leftCols(cols) * c;
    e.mae = residual.cwiseAbs().mean();
    e.reliable = true;
    entries.push_back(e);
  }
  return entries;
}

}  // namespace trajan::polyfit
