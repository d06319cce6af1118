#pragma once

#include <span>
#include <vector>

namespace trajan::polyfit {

struct Fit {
  std::vector<double> coeffs;  // ascending powers
  double residual_rms = 0.0;
  double residual_mae = 0.0;
  double condition = 0.0;  // spectral condition number of the design matrix
};

/// Least-squares polynomial fit y ~ sum_k c_k x^k via Householder QR on the
/// raw Vandermonde matrix. The caller is responsible for a sanely scaled
/// abscissa; condition is reported so callers can reject bad posings.
Fit fit(std::span<const double> x, std::span<const double> y, int degree);

struct SweepEntry {
  int degree = 0;
  double mae = 0.0;
  double condition = 0.0;
  bool reliable = false;
};

/// Mean absolute residual of the least-squares fit at every degree in
/// [degree_lo, degree_hi], sharing one QR factorization across the nested
/// monomial bases. The abscissa is mapped affinely onto [-1, 1] internally,
/// which spans the same polynomial space and keeps the basis well
/// conditioned; residuals are unaffected. Degrees whose design matrix is
/// rank-starved (fewer points than coefficients) or whose condition number
/// exceeds condition_limit are marked unreliable and skipped by callers.
std::vector<SweepEntry> sweep_mae(std::span<const double> x, std::span<const double> y,
                                  int degree_lo, int degree_hi, double condition_limit);

}  // namespace trajan::polyfit
