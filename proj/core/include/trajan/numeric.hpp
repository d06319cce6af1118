#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace trajan::numeric {

/// Shortest decimal representation that round-trips the exact double value.
/// Locale-independent; used for every number the project writes to a file.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_integer(std::string_view token);

/// Linearly interpolated quantile (R type-7) over an ascending-sorted sample.
/// p in [0, 1]; the sample must be non-empty.
double quantile_linear(std::span<const double> sorted, double p);

/// Horner evaluation of sum coeffs[k] * x^k (ascending powers).
double polyval(std::span<const double> coeffs, double x);

/// Derivative of the polynomial above, evaluated at x.
double polyval_derivative(std::span<const double> coeffs, double x);

}  // namespace trajan::numeric
