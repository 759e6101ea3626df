#pragma once

#include <span>

namespace calderon::numkit {

/// Least-squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;  // coefficient of determination
  double max_abs_residual = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares quadratic y = c0 + c1 x + c2 x^2.
struct QuadraticFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double r_squared = 1.0;
};

QuadraticFit fit_quadratic(std::span<const double> x, std::span<const double> y);

}  // namespace calderon::numkit
