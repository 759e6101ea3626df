#include "calderon/numkit/fit.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "calderon/numkit/errors.hpp"

namespace calderon::numkit {

namespace {

double r_squared(std::span<const double> y, const Eigen::VectorXd& fitted) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    ss_res += (y[i] - fitted(i)) * (y[i] - fitted(i));
  }
  return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
}

Eigen::VectorXd least_squares(std::span<const double> x, std::span<const double> y, int degree) {
  if (x.size() != y.size()) throw ParameterError("fit: x and y differ in length");
  if (static_cast<int>(x.size()) <= degree) throw ParameterError("fit: too few points");
  Eigen::MatrixXd a(x.size(), degree + 1);
  Eigen::VectorXd b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw NumericError("fit: non-finite sample");
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      a(i, d) = p;
      p *= x[i];
    }
    b(i) = y[i];
  }
  return a.colPivHouseholderQr().solve(b);
}

}  // namespace

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const Eigen::VectorXd c = least_squares(x, y, 1);
  LineFit fit{c(1), c(0), 1.0, 0.0};
  Eigen::VectorXd fitted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    fitted(i) = c(0) + c(1) * x[i];
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(y[i] - fitted(i)));
  }
  fit.r_squared = r_squared(y, fitted);
  return fit;
}

QuadraticFit fit_quadratic(std::span<const double> x, std::span<const double> y) {
  const Eigen::VectorXd c = least_squares(x, y, 2);
  Eigen::VectorXd fitted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) fitted(i) = c(0) + c(1) * x[i] + c(2) * x[i] * x[i];
  return {c(0), c(1), c(2), r_squared(y, fitted)};
}

}  // namespace calderon::numkit
