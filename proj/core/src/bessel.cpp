#include "calderon/numkit/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "calderon/numkit/errors.hpp"

namespace calderon::numkit {

namespace {

void check_arguments(double order, double z) {
  if (!(order >= 0.0) || !std::isfinite(order)) throw ParameterError("Bessel order must be finite and >= 0");
  if (!(z >= 0.0) || std::isnan(z)) throw ParameterError("Bessel argument must be >= 0");
}

// sum_k (z/2)^{2k+nu} / (k! Gamma(k+nu+1))
double series(double nu, double z) {
  if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  double term = std::exp(nu * std::log(0.5 * z) - std::lgamma(nu + 1.0));
  double sum = term;
  const double q = 0.25 * z * z;
  for (int k = 1; k < 500; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (term < std::numeric_limits<double>::epsilon() * 0.25 * sum) break;
  }
  return sum;
}

// sqrt(2 pi z) e^{-z} I_nu(z) ~ sum_k (-1)^k a_k(nu) / z^k
double asymptotic_scaled(double nu, double z) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double last = std::abs(term);
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic series started to diverge
    sum += term;
    last = mag;
    if (mag < std::numeric_limits<double>::epsilon() * 0.25 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace

double bessel_i_scaled(double order, double z) {
  check_arguments(order, z);
  if (std::isinf(z)) return 0.0;
  if (z <= kBesselSeriesLimit) return std::exp(-z) * series(order, z);
  return asymptotic_scaled(order, z);
}

double bessel_i(double order, double z) {
  check_arguments(order, z);
  if (z <= kBesselSeriesLimit) return series(order, z);
  const double value = std::exp(z) * asymptotic_scaled(order, z);
  if (!std::isfinite(value)) throw RangeError("I_s(z) overflows double at z = " + std::to_string(z));
  return value;
}

}  // namespace calderon::numkit
