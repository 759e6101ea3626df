#pragma once

namespace calderon::numkit {

/// Modified Bessel function of the first kind I_order(z), order >= 0, z >= 0.
/// Throws RangeError when the value overflows double; use bessel_i_scaled then.
double bessel_i(double order, double z);

/// Exponentially scaled e^{-z} I_order(z).
double bessel_i_scaled(double order, double z);

/// Switch point between the power series and the asymptotic expansion.
inline constexpr double kBesselSeriesLimit = 30.0;

}  // namespace calderon::numkit
