#include "calderon/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "calderon/numkit/bessel.hpp"
#include "calderon/numkit/errors.hpp"

namespace calderon::hadamard {

using numkit::bessel_i_scaled;

double cs_constant(double s) {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("fractional order s must lie in (0,1)");
  return std::pow(2.0, s - 1.0) * std::tgamma(s);
}

ExtensionSolution ExtensionSolution::make(int n, double s, double order_shift) {
  if (n < 1) throw ParameterError("frequency n must be at least 1");
  if (!(s + order_shift >= 0.0)) throw ParameterError("Bessel order must be nonnegative");
  return {n, s, cs_constant(s), order_shift};
}

double log_abs_v(const ExtensionSolution& sol, double x, double y) {
  if (!(y > 0.0)) throw ParameterError("log|v| needs y > 0");
  const double z = sol.n * y;
  return std::log(std::abs(sol.C)) - sol.s * std::log(sol.n) + std::log(std::abs(std::sin(sol.n * x))) +
         sol.s * std::log(y) + z + std::log(bessel_i_scaled(sol.order(), z));
}

double eval_v(const ExtensionSolution& sol, double x, double y) {
  if (!(y >= 0.0)) throw ParameterError("v is defined for y >= 0");
  const double sine = std::sin(sol.n * x);
  if (y == 0.0 || sine == 0.0) return 0.0;
  const double z = sol.n * y;
  const double log_rest = std::log(sol.C) - sol.s * std::log(sol.n) + sol.s * std::log(y) + z;
  const double magnitude = std::exp(log_rest) * bessel_i_scaled(sol.order(), z);
  const double value = sine * magnitude;
  if (!std::isfinite(value)) throw RangeError("v_n overflows double at n y = " + std::to_string(z));
  return value;
}

double pde_residual(const ExtensionSolution& sol, const ResidualGrid& grid) {
  if (!(grid.y_min > 0.0)) throw ParameterError("the residual grid must stay in y > 0");
  if (grid.steps < 2 || !(grid.x_max > grid.x_min) || !(grid.y_max > grid.y_min))
    throw ParameterError("degenerate residual grid");
  const double hx = (grid.x_max - grid.x_min) / grid.steps;
  const double hy = (grid.y_max - grid.y_min) / grid.steps;
  const double p = 1.0 - 2.0 * sol.s;
  auto v = [&](double x, double y) { return eval_v(sol, x, y); };
  double worst = 0.0;
  for (int i = 1; i < grid.steps; ++i) {
    const double x = grid.x_min + i * hx;
    for (int j = 1; j < grid.steps; ++j) {
      const double y = grid.y_min + j * hy;
      const double c = v(x, y);
      const double dxx = std::pow(y, p) * (v(x + hx, y) - 2.0 * c + v(x - hx, y)) / (hx * hx);
      const double up = std::pow(y + 0.5 * hy, p) * (v(x, y + hy) - c);
      const double down = std::pow(y - 0.5 * hy, p) * (c - v(x, y - hy));
      worst = std::max(worst, std::abs(dxx + (up - down) / (hy * hy)));
    }
  }
  return worst;
}

std::vector<double> dyadic_heights(int first, int count) {
  std::vector<double> out;
  for (int j = 0; j < count; ++j) out.push_back(std::ldexp(1.0, -(first + j)));
  return out;
}

FluxLimit boundary_flux(const ExtensionSolution& sol, double x, const std::vector<double>& heights) {
  if (heights.size() < 2) throw ParameterError("need at least two heights");
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (!(heights[i] > 0.0)) throw ParameterError("heights must be positive");
    if (i > 0 && !(heights[i] < heights[i - 1])) throw ParameterError("heights must decrease");
  }
  const double nu = sol.order();
  const double sine = std::sin(sol.n * x);
  FluxLimit out;
  out.heights = heights;
  for (double y : heights) {
    const double z = sol.n * y;
    // d/dy [y^s I_nu(n y)] = s y^{s-1} I_nu + n y^s (I_{nu+1} + nu/z I_nu); scaled by e^{-z}
    const double i_nu = bessel_i_scaled(nu, z);
    const double i_up = bessel_i_scaled(nu + 1.0, z);
    const double derivative = sol.s * std::pow(y, sol.s - 1.0) * i_nu + sol.n * std::pow(y, sol.s) * (i_up + nu / z * i_nu);
    out.values.push_back(sol.C * std::pow(sol.n, -sol.s) * sine * std::pow(y, 1.0 - 2.0 * sol.s) * std::exp(z) * derivative);
  }
  // Neville extrapolation to t = y^2 = 0; p[i] holds P_{i..i+level}(0)
  std::vector<double> p = out.values;
  const std::size_t m = p.size();
  double previous = p[1];
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      const double ti = heights[i] * heights[i];
      const double tk = heights[i + level] * heights[i + level];
      p[i] = (tk * p[i] - ti * p[i + 1]) / (tk - ti);
    }
    if (level + 2 == m) previous = p[1];
  }
  out.extrapolated = p[0];
  out.correction = std::abs(out.extrapolated - previous);
  return out;
}

GrowthTable growth_table(double s, double x0, double y0, int n_min, int n_max) {
  if (!(y0 > 0.0)) throw ParameterError("y0 must be positive");
  if (n_min < 1 || n_max < n_min) throw ParameterError("invalid frequency range");
  GrowthTable table;
  table.s = s;
  table.x0 = x0;
  table.y0 = y0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int n = n_min; n <= n_max; ++n) {
    const auto sol = ExtensionSolution::make(n, s);
    GrowthRow row;
    row.n = n;
    const double sine = std::sin(n * x0);
    row.usable = std::abs(sine) >= 0.1;
    if (sine != 0.0) {
      row.log_abs_v = log_abs_v(sol, x0, y0);
      row.normalized = std::exp(row.log_abs_v - n * y0 + (s + 0.5) * std::log(n) - std::log(std::abs(sine)));
      const double log_model = std::log(sol.C) - s * std::log(n) + std::log(std::abs(sine)) + s * std::log(y0) -
                               0.5 * std::log(2.0 * std::numbers::pi * n * y0) + n * y0;
      row.asymptotic_ratio = std::exp(row.log_abs_v - log_model);
    } else {
      row.usable = false;
    }
    if (row.usable) {
      lo = std::min(lo, row.normalized);
      hi = std::max(hi, row.normalized);
    }
    table.rows.push_back(row);
  }
  table.spread = hi > 0.0 ? hi / lo - 1.0 : 0.0;
  return table;
}

}  // namespace calderon::hadamard
