#pragma once

#include <vector>

namespace calderon::hadamard {

/// C_s = 2^{s-1} Gamma(s), the constant giving unit boundary flux.
double cs_constant(double s);

/// v_n(x,y) = C_s n^{-s} sin(n x) y^s I_{s+shift}(n y). A nonzero shift gives a
/// deliberately wrong candidate for negative controls.
struct ExtensionSolution {
  int n = 1;
  double s = 0.5;
  double C = 0.0;
  double order_shift = 0.0;

  static ExtensionSolution make(int n, double s, double order_shift = 0.0);
  double order() const { return s + order_shift; }
};

/// Throws ParameterError for y < 0 and RangeError when |v| overflows double.
double eval_v(const ExtensionSolution& sol, double x, double y);

/// log|v_n(x,y)| for y > 0 and sin(n x) != 0, finite for any n y.
double log_abs_v(const ExtensionSolution& sol, double x, double y);

/// Uniform grid [x_min, x_max] x [y_min, y_max] with `steps` cells per side.
struct ResidualGrid {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.5;
  double y_max = 1.5;
  int steps = 16;
};

/// max over interior grid points of |div(y^{1-2s} grad v)|, with second-order
/// differences of the weighted flux. Throws ParameterError if y_min <= 0.
double pde_residual(const ExtensionSolution& sol, const ResidualGrid& grid);

struct FluxLimit {
  std::vector<double> heights;
  std::vector<double> values;  // y^{1-2s} d_y v at (x, y)
  double extrapolated = 0.0;   // Richardson limit y -> 0
  double correction = 0.0;     // difference between the last two extrapolants
};

/// Heights 2^{-first}, ..., 2^{-(first+count-1)}.
std::vector<double> dyadic_heights(int first = 4, int count = 8);

/// y^{1-2s} d_y v from the closed-form derivative, extrapolated in y^2 to y = 0.
/// Throws ParameterError unless the heights are positive and decreasing.
FluxLimit boundary_flux(const ExtensionSolution& sol, double x, const std::vector<double>& heights);

struct GrowthRow {
  int n = 0;
  double log_abs_v = 0.0;
  double normalized = 0.0;  // |v| e^{-n y0} n^{s+1/2} / |sin(n x0)|
  double asymptotic_ratio = 0.0;  // v / (C_s n^{-s} sin(n x) y0^s (2 pi n y0)^{-1/2} e^{n y0})
  bool usable = true;       // |sin(n x0)| >= 0.1
};

struct GrowthTable {
  double s = 0.5;
  double x0 = 1.0;
  double y0 = 1.0;
  std::vector<GrowthRow> rows;
  double spread = 0.0;  // max/min - 1 of `normalized` over usable rows
};

GrowthTable growth_table(double s, double x0, double y0, int n_min = 20, int n_max = 80);

}  // namespace calderon::hadamard
