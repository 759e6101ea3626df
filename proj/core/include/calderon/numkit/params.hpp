#pragma once

namespace calderon {

/// Problem description shared by all modules.
struct ProblemParams {
  int n = 1;                  // spatial dimension, 1..3
  double s = 0.5;             // fractional order in (0,1)
  int quad_nodes = 64;        // nodes per 1D rule on [2,3]
  int precision_bits = 128;   // mantissa width for orthogonalization
  double tol_quad = 1e-12;    // relative quadrature tolerance

  /// Throws ParameterError when an invariant is violated.
  void validate() const;
};

}  // namespace calderon
