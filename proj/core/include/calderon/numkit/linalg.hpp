#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace calderon::numkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thin SVD A = U diag(sigma) V^T with sigma nonincreasing.
struct SvdResult {
  Matrix U;
  Vector sigma;
  Matrix V;
};

/// Throws ParameterError on non-finite input.
SvdResult svd(const Matrix& a);

/// One diagonal block of a block-diagonal least-squares system.
struct SvdBlock {
  const SvdResult* factors = nullptr;
  Vector projected_rhs;   // U^T b
  double residual_floor2 = 0.0;  // |b - U U^T b|^2, unreachable by this block
};

SvdBlock make_block(const SvdResult& factors, const Vector& rhs);

struct MinNormSolution {
  std::vector<Vector> x;  // one coefficient vector per block
  double norm = 0.0;
  double residual = 0.0;
  double lambda = 0.0;    // Tikhonov parameter, +inf when x = 0 suffices
};

/// Minimal-norm x with |A x - b| <= budget over a block-diagonal A, by Tikhonov
/// regularization with bisection on lambda so that the residual lies in
/// [(1 - rel_tol) budget, budget]. Throws InfeasibleError with the smallest
/// reachable residual when the budget cannot be met.
MinNormSolution min_norm_within(std::span<const SvdBlock> blocks, double budget, double rel_tol = 0.01);

/// Single-matrix convenience form.
MinNormSolution min_norm_within(const SvdResult& factors, const Vector& rhs, double budget,
                                double rel_tol = 0.01);

/// Largest singular value.
double operator_norm(const Matrix& a);

}  // namespace calderon::numkit
