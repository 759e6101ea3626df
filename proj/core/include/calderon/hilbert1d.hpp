#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "calderon/numkit/linalg.hpp"
#include "calderon/numkit/quadrature.hpp"

namespace calderon::hilbert {

using numkit::Matrix;
using numkit::Vector;

/// Nystrom discretization of f -> int_2^3 f(y)/(t-y) dy at the Gauss nodes t of [-1,1].
struct TruncatedHT {
  numkit::QuadRule target;  // [-1,1]
  numkit::QuadRule source;  // [2,3]
  Matrix matrix;            // w_j / (t_i - y_j)

  /// H_[2,3] f at t, by the source rule.
  double forward(const std::function<double(double)>& f, double t) const;
  /// H_[-1,1] g at y, by the target rule.
  double adjoint(const std::function<double(double)>& g, double y) const;
};

/// Throws ParameterError when either node count is below 32.
TruncatedHT build_ht(int target_nodes = 64, int source_nodes = 64);

struct SvdTriple {
  int l = 0;
  double sigma = 0.0;
  Vector f;  // f_l at the source nodes
  Vector g;  // g_l at the target nodes
  double residual = 0.0;          // |H f_l - sigma_l g_l| on a refined grid
  double adjoint_residual = 0.0;  // |H_[-1,1] g_l + sigma_l f_l| on a refined grid
};

class HtSvd {
 public:
  HtSvd(TruncatedHT ht, std::vector<SvdTriple> triples, int requested, int resolvable);

  const TruncatedHT& ht() const { return ht_; }
  const std::vector<SvdTriple>& triples() const { return triples_; }
  const SvdTriple& triple(int l) const;
  int requested() const { return requested_; }
  int resolvable() const { return resolvable_; }
  /// Set when fewer triples than requested lie above the noise floor.
  const std::optional<std::string>& warning() const { return warning_; }

  /// Polynomial interpolants of the nodal singular functions.
  double f_at(int l, double y) const;
  double g_at(int l, double t) const;
  /// f^_l = (y^2-1)^s f_l and g^_l = (1-t^2)^s g_l.
  double fhat_at(int l, double y, double s) const;
  double ghat_at(int l, double t, double s) const;

 private:
  TruncatedHT ht_;
  std::vector<SvdTriple> triples_;
  int requested_;
  int resolvable_;
  std::optional<std::string> warning_;
};

/// Weighted SVD of the discretized operator; keeps at most `count` triples
/// with sigma above 100 eps sigma_0.
HtSvd ht_svd(const TruncatedHT& ht, int count);

/// P(x) = (x-1)(x+1)(x-2)(x-3).
double sl_coefficient(double x);

struct SturmLiouvilleReport {
  int l = 0;
  double lambda = 0.0;    // Rayleigh quotient over interior nodes
  double residual = 0.0;  // |L f - lambda f| / |lambda f| over interior nodes
  bool noisy = false;     // residual > 0.1
};

/// Applies (P f')' + 2 (x - 5/4)^2 f by spectral differentiation at the source
/// nodes and measures the eigen-relation on nodes with margin <= y <= 3 - margin.
SturmLiouvilleReport sturm_liouville_check(const HtSvd& svd, int l, double margin = 0.1);

struct IdentityCheck {
  double discrepancy = 0.0;  // |A0 g + c(s)(1-x^2)^s H((.^2-1)^{-s} g)| / |A0 g|
  double cosine = 0.0;       // cosine between A0 g and -(1-x^2)^s H(...)
};

struct IdentityOptions {
  int evaluation_nodes = 48;  // Gauss nodes on [-1,1]
  int kernel_nodes = 64;      // annulus rule for the kernel form of A0
  int transform_nodes = 96;   // source rule for the Hilbert side
};

/// Compares the kernel form of A0 with the Hilbert-transform form for data g on [2,3].
IdentityCheck ht_frac_identity(const std::function<double(double)>& g, double s, const IdentityOptions& options = {});

/// max_x |A0 f^_l + c(s) sigma_l g^_l| / max_x |c(s) sigma_l g^_l| on interior Gauss nodes.
double singular_identity_defect(const HtSvd& svd, int l, double s, const IdentityOptions& options = {});

struct NormEquivalence {
  double gamma = 0.0;
  double c1 = 0.0;  // min |f| / |f|_gamma over the samples
  double c2 = 0.0;  // max |f| / |f|_gamma
  double inf_weight = 0.0;  // min (y^2-1)^{-gamma} on [2,3], the sharp lower constant
  double sup_weight = 0.0;  // max (y^2-1)^{-gamma}, the sharp upper constant
  bool within_third_to_three = false;
};

/// c1 |f|_{L2_gamma} <= |f|_{L2} <= c2 |f|_{L2_gamma} on random polynomial samples.
NormEquivalence weighted_norm_equivalence(double gamma, int samples = 200, std::uint64_t seed = 1, int nodes = 64);

struct ControlRow {
  int k = 0;
  double sigma = 0.0;
  double norm = 0.0;       // |f~_k|_{L2[2,3]}
  double inv_sigma = 0.0;
  double scaled = 0.0;     // norm c(s) sigma_k
  double band_low = 0.0;   // min (y^2-1)^s (1 - 1/k)
  double band_high = 0.0;  // max (y^2-1)^s
  double residual = 0.0;   // weighted approximation error
  bool degenerate = false; // zero control meets the budget
  bool within_band = false;
};

struct ControlGrowth {
  double s = 0.5;
  std::vector<ControlRow> rows;
  double norm_slope = 0.0;   // slope of log norm in k over nondegenerate rows
  double sigma_slope = 0.0;  // slope of log sigma_k over the same rows
};

/// Minimal-norm controls for the targets g^_k with weighted error budget 1/k, k = 1..k_max.
ControlGrowth control_growth_1d(const HtSvd& svd, int k_max, double s, double rel_tol = 0.01);

}  // namespace calderon::hilbert
