#pragma once

#include <functional>
#include <span>
#include <vector>

#include "calderon/numkit/extended.hpp"
#include "calderon/numkit/params.hpp"
#include "calderon/numkit/quadrature.hpp"

namespace calderon::radial {

using numkit::Wide;

/// L^2_s([2,3]) with weight w(r) = r^{-n-1} (r^2-1)^{-2s}.
struct WeightedSpaceSpec {
  int n = 1;
  double s = 0.5;

  static WeightedSpaceSpec from(const ProblemParams& p) { return {p.n, p.s}; }
  double weight(double r) const;
};

/// First negative power used by the generators of degree m: m, or 1 when m = 0
/// (the constant would otherwise appear twice).
int generator_start(int m);

/// Generators skipped as profiles: for m >= 1 the direction r^{-m} is
/// orthogonalized away but never emitted, so that g~_{m,k} (k >= 1) is
/// orthogonal to 1, r^{-m}, ..., r^{-m-k+1}.
int hidden_generators(int m);

/// g~_{m,k}(r) = coeffs[0] + sum_{j>=1} coeffs[j] r^{-(generator_start(m)+j-1)}.
struct RadialProfile {
  int m = 0;
  int k = 0;
  std::vector<Wide> coeffs;  // 1 entry for k=0, k+1+hidden_generators(m) otherwise

  /// Evaluation carried out in 256-bit arithmetic.
  Wide eval_wide(const Wide& r) const;
  double eval_exact(double r) const;
};

struct BasisDiagnostics {
  double gram_residual = 0.0;    // max |(g_i, g_j)_s - delta_ij|
  double moment_residual = 0.0;  // max |moment(j)| over j <= k0
  std::vector<double> condition_estimates;  // per k
  int precision_bits = 0;
};

/// Profiles g~_{m,0..k_max} with their values cached on a Gauss rule on [2,3].
class RadialBasis {
 public:
  RadialBasis(WeightedSpaceSpec spec, int m, std::vector<RadialProfile> profiles, BasisDiagnostics diagnostics,
              int quad_nodes);

  const WeightedSpaceSpec& spec() const { return spec_; }
  int m() const { return m_; }
  int k_max() const { return static_cast<int>(profiles_.size()) - 1; }
  const RadialProfile& profile(int k) const;
  const std::vector<RadialProfile>& profiles() const { return profiles_; }
  const BasisDiagnostics& diagnostics() const { return diagnostics_; }

  /// Gauss rule on [2,3] used for all double-precision integrals.
  const numkit::QuadRule& rule() const { return rule_; }
  /// g~_{m,k} at rule().nodes.
  std::span<const double> node_values(int k) const;
  /// g~_{m,k}(r) by barycentric interpolation of the cached node values.
  double eval(int k, double r) const;

 private:
  WeightedSpaceSpec spec_;
  int m_;
  std::vector<RadialProfile> profiles_;
  BasisDiagnostics diagnostics_;
  numkit::QuadRule rule_;
  std::vector<double> bary_weights_;
  std::vector<std::vector<double>> values_;
};

/// (f,g)_s by Gauss quadrature with params.quad_nodes nodes.
double inner_product_s(const std::function<double(double)>& f, const std::function<double(double)>& g,
                       const ProblemParams& params);

/// Weighted Gram-Schmidt construction; throws ConditioningError naming the failing k.
RadialBasis build_radial_basis(int m, int k_max, const ProblemParams& params);

/// Largest k <= k_limit that passes the conditioning guard for degree m.
int max_resolvable_k(int m, int k_limit, const ProblemParams& params);

/// k0 = (k-1)/2 for odd k, k/2-1 for even k; -1 when no moment vanishes.
int vanishing_order(int k);

/// int_2^3 g_{m,k}(r) r^{-(m+2j)} dr with g = r^{-(n+1)} (r^2-1)^{-2s} g~.
double moment(const RadialBasis& basis, int k, int j);

/// F_{m,k}(rt) = int_2^3 g_{m,k}(r) r^{-m} / (1 - rt^2/r^2) dr by direct quadrature.
double eval_F(const RadialBasis& basis, int k, double rt);

/// Truncated series sum_{j<terms} rt^{2j} moment(j).
double eval_F_series(const RadialBasis& basis, int k, double rt, int terms);

}  // namespace calderon::radial
