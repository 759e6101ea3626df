#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "calderon/dtn.hpp"

namespace calderon::mandache {

using dtn::GammaMatrix;
using dtn::Potential;

/// max over |alpha| <= m of the sampled sup |d^alpha f| on [-1,1]^n, using
/// central differences with the grid step. `points_per_axis` = 0 picks a
/// dimension-dependent default.
double sampled_cm_norm(int n, int m, const Potential::Evaluator& f, int points_per_axis = 0);

/// |psi|_{C^m} of the standard bump, cached per (n, m).
double mold_cm_norm(int n, int m);

/// Disjoint rescaled bumps eps * psi(N sqrt(n) (x - y_j)) on the N^n subcube centers of [-1/sqrt n, 1/sqrt n]^n.
struct BumpFamilySpec {
  int n = 1;
  int m = 1;
  double eps = 0.0;
  double beta = 0.0;
  double mu = 0.0;  // n^{m/2} |psi|_{C^m}
  int N = 0;
  std::vector<std::array<double, 3>> centers;

  /// Throws ParameterError unless 0 < eps < beta / mu.
  static BumpFamilySpec make(int n, int m, double eps, double beta);
  /// The beta placing N in the middle of its admissible range: (N + 1/2)^m mu eps.
  static BumpFamilySpec with_subdivisions(int n, int m, double eps, int N);

  int bits() const { return static_cast<int>(centers.size()); }
  /// Radius of each bump, 1/(N sqrt n).
  double bump_radius() const;
  /// Member with bump j present iff bit j of `mask` is set.
  Potential member(std::uint64_t mask) const;
  /// log |Z| = N^n log 2.
  double log_cardinality() const;
  /// 2^{-n-1} (beta/(mu eps))^{n/m}, the guaranteed lower bound for log |Z|.
  double log_cardinality_bound() const;
};

/// All 2^{N^n} members in mask order; BudgetError when N^n > 16.
std::vector<Potential> build_discrete_set(const BumpFamilySpec& spec);

struct NetSpec {
  int n = 1;
  double delta = 0.0;
  double C = 0.0;  // decay constant in |a| <= C e^{-c level}
  double c = 0.0;  // decay rate
  double R0 = 0.0;
  int l_delta = 0;
  double delta_prime = 0.0;
  std::int64_t net_terms = 0;   // N(delta) = sum_{p < l_delta} N_p
  double net_terms_bound = 0.0;  // 2 (l_delta + 1)^{2n+2}
  double grid_points = 0.0;      // |Y_delta|
  double log_net_size = 0.0;     // N(delta) log |Y_delta|
  double log_net_size_bound = 0.0;  // 2 (l_delta+1)^{2n+2} log(2 R0 (1+l_delta)^{n+2} / delta)
  double log_ratio = 0.0;        // l_delta / log(1/delta)
};

/// Throws ParameterError unless delta in (0, 1/e], C, c, R0 > 0.
NetSpec net_parameters(double delta, double C, double c, int n, double R0);

/// Rounds entries with max level < l_delta to delta' Z within [-R0, R0] and zeroes the rest.
/// Throws OutOfBallError when |mat|_X > R0.
GammaMatrix project_to_net(const GammaMatrix& mat, const NetSpec& net);

struct SearchOptions {
  int cap = 8;                      // Gamma section on m + k <= cap
  dtn::GammaOptions gamma;
  ProblemParams params;             // n and s of the exterior problem
  std::uint64_t seed = 1;
  int exhaustive_bits = 12;         // enumerate all pairs up to this N^n
  int sampled_pairs = 2000;         // random pairs beyond it
  std::size_t max_evaluations = 5000;
};

struct SearchReport {
  double eps = 0.0;
  double delta = 0.0;               // exp(-eps^{-n/((2n+3) m)})
  double r0 = 0.0;                  // lambda_min / 2
  int bits = 0;                     // N^n
  double log_z = 0.0;               // log |Z|
  NetSpec net;
  bool hypothesis_met = false;      // |Z| > |Y|
  bool exhaustive = true;
  std::size_t pairs_examined = 0;
  std::uint64_t mask1 = 0, mask2 = 0;
  double linf_distance = 0.0;       // sampled |q1 - q2|_inf
  double max_offset = 0.0;          // max_i sampled |q_i - q0|_inf
  double x_distance = 0.0;          // |Gamma(q1) - Gamma(q2)|_X
  double op_distance = 0.0;         // |Gamma(q1) - Gamma(q2)|_op
  double op_bound = 0.0;            // 4 |.|_X
  double target = 0.0;              // 8 delta
  double contraction_ratio = 0.0;   // x_distance / linf_distance
  double response_scale = 0.0;      // max_j |Gamma(q0 + z_j) - Gamma(q0)|_X / eps over single bumps
  double normalized_ratio = 0.0;    // x_distance / (eps response_scale)
  dtn::DecayFit fit;
};

struct SearchResult {
  Potential q1;
  Potential q2;
  SearchReport report;
};

/// Pigeonhole search for the pair of q0 + Z with the closest Gamma images.
SearchResult instability_search(const Potential& q0, const BumpFamilySpec& spec, const SearchOptions& options = {},
                                const numkit::WorkerPool* pool = nullptr);

}  // namespace calderon::mandache
