#pragma once

#include <array>
#include <compare>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "calderon/numkit/harmonics.hpp"
#include "calderon/numkit/linalg.hpp"
#include "calderon/numkit/parallel.hpp"
#include "calderon/numkit/params.hpp"
#include "calderon/numkit/quadrature.hpp"
#include "calderon/numkit/fit.hpp"
#include "calderon/radialbasis.hpp"

namespace calderon::poisson {

/// Ball Poisson-kernel constant c(n,s) = Gamma(n/2) sin(pi s) / pi^{n/2+1}.
double poisson_constant(int n, double s);

/// c_{n,s} = c(n,s) |S^{n-1}| = 2 sin(pi s)/pi, the constant of the separated form of A0 f.
double decomposition_constant(int n, double s);

/// Index (m,k,l) of an exterior basis function.
struct BasisIndex {
  int m = 0;
  int k = 0;
  int l = 0;
  auto operator<=>(const BasisIndex&) const = default;
  int level() const { return m + k; }
  std::string str() const;
};

/// All (m,k,l) with m+k <= cap that exist in dimension n, ordered by (m,k,l).
std::vector<BasisIndex> triangle_indices(int n, int cap);
/// All (m,k,l) with m <= m_max, k <= k_max.
std::vector<BasisIndex> rectangle_indices(int n, int m_max, int k_max);

/// Orthonormal basis f_{m,k,l}(r w) = r^{-n} (r^2-1)^{-s} g~_{m,k}(r) h_{m,l}(w) of L^2(B_3 \ B_2).
class ExteriorBasis {
 public:
  ExteriorBasis(ProblemParams params, std::vector<radial::RadialBasis> by_degree);

  /// Radial bases for m = 0..min(cap, mmax(n)) with k_max = cap - m.
  static ExteriorBasis build_triangle(const ProblemParams& params, int cap,
                                      const numkit::WorkerPool* pool = nullptr);
  /// Radial bases for m = 0..m_max with a common k_max.
  static ExteriorBasis build_rectangle(const ProblemParams& params, int m_max, int k_max,
                                       const numkit::WorkerPool* pool = nullptr);

  const ProblemParams& params() const { return params_; }
  int m_max() const { return static_cast<int>(by_degree_.size()) - 1; }
  bool contains(BasisIndex idx) const;
  /// Throws DependencyError when degree m was not built.
  const radial::RadialBasis& radial(int m) const;
  /// All built indices, ordered by (m,k,l).
  std::vector<BasisIndex> indices() const;

  /// rho_{m,k}(r) = r^{-n} (r^2-1)^{-s} g~_{m,k}(r).
  double radial_factor(int m, int k, double r) const;
  /// f_{m,k,l}(y); zero outside 2 <= |y| <= 3.
  double value(BasisIndex idx, std::span<const double> y) const;

 private:
  void require(BasisIndex idx) const;
  ProblemParams params_;
  std::vector<radial::RadialBasis> by_degree_;
};

/// Tensor grid on B_1: Gauss-Jacobi radial rule (weight (1-r)^{2s}) times a sphere rule.
class InteriorGrid {
 public:
  InteriorGrid(int n, double s, int radial_nodes, int max_degree);

  int n() const { return n_; }
  double s() const { return s_; }
  int max_degree() const { return max_degree_; }
  std::size_t radial_size() const { return radial_nodes_.size(); }
  std::size_t sphere_size() const { return sphere_.size(); }
  std::size_t size() const { return radial_size() * sphere_size(); }
  double radius(std::size_t i) const { return radial_nodes_[i]; }
  /// Weight for integrands of the form (1-r^2)^{2s} x smooth, including r^{n-1}.
  double radial_weight(std::size_t i) const { return radial_weights_[i]; }
  const numkit::SphereRule& sphere() const { return sphere_; }

  std::size_t index(std::size_t radial, std::size_t direction) const { return radial * sphere_size() + direction; }
  std::array<double, 3> point(std::size_t flat) const;
  double weight(std::size_t flat) const;

 private:
  int n_;
  double s_;
  int max_degree_;
  std::vector<double> radial_nodes_;
  std::vector<double> radial_weights_;
  numkit::SphereRule sphere_;
};

std::shared_ptr<const InteriorGrid> make_interior_grid(int n, double s, int radial_nodes, int max_degree);

/// Samples of a function on B_1 at the nodes of an InteriorGrid.
class InteriorField {
 public:
  InteriorField() = default;
  explicit InteriorField(std::shared_ptr<const InteriorGrid> grid);
  InteriorField(std::shared_ptr<const InteriorGrid> grid, std::vector<double> values);

  const InteriorGrid& grid() const { return *grid_; }
  const std::shared_ptr<const InteriorGrid>& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double norm() const;
  double dot(const InteriorField& other) const;

  InteriorField& operator+=(const InteriorField& other);
  InteriorField& operator-=(const InteriorField& other);
  InteriorField& operator*=(double a);

 private:
  void check_same_grid(const InteriorField& other) const;
  std::shared_ptr<const InteriorGrid> grid_;
  std::vector<double> values_;
};

InteriorField operator+(InteriorField a, const InteriorField& b);
InteriorField operator-(InteriorField a, const InteriorField& b);
InteriorField operator*(double a, InteriorField f);

/// q_{m,k}(rt) = c_{n,s} (1-rt^2)^s rt^m F_{m,k}(rt).
double interior_radial_factor(const ExteriorBasis& basis, int m, int k, double rt);

/// u_{m,k,l} = A0 f_{m,k,l} from the separated formula.
InteriorField apply_A0_basis(const ExteriorBasis& basis, BasisIndex idx, std::shared_ptr<const InteriorGrid> grid);

/// Quadrature for the annulus 2 <= |y| <= 3 used by the kernel form of A0.
struct AnnulusOptions {
  int radial_nodes = 64;
  int angular_degree = 64;
};

using ExteriorFunction = std::function<double(std::span<const double>)>;

/// u(x) = c(n,s) (1-|x|^2)^s int_annulus |x-y|^{-n} (|y|^2-1)^{-s} f(y) dy at given points.
std::vector<double> apply_A0_at(const ExteriorFunction& f, const ProblemParams& params,
                                std::span<const std::array<double, 3>> points, const AnnulusOptions& options = {});

InteriorField apply_A0_general(const ExteriorFunction& f, const ProblemParams& params,
                               std::shared_ptr<const InteriorGrid> grid, const AnnulusOptions& options = {});

struct DecayRow {
  BasisIndex idx;
  double norm = 0.0;
  double bound = 0.0;  // c_{n,s} 2^{-m-k}
};

struct DecayReport {
  int n = 1;
  double s = 0.5;
  int cap = 0;
  double c_ns = 0.0;
  std::vector<DecayRow> rows;
  numkit::LineFit fit;  // log norm against m+k
  bool all_within_bound = true;
  double max_ratio = 0.0;  // max norm / bound
};

struct DecayOptions {
  int radial_nodes = 96;
};

DecayReport decay_report(int cap, const ProblemParams& params, const DecayOptions& options = {},
                         const numkit::WorkerPool* pool = nullptr);

struct VpResult {
  InteriorField vp;
  double alpha0 = 0.0;
};

/// v_p = u_{p,0,0} / |u_{p,0,0}|, alpha0 = 1/|u_{p,0,0}|.
VpResult make_vp(int p, const ExteriorBasis& basis, std::shared_ptr<const InteriorGrid> grid);

struct ControlCaps {
  int M = 0;
  int K = 0;
};

struct ControlOptions {
  int radial_nodes = 96;
  double rel_tol = 0.01;
};

/// Discretized A0 on span{f_{m,k,l} : m <= M, k <= K} in block form: by the
/// exact angular quadrature, A0 splits into one radial block per degree m,
/// shared by all orders l.
class ControlProblem {
 public:
  ControlProblem(std::shared_ptr<const ExteriorBasis> basis, std::shared_ptr<const InteriorGrid> grid, int p,
                 ControlCaps caps);

  int p() const { return p_; }
  ControlCaps caps() const { return caps_; }
  double budget() const { return 1.0 / p_; }
  const ExteriorBasis& basis() const { return *basis_; }
  const InteriorGrid& grid() const { return *grid_; }
  const std::shared_ptr<const InteriorGrid>& grid_ptr() const { return grid_; }
  double alpha0() const { return alpha0_; }
  const InteriorField& target() const { return target_; }

  /// sqrt(radial weight_i) * q_{m,k}(r_i), rows radial nodes, columns k.
  const numkit::Matrix& radial_block(int m) const;
  /// Column (m,k,l) expanded on the full grid.
  InteriorField column_field(BasisIndex idx) const;
  /// sqrt(radial weight_i) * (projection of the target onto h_{m,l})(r_i).
  numkit::Vector target_block(int m, int l) const;
  std::vector<BasisIndex> indices() const;

 private:
  std::shared_ptr<const ExteriorBasis> basis_;
  std::shared_ptr<const InteriorGrid> grid_;
  int p_;
  ControlCaps caps_;
  double alpha0_ = 0.0;
  InteriorField target_;
  std::vector<numkit::Matrix> blocks_;
};

struct ControlResult {
  int p = 0;
  ControlCaps caps;
  std::vector<BasisIndex> indices;
  std::vector<double> coefficients;
  double norm = 0.0;      // |f| = |alpha| by orthonormality
  double residual = 0.0;  // |sum alpha u - v_p|
  double budget = 0.0;
  double lambda = 0.0;
  double alpha0 = 0.0;
  double mode_mass = 0.0;           // |sum_k alpha_{p,k,0} u_{p,k,0}|
  double max_mode_coefficient = 0.0;  // max_k |alpha_{p,k,0}|
};

/// Minimal-norm control by Tikhonov bisection; throws InfeasibleError when the budget is unreachable.
ControlResult solve_control(const ControlProblem& problem, double rel_tol = 0.01);

ControlResult min_norm_control(int p, ControlCaps caps, const ProblemParams& params, const ControlOptions& options = {},
                               const numkit::WorkerPool* pool = nullptr);

}  // namespace calderon::poisson
