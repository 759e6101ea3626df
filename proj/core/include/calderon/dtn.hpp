#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "calderon/fracpoisson.hpp"
#include "calderon/numkit/linalg.hpp"
#include "calderon/numkit/parallel.hpp"
#include "calderon/numkit/params.hpp"

namespace calderon::dtn {

using poisson::BasisIndex;
using numkit::Matrix;
using numkit::Vector;

/// The standard bump exp(1 - 1/(1-|x|^2)) on |x| < 1, with sup norm 1.
double standard_bump(std::span<const double> x);

/// Potential q on B_1 in dimension n.
class Potential {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  /// `peaks` are points included when the sup norm is sampled.
  Potential(int n, Evaluator eval, std::string descriptor, std::vector<std::array<double, 3>> peaks = {});

  static Potential zero(int n);
  /// amplitude * psi((x - center)/radius).
  static Potential bump(int n, double amplitude, std::array<double, 3> center, double radius);

  int dimension() const { return n_; }
  double operator()(std::span<const double> x) const { return eval_(x); }
  double operator()(double x) const;
  double sup_norm() const { return sup_; }
  const std::string& descriptor() const { return descriptor_; }
  const std::vector<std::array<double, 3>>& peaks() const { return peaks_; }

  Potential operator+(const Potential& other) const;
  Potential scaled(double a) const;

 private:
  int n_;
  Evaluator eval_;
  std::string descriptor_;
  std::vector<std::array<double, 3>> peaks_;
  double sup_ = 0.0;
};

/// Sampled sup |f| over B_1 on a fine grid plus the given extra points.
double sampled_sup(int n, const Potential::Evaluator& f, std::span<const std::array<double, 3>> extra = {});

/// Uniform mesh of (-1,1) with `elements` cells; unknowns at the interior nodes.
struct Mesh1D {
  int elements = 256;
  double h() const { return 2.0 / elements; }
  double node(int i) const { return -1.0 + i * h(); }
  int unknowns() const { return elements - 1; }
};

/// c_{1,s} = s 4^s Gamma(1/2+s) / (sqrt(pi) Gamma(1-s)), the singular-integral constant of (-Delta)^s on R.
double frac_laplacian_constant(double s);

/// P1 Galerkin matrix of the fractional bilinear form on (-1,1) with zero exterior data.
class DiscreteFracOp {
 public:
  DiscreteFracOp(Mesh1D mesh, double s);

  const Mesh1D& mesh() const { return mesh_; }
  double s() const { return s_; }
  const Matrix& stiffness() const { return stiffness_; }
  const Matrix& mass() const { return mass_; }
  /// Smallest generalized eigenvalue of (stiffness, mass).
  double lambda_min() const { return lambda_min_; }
  /// Mass-normalized eigenvector for lambda_min.
  const Vector& ground_state() const { return ground_state_; }

 private:
  Mesh1D mesh_;
  double s_;
  Matrix stiffness_;
  Matrix mass_;
  double lambda_min_ = 0.0;
  Vector ground_state_;
};

DiscreteFracOp assemble_frac_op(int elements, double s);

/// b_i = int f phi_i by Gauss quadrature on each element.
Vector load_vector(const Mesh1D& mesh, const std::function<double(double)>& f, int gauss_points = 8);

/// M_ij = int q phi_i phi_j.
Matrix potential_mass(const Mesh1D& mesh, const Potential& q, int gauss_points = 8);

/// Relative interior error of the discrete solution of (-Delta)^s u = Gamma(1+2s) against (1-x^2)^s.
double getoor_residual(const DiscreteFracOp& op, double interior_radius = 0.9);

/// Continuous piecewise-linear function vanishing outside (-1,1).
struct FemFunction {
  Mesh1D mesh;
  Vector coeffs;  // interior nodal values
  double eval(double x) const;
  double l2_norm() const;
};

/// Factorization of stiffness + M_q for repeated solves.
class DirichletSolver {
 public:
  /// Throws SolvabilityError unless |q|_inf < lambda_min(op).
  DirichletSolver(const DiscreteFracOp& op, const Potential& q, int gauss_points = 8);

  FemFunction solve_load(const Vector& load) const;
  FemFunction solve(const std::function<double(double)>& rhs) const;
  const Matrix& potential_mass() const { return mq_; }
  const DiscreteFracOp& op() const { return *op_; }

 private:
  const DiscreteFracOp* op_;
  Matrix mq_;
  Eigen::LLT<Matrix> factor_;
  int gauss_points_;
};

FemFunction solve_dirichlet(const DiscreteFracOp& op, const Potential& q, const std::function<double(double)>& rhs);

/// Finite section of Gamma(q) in the exterior basis.
struct GammaMatrix {
  int n = 1;
  double s = 0.5;
  std::string q_descriptor;
  std::vector<BasisIndex> indices;
  Matrix entries;

  static double weight(int n, BasisIndex a, BasisIndex b);
  double x_norm() const;
  double hs_norm() const;
  double op_norm() const;
  /// max |a_ij - a_ji| / max |a_ij|.
  double symmetry_defect() const;
  double at(BasisIndex a, BasisIndex b) const;
  GammaMatrix operator-(const GammaMatrix& other) const;
};

/// Section on triangle_indices(n, cap) with entries envelope(max level) * U(-1,1).
GammaMatrix random_section(int n, int cap, const std::function<double(int)>& envelope, std::uint64_t seed);

/// sup over entries of (1 + max(m1+k1, m2+k2))^{n+2} |a|.
double x_norm(const GammaMatrix& mat);

struct GammaOptions {
  int mesh_elements = 256;
  int gauss_points = 8;
};

/// Evaluates Gamma(q) for n = 1. The exterior data enter through the discrete
/// Poisson problem: the Galerkin solution Psi_i of A Psi = b(w_i), with
/// w_i = c_{1,s} int f_i(x) |x-y|^{-1-2s} dx, represents A0 f_i, so that
/// v_i = -(A + M_q)^{-1} M_q Psi_i and a_ij = int (-Delta)^s v_i f_j over the annulus.
class GammaEvaluator {
 public:
  GammaEvaluator(std::shared_ptr<const poisson::ExteriorBasis> basis, std::vector<BasisIndex> indices,
                 const GammaOptions& options = {});

  const DiscreteFracOp& op() const { return op_; }
  const std::vector<BasisIndex>& indices() const { return indices_; }
  /// Discrete A0 f_i as a finite-element function.
  FemFunction poisson_solution(std::size_t i) const;

  GammaMatrix evaluate(const Potential& q, const numkit::WorkerPool* pool = nullptr) const;

 private:
  std::shared_ptr<const poisson::ExteriorBasis> basis_;
  std::vector<BasisIndex> indices_;
  GammaOptions options_;
  DiscreteFracOp op_;
  Matrix exterior_coupling_;  // b_i as columns
  Matrix poisson_;            // Psi_i as columns
};

/// Single entry a(idx1, idx2) of Gamma(q) with a freshly built basis and operator.
double gamma_entry(const Potential& q, BasisIndex idx1, BasisIndex idx2, const ProblemParams& params,
                   const GammaOptions& options = {});

struct DecayFit {
  double rate = 0.0;       // c in |a_ii| ~ C e^{-c (m+k)}
  double constant = 0.0;   // C from the diagonal
  double envelope = 0.0;   // max_ij |a_ij| e^{c max level} over entries above the floor
  double r_squared = 0.0;
  int points = 0;
};

/// Least-squares decay of log|a_ii| against m+k over entries above floor * max|a_ii|.
DecayFit fit_diagonal_decay(const GammaMatrix& mat, double floor = 1e-12);

/// N_p: tuples (m1,k1,l1,m2,k2,l2) with max(m1+k1, m2+k2) = p, using the exact
/// harmonic multiplicities of dimension n.
std::int64_t count_tuples(int p, int n);

/// The same count with the dimension bound 2(m+1)^{n-2} in place of the multiplicity.
double count_tuples_dimension_bound(int p, int n);

/// 8 (p+1)^{2n+1}.
double tuple_count_bound(int p, int n);

}  // namespace calderon::dtn
