#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "calderon/dtn.hpp"
#include "calderon/numkit/errors.hpp"
#include "calderon/numkit/fit.hpp"
#include "calderon/numkit/quadrature.hpp"

namespace calderon::dtn {

double GammaMatrix::weight(int n, BasisIndex a, BasisIndex b) {
  return std::pow(1.0 + std::max(a.level(), b.level()), n + 2);
}

double GammaMatrix::x_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (std::size_t j = 0; j < indices.size(); ++j)
      best = std::max(best, weight(n, indices[i], indices[j]) * std::abs(entries(i, j)));
  return best;
}

double GammaMatrix::hs_norm() const { return entries.norm(); }

double GammaMatrix::op_norm() const { return entries.size() == 0 ? 0.0 : numkit::operator_norm(entries); }

double GammaMatrix::symmetry_defect() const {
  const double scale = entries.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (entries - entries.transpose()).cwiseAbs().maxCoeff() / scale;
}

double GammaMatrix::at(BasisIndex a, BasisIndex b) const {
  auto find = [this](BasisIndex idx) {
    auto it = std::find(indices.begin(), indices.end(), idx);
    if (it == indices.end()) throw IndexError("index " + idx.str() + " is not part of the section");
    return static_cast<Eigen::Index>(it - indices.begin());
  };
  return entries(find(a), find(b));
}

GammaMatrix GammaMatrix::operator-(const GammaMatrix& other) const {
  if (other.n != n || other.indices != indices) throw ParameterError("sections over different index sets");
  GammaMatrix out = *this;
  out.q_descriptor = q_descriptor + " - " + other.q_descriptor;
  out.entries -= other.entries;
  return out;
}

double x_norm(const GammaMatrix& mat) { return mat.x_norm(); }

GammaMatrix random_section(int n, int cap, const std::function<double(int)>& envelope, std::uint64_t seed) {
  GammaMatrix mat;
  mat.n = n;
  mat.q_descriptor = "random(seed=" + std::to_string(seed) + ")";
  mat.indices = poisson::triangle_indices(n, cap);
  const auto size = static_cast<Eigen::Index>(mat.indices.size());
  mat.entries.resize(size, size);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = 0; j < size; ++j)
      mat.entries(i, j) = envelope(std::max(mat.indices[i].level(), mat.indices[j].level())) * unit(rng);
  return mat;
}

namespace {

struct AnnulusSamples {
  std::vector<double> points;
  std::vector<double> weights;
};

// both components of 2 <= |y| <= 3 on the line
AnnulusSamples line_annulus(int nodes) {
  const auto rule = numkit::gauss_rule({2.0, 3.0}, nodes);
  AnnulusSamples out;
  for (double sign : {-1.0, 1.0}) {
    for (std::size_t i = 0; i < rule.size(); ++i) {
      out.points.push_back(sign * rule.nodes[i]);
      out.weights.push_back(rule.weights[i]);
    }
  }
  return out;
}

// K(a, j) = c_{1,s} int phi_j(x) |x - y_a|^{-1-2s} dx
Matrix kernel_coupling(const Mesh1D& mesh, double s, std::span<const double> ys, int gauss_points) {
  const auto ref = numkit::gauss_rule({0.0, 1.0}, gauss_points);
  const double c = frac_laplacian_constant(s);
  const double h = mesh.h();
  const int N = mesh.unknowns();
  Matrix k = Matrix::Zero(static_cast<Eigen::Index>(ys.size()), N);
  for (std::size_t a = 0; a < ys.size(); ++a) {
    for (int e = 0; e < mesh.elements; ++e) {
      const double x0 = mesh.node(e);
      for (std::size_t g = 0; g < ref.size(); ++g) {
        const double t = ref.nodes[g];
        const double w = c * ref.weights[g] * h * std::pow(std::abs(x0 + t * h - ys[a]), -1.0 - 2.0 * s);
        if (e >= 1) k(a, e - 1) += w * (1.0 - t);
        if (e + 1 <= N) k(a, e) += w * t;
      }
    }
  }
  return k;
}

}  // namespace

GammaEvaluator::GammaEvaluator(std::shared_ptr<const poisson::ExteriorBasis> basis, std::vector<BasisIndex> indices,
                               const GammaOptions& options)
    : basis_(std::move(basis)),
      indices_(std::move(indices)),
      options_(options),
      op_(Mesh1D{options.mesh_elements}, basis_ ? basis_->params().s : 0.5) {
  if (!basis_) throw ParameterError("missing exterior basis");
  if (basis_->params().n != 1) throw ParameterError("the Gamma evaluator is one-dimensional");
  if (indices_.empty()) throw ParameterError("empty index set");
  for (const auto& idx : indices_)
    if (!basis_->contains(idx)) throw DependencyError("basis function " + idx.str() + " was not built");

  const auto annulus = line_annulus(basis_->params().quad_nodes);
  const Matrix k = kernel_coupling(op_.mesh(), op_.s(), annulus.points, options_.gauss_points);
  Matrix samples(static_cast<Eigen::Index>(annulus.points.size()), static_cast<Eigen::Index>(indices_.size()));
  for (std::size_t a = 0; a < annulus.points.size(); ++a)
    for (std::size_t i = 0; i < indices_.size(); ++i)
      samples(a, i) = annulus.weights[a] * basis_->value(indices_[i], std::span<const double>(&annulus.points[a], 1));
  exterior_coupling_ = k.transpose() * samples;
  poisson_ = op_.stiffness().llt().solve(exterior_coupling_);
}

FemFunction GammaEvaluator::poisson_solution(std::size_t i) const {
  if (i >= indices_.size()) throw IndexError("poisson solution index out of range");
  return {op_.mesh(), poisson_.col(static_cast<Eigen::Index>(i))};
}

GammaMatrix GammaEvaluator::evaluate(const Potential& q, const numkit::WorkerPool* pool) const {
  const DirichletSolver solver(op_, q, options_.gauss_points);
  const Matrix mq_psi = solver.potential_mass() * poisson_;
  const auto count = static_cast<Eigen::Index>(indices_.size());
  Matrix v(op_.mesh().unknowns(), count);
  numkit::parallel_for(pool, indices_.size(), [&](std::size_t i) {
    const auto col = static_cast<Eigen::Index>(i);
    v.col(col) = -solver.solve_load(mq_psi.col(col)).coeffs;
  });
  GammaMatrix out;
  out.n = 1;
  out.s = op_.s();
  out.q_descriptor = q.descriptor();
  out.indices = indices_;
  out.entries = -(v.transpose() * exterior_coupling_);
  return out;
}

double gamma_entry(const Potential& q, BasisIndex idx1, BasisIndex idx2, const ProblemParams& params,
                   const GammaOptions& options) {
  params.validate();
  const int cap = std::max(idx1.level(), idx2.level());
  auto basis = std::make_shared<const poisson::ExteriorBasis>(poisson::ExteriorBasis::build_triangle(params, cap));
  std::vector<BasisIndex> indices{idx1};
  if (idx2 != idx1) indices.push_back(idx2);
  const GammaEvaluator evaluator(basis, indices, options);
  const auto mat = evaluator.evaluate(q);
  return mat.entries(0, idx2 == idx1 ? 0 : 1);
}

DecayFit fit_diagonal_decay(const GammaMatrix& mat, double floor) {
  const auto diag = mat.entries.diagonal().cwiseAbs();
  if (diag.size() == 0) throw NumericError("empty Gamma section");
  const double top = diag.maxCoeff();
  std::vector<double> level, logs;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag(i) > floor * top && diag(i) > 0.0) {
      level.push_back(mat.indices[static_cast<std::size_t>(i)].level());
      logs.push_back(std::log(diag(i)));
    }
  }
  if (level.size() < 2 || *std::max_element(level.begin(), level.end()) == *std::min_element(level.begin(), level.end()))
    throw NumericError("too few resolved diagonal entries for a decay fit");
  const auto line = numkit::fit_line(level, logs);
  DecayFit fit;
  fit.rate = -line.slope;
  fit.constant = std::exp(line.intercept);
  fit.r_squared = line.r_squared;
  fit.points = static_cast<int>(level.size());
  for (std::size_t i = 0; i < mat.indices.size(); ++i)
    for (std::size_t j = 0; j < mat.indices.size(); ++j) {
      if (std::abs(mat.entries(i, j)) <= floor * top) continue;
      const int lv = std::max(mat.indices[i].level(), mat.indices[j].level());
      fit.envelope = std::max(fit.envelope, std::abs(mat.entries(i, j)) * std::exp(fit.rate * lv));
    }
  return fit;
}

}  // namespace calderon::dtn
