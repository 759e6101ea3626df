#include <cmath>
#include <string>

#include "calderon/fracpoisson.hpp"
#include "calderon/numkit/errors.hpp"

namespace calderon::poisson {

ControlProblem::ControlProblem(std::shared_ptr<const ExteriorBasis> basis, std::shared_ptr<const InteriorGrid> grid,
                               int p, ControlCaps caps)
    : basis_(std::move(basis)), grid_(std::move(grid)), p_(p), caps_(caps) {
  if (!basis_ || !grid_) throw ParameterError("control problem needs a basis and a grid");
  if (caps.M < p + 2 || caps.K < p + 2)
    throw ParameterError("truncation caps (M,K) must be at least (p+2, p+2) = (" + std::to_string(p + 2) + ", " +
                         std::to_string(p + 2) + ")");
  if (grid_->max_degree() < caps.M) throw ParameterError("interior grid does not resolve harmonics up to degree M");
  for (int m = 0; m <= caps.M; ++m)
    if (!basis_->contains({m, caps.K, 0})) throw DependencyError("exterior basis does not cover the caps");
  VpResult vp = make_vp(p, *basis_, grid_);
  alpha0_ = vp.alpha0;
  target_ = std::move(vp.vp);
  const std::size_t nr = grid_->radial_size();
  blocks_.reserve(caps.M + 1);
  for (int m = 0; m <= caps.M; ++m) {
    numkit::Matrix block(nr, caps.K + 1);
    for (std::size_t i = 0; i < nr; ++i) {
      const double sw = std::sqrt(grid_->radial_weight(i));
      for (int k = 0; k <= caps.K; ++k) block(i, k) = sw * interior_radial_factor(*basis_, m, k, grid_->radius(i));
    }
    blocks_.push_back(std::move(block));
  }
}

const numkit::Matrix& ControlProblem::radial_block(int m) const {
  if (m < 0 || m > caps_.M) throw IndexError("no radial block for degree " + std::to_string(m));
  return blocks_[m];
}

InteriorField ControlProblem::column_field(BasisIndex idx) const {
  if (idx.k < 0 || idx.k > caps_.K) throw IndexError("radial index outside the caps");
  const numkit::Matrix& block = radial_block(idx.m);
  InteriorField field(grid_);
  auto values = field.values();
  const auto& sphere = grid_->sphere();
  for (std::size_t j = 0; j < sphere.size(); ++j) {
    const double h = numkit::spherical_harmonic(grid_->n(), {idx.m, idx.l}, sphere.direction(j));
    for (std::size_t i = 0; i < grid_->radial_size(); ++i)
      values[grid_->index(i, j)] = block(i, idx.k) / std::sqrt(grid_->radial_weight(i)) * h;
  }
  return field;
}

numkit::Vector ControlProblem::target_block(int m, int l) const {
  const auto& sphere = grid_->sphere();
  std::vector<double> h(sphere.size());
  for (std::size_t j = 0; j < sphere.size(); ++j)
    h[j] = numkit::spherical_harmonic(grid_->n(), {m, l}, sphere.direction(j));
  numkit::Vector b(grid_->radial_size());
  for (std::size_t i = 0; i < grid_->radial_size(); ++i) {
    double proj = 0.0;
    for (std::size_t j = 0; j < sphere.size(); ++j) proj += sphere.weights[j] * h[j] * target_[grid_->index(i, j)];
    b(i) = std::sqrt(grid_->radial_weight(i)) * proj;
  }
  return b;
}

std::vector<BasisIndex> ControlProblem::indices() const {
  return rectangle_indices(grid_->n(), caps_.M, caps_.K);
}

ControlResult solve_control(const ControlProblem& problem, double rel_tol) {
  const int n = problem.grid().n();
  const ControlCaps caps = problem.caps();
  std::vector<numkit::SvdResult> factors;
  factors.reserve(caps.M + 1);
  for (int m = 0; m <= caps.M; ++m) factors.push_back(numkit::svd(problem.radial_block(m)));

  struct BlockKey {
    int m;
    int l;
  };
  std::vector<BlockKey> keys;
  std::vector<numkit::SvdBlock> blocks;
  double represented2 = 0.0;
  for (int m = 0; m <= caps.M; ++m) {
    for (int l = 0; l < numkit::harmonic_multiplicity(n, m); ++l) {
      const numkit::Vector b = problem.target_block(m, l);
      represented2 += b.squaredNorm();
      keys.push_back({m, l});
      blocks.push_back(numkit::make_block(factors[m], b));
    }
  }
  // target energy outside the represented harmonics cannot be reached by any control
  const double total2 = problem.target().norm() * problem.target().norm();
  blocks.front().residual_floor2 += std::max(0.0, total2 - represented2);

  const numkit::MinNormSolution sol = numkit::min_norm_within(blocks, problem.budget(), rel_tol);

  ControlResult out;
  out.p = problem.p();
  out.caps = caps;
  out.norm = sol.norm;
  out.residual = sol.residual;
  out.budget = problem.budget();
  out.lambda = sol.lambda;
  out.alpha0 = problem.alpha0();
  for (std::size_t b = 0; b < keys.size(); ++b) {
    for (int k = 0; k <= caps.K; ++k) {
      out.indices.push_back({keys[b].m, k, keys[b].l});
      out.coefficients.push_back(sol.x[b](k));
    }
    if (keys[b].m == problem.p() && keys[b].l == 0) {
      out.mode_mass = (problem.radial_block(problem.p()) * sol.x[b]).norm();
      out.max_mode_coefficient = sol.x[b].cwiseAbs().maxCoeff();
    }
  }
  return out;
}

ControlResult min_norm_control(int p, ControlCaps caps, const ProblemParams& params, const ControlOptions& options,
                               const numkit::WorkerPool* pool) {
  params.validate();
  if (params.n == 1)
    throw ParameterError("min_norm_control needs n = 2 or 3; the one-dimensional analogue is the "
                         "Hilbert-transform control experiment");
  if (p < 2) throw ParameterError("p must be at least 2");
  if (caps.M < p + 2 || caps.K < p + 2) throw ParameterError("truncation caps must be at least (p+2, p+2)");
  auto basis = std::make_shared<const ExteriorBasis>(ExteriorBasis::build_rectangle(params, caps.M, caps.K, pool));
  auto grid = make_interior_grid(params.n, params.s, options.radial_nodes, caps.M);
  const ControlProblem problem(basis, grid, p, caps);
  return solve_control(problem, options.rel_tol);
}

}  // namespace calderon::poisson
