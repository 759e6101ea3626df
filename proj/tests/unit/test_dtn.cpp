#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "calderon/dtn.hpp"
#include "calderon/numkit/errors.hpp"

using namespace calderon;
using namespace calderon::dtn;

namespace {

ProblemParams one_dim(double s) {
  ProblemParams p;
  p.n = 1;
  p.s = s;
  return p;
}

struct GammaSetup {
  std::shared_ptr<const poisson::ExteriorBasis> basis;
  std::unique_ptr<GammaEvaluator> evaluator;
};

GammaSetup make_setup(double s, int cap, int elements) {
  GammaSetup g;
  g.basis = std::make_shared<const poisson::ExteriorBasis>(poisson::ExteriorBasis::build_triangle(one_dim(s), cap));
  g.evaluator = std::make_unique<GammaEvaluator>(g.basis, poisson::triangle_indices(1, cap), GammaOptions{elements});
  return g;
}

double min_eigenvalue(const Matrix& a) {
  const Matrix sym = 0.5 * (a + a.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().minCoeff();
}

std::int64_t enumerate_tuples(int p, int n) {
  const auto all = poisson::triangle_indices(n, p);
  std::int64_t count = 0;
  for (const auto& a : all)
    for (const auto& b : all)
      if (std::max(a.level(), b.level()) == p) ++count;
  return count;
}

}  // namespace

TEST(Potential, BumpAndSupNorm) {
  const double zero[1] = {0.0};
  const double edge[1] = {1.0};
  EXPECT_DOUBLE_EQ(standard_bump(zero), 1.0);
  EXPECT_EQ(standard_bump(edge), 0.0);
  const auto q = Potential::bump(1, 0.3, {0.2, 0, 0}, 0.5);
  EXPECT_NEAR(q.sup_norm(), 0.3, 1e-12);
  EXPECT_NEAR(q(0.2), 0.3, 1e-15);
  EXPECT_EQ(q(0.75), 0.0);
  EXPECT_NEAR((q + q.scaled(-1.0)).sup_norm(), 0.0, 1e-15);
  EXPECT_EQ(Potential::zero(1).sup_norm(), 0.0);
  EXPECT_THROW(Potential::bump(1, 1.0, {0, 0, 0}, 0.0), ParameterError);
}

TEST(FracOp, ConstantAtHalf) {
  EXPECT_NEAR(frac_laplacian_constant(0.5), 1.0 / std::numbers::pi, 1e-15);
  // c_{1,s} = s 4^s Gamma(1/2+s) / (sqrt(pi) Gamma(1-s))
  const double s = 0.3;
  EXPECT_NEAR(frac_laplacian_constant(s),
              s * std::pow(4.0, s) * std::tgamma(0.5 + s) / (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - s)), 1e-14);
}

TEST(FracOp, MatricesSymmetricPositive) {
  for (double s : {0.25, 0.5, 0.75}) {
    const auto op = assemble_frac_op(64, s);
    EXPECT_LT((op.stiffness() - op.stiffness().transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(min_eigenvalue(op.stiffness()), 0.0);
    EXPECT_NEAR(op.mass().sum(), 2.0 - 4.0 * op.mesh().h() / 3.0, 1e-12);  // int (sum of hats)^2
    EXPECT_GT(op.lambda_min(), 0.0);
  }
  EXPECT_THROW(assemble_frac_op(2, 0.5), ParameterError);
  EXPECT_THROW(assemble_frac_op(64, 1.0), ParameterError);
}

TEST(FracOp, GetoorSolutionConverges) {
  for (double s : {0.25, 0.5, 0.75}) {
    const double coarse = getoor_residual(assemble_frac_op(128, s));
    const double fine = getoor_residual(assemble_frac_op(512, s));
    EXPECT_LT(fine, 5e-3) << s;
    EXPECT_LT(fine, coarse) << s;
  }
}

TEST(FracOp, FirstEigenvalueAtHalf) {
  // lambda_1 of (-Delta)^{1/2} on (-1,1) is 1.1577738...
  const auto op = assemble_frac_op(512, 0.5);
  EXPECT_NEAR(op.lambda_min(), 1.1577738, 2e-3);
  EXPECT_GT(op.lambda_min(), 1.1577738);  // Galerkin eigenvalues lie above
  const Vector& phi = op.ground_state();
  EXPECT_NEAR(phi.dot(op.mass() * phi), 1.0, 1e-10);
  EXPECT_GT(phi.minCoeff(), 0.0);
}

TEST(Dirichlet, SolvabilityGuard) {
  const auto op = assemble_frac_op(64, 0.5);
  const auto big = Potential::bump(1, 1.01 * op.lambda_min(), {0, 0, 0}, 0.5);
  EXPECT_THROW(DirichletSolver(op, big), SolvabilityError);
  const auto small = Potential::bump(1, 0.5 * op.lambda_min(), {0, 0, 0}, 0.5);
  const auto u = solve_dirichlet(op, small, [](double) { return 1.0; });
  EXPECT_GT(u.eval(0.0), 0.0);
  EXPECT_EQ(u.eval(1.5), 0.0);
}

TEST(Gamma, ZeroPotentialGivesZero) {
  auto g = make_setup(0.5, 4, 128);
  const auto mat = g.evaluator->evaluate(Potential::zero(1));
  EXPECT_EQ(mat.entries.cwiseAbs().maxCoeff(), 0.0);
}

// For q >= 0 the operator A^{-1} - (A+M_q)^{-1} is positive semidefinite,
// and it is monotone in q.
TEST(Gamma, PositiveAndMonotoneForNonnegativePotentials) {
  auto g = make_setup(0.5, 6, 128);
  const double r0 = g.evaluator->op().lambda_min() / 2.0;
  const auto q1 = Potential::bump(1, 0.25 * r0, {0.1, 0, 0}, 0.4);
  const auto q2 = q1 + Potential::bump(1, 0.25 * r0, {-0.3, 0, 0}, 0.5);
  const auto a1 = g.evaluator->evaluate(q1);
  const auto a2 = g.evaluator->evaluate(q2);
  const double scale = a2.entries.cwiseAbs().maxCoeff();
  EXPECT_GT(min_eigenvalue(a1.entries), -1e-12 * scale);
  EXPECT_GT(min_eigenvalue((a2 - a1).entries), -1e-12 * scale);
  EXPECT_LT(a1.symmetry_defect(), 1e-10);
  EXPECT_LE(a1.op_norm(), 4.0 * a1.x_norm());
}

TEST(Gamma, EntryMatchesEvaluator) {
  const auto q = Potential::bump(1, 0.2, {0.0, 0, 0}, 0.6);
  auto g = make_setup(0.5, 3, 128);
  const auto mat = g.evaluator->evaluate(q);
  const poisson::BasisIndex a{0, 1, 0}, b{1, 0, 0};
  EXPECT_NEAR(gamma_entry(q, a, b, one_dim(0.5), {128}), mat.at(a, b), 1e-14 + 1e-10 * std::abs(mat.at(a, b)));
  EXPECT_THROW(mat.at({0, 9, 0}, a), IndexError);
}

TEST(Gamma, DiagonalDecayStableUnderRefinement) {
  const auto coarse = make_setup(0.5, 8, 128);
  const auto fine = make_setup(0.5, 8, 256);
  const double r0 = coarse.evaluator->op().lambda_min() / 2.0;
  const auto q = Potential::bump(1, 0.5 * r0, {0.2, 0, 0}, 0.5);
  const auto fa = fit_diagonal_decay(coarse.evaluator->evaluate(q));
  const auto fb = fit_diagonal_decay(fine.evaluator->evaluate(q));
  EXPECT_GT(fb.rate, 0.0);
  EXPECT_LT(std::abs(fa.rate - fb.rate) / fb.rate, 0.1);
}

TEST(Gamma, MismatchedSections) {
  GammaMatrix a;
  a.indices = poisson::triangle_indices(1, 2);
  a.entries = Matrix::Zero(5, 5);
  GammaMatrix b = a;
  b.indices = poisson::triangle_indices(1, 1);
  b.entries = Matrix::Zero(3, 3);
  EXPECT_THROW(a - b, ParameterError);
}

TEST(DecayFit, RecoversSyntheticRate) {
  GammaMatrix mat;
  mat.indices = poisson::triangle_indices(1, 6);
  const auto size = static_cast<Eigen::Index>(mat.indices.size());
  mat.entries = Matrix::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) mat.entries(i, i) = 3.0 * std::exp(-2.0 * mat.indices[i].level());
  const auto fit = fit_diagonal_decay(mat);
  EXPECT_NEAR(fit.rate, 2.0, 1e-12);
  EXPECT_NEAR(fit.constant, 3.0, 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  GammaMatrix flat;
  flat.indices = {{0, 0, 0}};
  flat.entries = Matrix::Ones(1, 1);
  EXPECT_THROW(fit_diagonal_decay(flat), NumericError);
}

TEST(Counting, MatchesEnumeration) {
  for (int n : {1, 2, 3})
    for (int p = 0; p <= 6; ++p) EXPECT_EQ(count_tuples(p, n), enumerate_tuples(p, n)) << n << ' ' << p;
  EXPECT_EQ(count_tuples(0, 1), 1);
  EXPECT_EQ(count_tuples(1, 1), 8);
  EXPECT_EQ(count_tuples(4, 1), 32);
}

TEST(Counting, BoundAndWeightedSum) {
  for (int n : {1, 2, 3}) {
    double sum = 0.0;
    for (int p = 0; p <= 20; ++p) {
      EXPECT_LE(static_cast<double>(count_tuples(p, n)), tuple_count_bound(p, n));
      EXPECT_LE(static_cast<double>(count_tuples(p, n)), count_tuples_dimension_bound(p, n) + 1e-9);
      sum += std::pow(1.0 + p, -2.0 * (n + 2)) * static_cast<double>(count_tuples(p, n));
    }
    EXPECT_LE(sum, 16.0);
  }
}

// |T|_op <= 4 |T|_X on sections with arbitrary envelopes.
TEST(NormChain, RandomSections) {
  for (int n : {1, 2, 3}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto t = random_section(n, 6, [](int level) { return std::exp(-0.3 * level); }, seed);
      EXPECT_LE(t.op_norm(), 4.0 * t.x_norm());
      EXPECT_LE(t.op_norm(), t.hs_norm() * (1 + 1e-14));
      EXPECT_NEAR(x_norm(t), t.x_norm(), 0.0);
    }
  }
  const auto a = random_section(2, 4, [](int) { return 1.0; }, 5);
  const auto b = random_section(2, 4, [](int) { return 1.0; }, 5);
  EXPECT_EQ((a - b).entries.cwiseAbs().maxCoeff(), 0.0);
  const auto poly = random_section(1, 8, [](int level) { return std::pow(1.0 + level, -3); }, 3);
  EXPECT_LE(poly.x_norm(), 1.0);
}
