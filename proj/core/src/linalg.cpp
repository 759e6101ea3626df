#include "calderon/numkit/linalg.hpp"

#include <cmath>
#include <limits>

#include "calderon/numkit/errors.hpp"

namespace calderon::numkit {

SvdResult svd(const Matrix& a) {
  if (!a.allFinite()) throw ParameterError("svd input has non-finite entries");
  if (a.size() == 0) return {Matrix(a.rows(), 0), Vector(0), Matrix(a.cols(), 0)};
  Eigen::BDCSVD<Matrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

SvdBlock make_block(const SvdResult& factors, const Vector& rhs) {
  SvdBlock block;
  block.factors = &factors;
  block.projected_rhs = factors.U.transpose() * rhs;
  block.residual_floor2 = std::max(0.0, rhs.squaredNorm() - block.projected_rhs.squaredNorm());
  return block;
}

namespace {

struct Totals {
  double residual2 = 0.0;
  double norm2 = 0.0;
};

Totals evaluate(std::span<const SvdBlock> blocks, double lambda) {
  Totals t;
  for (const auto& b : blocks) {
    t.residual2 += b.residual_floor2;
    const auto& sigma = b.factors->sigma;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      const double s2 = sigma(i) * sigma(i);
      const double beta = b.projected_rhs(i);
      const double denom = s2 + lambda;
      if (denom == 0.0) {
        t.residual2 += beta * beta;
        continue;
      }
      const double r = lambda / denom;
      t.residual2 += r * r * beta * beta;
      const double x = sigma(i) * beta / denom;
      t.norm2 += x * x;
    }
  }
  return t;
}

}  // namespace

MinNormSolution min_norm_within(std::span<const SvdBlock> blocks, double budget, double rel_tol) {
  if (!(budget > 0.0)) throw ParameterError("residual budget must be positive");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ParameterError("relative tolerance must lie in (0,1)");
  MinNormSolution out;
  double rhs2 = 0.0;
  double floor2 = 0.0;
  double smallest_sigma = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) {
    if (b.factors == nullptr) throw DependencyError("min-norm block without factors");
    rhs2 += b.projected_rhs.squaredNorm() + b.residual_floor2;
    floor2 += b.residual_floor2;
    for (Eigen::Index i = 0; i < b.factors->sigma.size(); ++i) {
      const double s = b.factors->sigma(i);
      if (s > 0.0) smallest_sigma = std::min(smallest_sigma, s);
    }
  }
  auto zero_solution = [&] {
    for (const auto& b : blocks) out.x.emplace_back(Vector::Zero(b.factors->V.rows()));
  };
  if (std::sqrt(rhs2) <= budget) {
    zero_solution();
    out.residual = std::sqrt(rhs2);
    out.lambda = std::numeric_limits<double>::infinity();
    return out;
  }
  // smallest reachable residual: lambda -> 0 removes every component with sigma > 0
  const double reach = std::sqrt(evaluate(blocks, 0.0).residual2);
  if (reach > budget || std::sqrt(floor2) > budget)
    throw InfeasibleError("residual budget unreachable at this truncation", reach, budget);

  // residual(lambda) increases monotonically; bisect in log(lambda)
  double lo = std::log(std::max(smallest_sigma * smallest_sigma * 1e-8, 1e-300));
  double hi = std::log(std::max(1.0, rhs2) * 1e8);
  for (const auto& b : blocks)
    if (b.factors->sigma.size() > 0) hi = std::max(hi, std::log(b.factors->sigma(0) * b.factors->sigma(0) * 1e8));
  const double target_lo = (1.0 - rel_tol) * budget;
  double lambda = std::exp(lo);
  Totals t = evaluate(blocks, lambda);
  if (std::sqrt(t.residual2) > budget) {
    lambda = 0.0;
    t = evaluate(blocks, lambda);
  } else if (std::sqrt(t.residual2) < target_lo) {
    for (int iter = 0; iter < 400; ++iter) {
      const double mid = 0.5 * (lo + hi);
      lambda = std::exp(mid);
      t = evaluate(blocks, lambda);
      const double r = std::sqrt(t.residual2);
      if (r > budget) {
        hi = mid;
      } else if (r < target_lo) {
        lo = mid;
      } else {
        break;
      }
    }
    if (std::sqrt(t.residual2) > budget) {
      lambda = std::exp(lo);
      t = evaluate(blocks, lambda);
    }
  }
  for (const auto& b : blocks) {
    const auto& f = *b.factors;
    Vector coef(f.sigma.size());
    for (Eigen::Index i = 0; i < f.sigma.size(); ++i) {
      const double denom = f.sigma(i) * f.sigma(i) + lambda;
      coef(i) = denom > 0.0 ? f.sigma(i) * b.projected_rhs(i) / denom : 0.0;
    }
    out.x.emplace_back(f.V * coef);
  }
  out.norm = std::sqrt(t.norm2);
  out.residual = std::sqrt(t.residual2);
  out.lambda = lambda;
  return out;
}

MinNormSolution min_norm_within(const SvdResult& factors, const Vector& rhs, double budget, double rel_tol) {
  const SvdBlock block = make_block(factors, rhs);
  return min_norm_within(std::span<const SvdBlock>(&block, 1), budget, rel_tol);
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (!a.allFinite()) throw ParameterError("operator norm of non-finite matrix");
  Eigen::BDCSVD<Matrix> solver(a);
  return solver.singularValues()(0);
}

}  // namespace calderon::numkit
