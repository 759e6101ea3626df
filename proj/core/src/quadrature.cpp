#include "calderon/numkit/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "calderon/numkit/errors.hpp"
#include "calderon/numkit/extended.hpp"

namespace calderon::numkit {

namespace {

void check_interval(Interval iv, int count, int min_count) {
  if (!std::isfinite(iv.a) || !std::isfinite(iv.b) || !(iv.b > iv.a))
    throw ParameterError("quadrature interval must be finite and nondegenerate");
  if (count < min_count)
    throw ParameterError("quadrature rule needs at least " + std::to_string(min_count) + " nodes");
}

// Jacobi polynomial P_N^{(alpha,beta)} and its derivative on [-1,1].
void jacobi_eval(int N, double alpha, double beta, double x, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = 0.5 * (alpha - beta + (alpha + beta + 2.0) * x);
  if (N == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= N; ++k) {
    const double ab = alpha + beta;
    const double c = 2.0 * k + ab;
    const double a1 = 2.0 * k * (k + ab) * (c - 2.0);
    const double a2 = (c - 1.0) * (alpha * alpha - beta * beta);
    const double a3 = (c - 2.0) * (c - 1.0) * c;
    const double a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
    const double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  // derivative via (1-x^2) P' = N[(alpha-beta) - (2N+alpha+beta)x]P/(2N+alpha+beta) + 2(N+alpha)(N+beta)P_{N-1}/(2N+alpha+beta)
  const double c = 2.0 * N + alpha + beta;
  dp = (N * (alpha - beta - c * x) * p1 + 2.0 * (N + alpha) * (N + beta) * p0) / (c * (1.0 - x * x));
}

}  // namespace

QuadRule gauss_rule(Interval interval, int count) {
  check_interval(interval, count, 2);
  std::vector<double> x, w;
  gauss_legendre<double>(count, x, w);
  QuadRule rule{{}, {}, interval};
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const double mid = 0.5 * (interval.a + interval.b);
  const double half = 0.5 * interval.length();
  for (int i = 0; i < count; ++i) {
    rule.nodes[i] = mid + half * x[i];
    rule.weights[i] = half * w[i];
  }
  return rule;
}

QuadRule gauss_jacobi_rule(Interval interval, int count, double alpha, double beta) {
  check_interval(interval, count, 1);
  if (!(alpha > -1.0) || !(beta > -1.0)) throw ParameterError("Jacobi exponents must exceed -1");
  const int N = count;
  // Golub-Welsch on the monic Jacobi recurrence, then Newton polish on P_N
  Eigen::VectorXd diag(N), sub(std::max(N - 1, 1));
  const double ab = alpha + beta;
  for (int k = 0; k < N; ++k) {
    const double c = 2.0 * k + ab;
    if (k == 0) {
      diag(k) = (beta - alpha) / (ab + 2.0);
    } else {
      diag(k) = (beta * beta - alpha * alpha) / (c * (c + 2.0));
    }
    if (k + 1 < N) {
      const double j = k + 1.0;
      const double cj = 2.0 * j + ab;
      const double num = 4.0 * j * (j + alpha) * (j + beta) * (j + ab);
      const double den = cj * cj * (cj + 1.0) * (cj - 1.0);
      sub(k) = std::sqrt(num / den);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub.head(std::max(N - 1, 0)), Eigen::EigenvaluesOnly);
  Eigen::VectorXd xs = eig.eigenvalues();

  const double log_const = std::lgamma(N + alpha + 1.0) + std::lgamma(N + beta + 1.0) -
                           std::lgamma(N + ab + 1.0) - std::lgamma(N + 1.0) +
                           (ab + 1.0) * std::log(2.0);
  QuadRule rule{{}, {}, interval};
  rule.nodes.resize(N);
  rule.weights.resize(N);
  const double mid = 0.5 * (interval.a + interval.b);
  const double half = 0.5 * interval.length();
  const double scale = std::pow(half, ab + 1.0);
  for (int i = 0; i < N; ++i) {
    double x = xs(i);
    double p = 0.0, dp = 1.0;
    for (int iter = 0; iter < 4; ++iter) {
      jacobi_eval(N, alpha, beta, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    jacobi_eval(N, alpha, beta, x, p, dp);
    const double w = std::exp(log_const) / ((1.0 - x * x) * dp * dp);
    // weight (1-x)^alpha (1+x)^beta maps to (b-t)^alpha (t-a)^beta
    rule.nodes[i] = mid + half * x;
    rule.weights[i] = scale * w;
  }
  return rule;
}

QuadRule periodic_trapezoid(int count) {
  if (count < 1) throw ParameterError("trapezoid rule needs at least one node");
  QuadRule rule{{}, {}, Interval{0.0, 2.0 * std::numbers::pi}};
  rule.nodes.resize(count);
  rule.weights.assign(count, 2.0 * std::numbers::pi / count);
  for (int i = 0; i < count; ++i) rule.nodes[i] = 2.0 * std::numbers::pi * i / count;
  return rule;
}

}  // namespace calderon::numkit
