#pragma once

#include <cstddef>
#include <vector>

namespace calderon::numkit {

struct Interval {
  double a = 0.0;
  double b = 1.0;
  double length() const { return b - a; }
};

/// Nodes and positive weights on an interval.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  Interval interval;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Gauss-Legendre rule, exact for polynomials of degree <= 2*count-1.
QuadRule gauss_rule(Interval interval, int count);

/// Gauss-Jacobi rule for the weight (b-x)^alpha (x-a)^beta, alpha, beta > -1.
/// The weight is carried by the returned weights.
QuadRule gauss_jacobi_rule(Interval interval, int count, double alpha, double beta);

/// Equispaced periodic trapezoid rule on [0, 2*pi).
QuadRule periodic_trapezoid(int count);

}  // namespace calderon::numkit
