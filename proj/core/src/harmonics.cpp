#include "calderon/numkit/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "calderon/numkit/errors.hpp"
#include "calderon/numkit/quadrature.hpp"

namespace calderon::numkit {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dimension(int n) {
  if (n < 1 || n > 3) throw ParameterError("harmonics are provided for n = 1, 2, 3 only");
}

// Associated Legendre function normalized so that the integral of its square over [-1,1] is one.
double normalized_legendre(int m, int j, double x) {
  const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pjj = 1.0 / std::sqrt(2.0);
  for (int i = 1; i <= j; ++i) pjj *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * sx;
  if (m == j) return pjj;
  double prev = pjj;
  double cur = std::sqrt(2.0 * j + 3.0) * x * pjj;
  for (int d = j + 2; d <= m; ++d) {
    const double a = std::sqrt((4.0 * d * d - 1.0) / (static_cast<double>(d) * d - static_cast<double>(j) * j));
    const double b = std::sqrt((static_cast<double>(d - 1) * (d - 1) - static_cast<double>(j) * j) /
                               (4.0 * (d - 1) * (d - 1) - 1.0));
    const double next = a * (x * cur - b * prev);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

int max_order(int n, int m) {
  check_dimension(n);
  if (m < 0) return -1;
  switch (n) {
    case 1:
      return m <= 1 ? 0 : -1;
    case 2:
      return m == 0 ? 0 : 1;
    default:
      return 2 * m;
  }
}

int harmonic_multiplicity(int n, int m) { return max_order(n, m) + 1; }

double sphere_area(int n) {
  check_dimension(n);
  return n == 1 ? 2.0 : (n == 2 ? 2.0 * kPi : 4.0 * kPi);
}

double spherical_harmonic(int n, SphericalHarmonicIndex idx, std::span<const double> direction) {
  check_dimension(n);
  if (static_cast<int>(direction.size()) < n) throw ParameterError("direction has too few components");
  const int lm = max_order(n, idx.m);
  if (idx.m < 0 || lm < 0 || idx.l < 0 || idx.l > lm)
    throw IndexError("no harmonic (m=" + std::to_string(idx.m) + ", l=" + std::to_string(idx.l) +
                     ") in dimension " + std::to_string(n));
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) norm2 += direction[i] * direction[i];
  if (std::abs(norm2 - 1.0) > 1e-10) throw ParameterError("direction must have unit length");

  if (n == 1) {
    const double h0 = 1.0 / std::sqrt(2.0);
    return idx.m == 0 ? h0 : h0 * direction[0];
  }
  if (n == 2) {
    const double theta = std::atan2(direction[1], direction[0]);
    if (idx.m == 0) return 1.0 / std::sqrt(2.0 * kPi);
    const double c = 1.0 / std::sqrt(kPi);
    return idx.l == 0 ? c * std::cos(idx.m * theta) : c * std::sin(idx.m * theta);
  }
  const double z = std::clamp(direction[2], -1.0, 1.0);
  const double phi = std::atan2(direction[1], direction[0]);
  if (idx.l == 0) return normalized_legendre(idx.m, 0, z) / std::sqrt(2.0 * kPi);
  const int j = (idx.l + 1) / 2;
  const double p = normalized_legendre(idx.m, j, z) / std::sqrt(kPi);
  return (idx.l % 2 == 1) ? p * std::cos(j * phi) : p * std::sin(j * phi);
}

SphereRule sphere_rule(int n, int degree) {
  check_dimension(n);
  if (degree < 0) throw ParameterError("sphere rule degree must be nonnegative");
  SphereRule rule;
  rule.n = n;
  if (n == 1) {
    rule.directions = {{-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    rule.weights = {1.0, 1.0};
    return rule;
  }
  const int nphi = degree + 1;
  const QuadRule phi = periodic_trapezoid(nphi);
  if (n == 2) {
    for (std::size_t i = 0; i < phi.size(); ++i) {
      rule.directions.push_back({std::cos(phi.nodes[i]), std::sin(phi.nodes[i]), 0.0});
      rule.weights.push_back(phi.weights[i]);
    }
    return rule;
  }
  const int ntheta = std::max(2, degree / 2 + 1);
  const QuadRule zr = gauss_rule(Interval{-1.0, 1.0}, ntheta);
  for (std::size_t a = 0; a < zr.size(); ++a) {
    const double z = zr.nodes[a];
    const double rho = std::sqrt(1.0 - z * z);
    for (std::size_t b = 0; b < phi.size(); ++b) {
      rule.directions.push_back({rho * std::cos(phi.nodes[b]), rho * std::sin(phi.nodes[b]), z});
      rule.weights.push_back(zr.weights[a] * phi.weights[b]);
    }
  }
  return rule;
}

}  // namespace calderon::numkit
