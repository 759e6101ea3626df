#pragma once

#include <array>
#include <compare>
#include <span>
#include <vector>

namespace calderon::numkit {

/// Real spherical harmonic h_{m,l} of degree m on the unit sphere of R^n.
struct SphericalHarmonicIndex {
  int m = 0;
  int l = 0;
  auto operator<=>(const SphericalHarmonicIndex&) const = default;
};

/// Largest order l_m, or -1 when degree m carries no harmonic (n=1, m>=2).
int max_order(int n, int m);

/// Number of harmonics of degree m (l_m + 1, or 0).
int harmonic_multiplicity(int n, int m);

/// Orthonormal real harmonic evaluated at a unit direction (length n).
/// n=1: h_0 = 1/sqrt2, h_1 = w/sqrt2. n=2: Fourier modes, l=0 cosine, l=1 sine.
/// n=3: l=0 zonal, l=2j-1 cos(j phi), l=2j sin(j phi).
double spherical_harmonic(int n, SphericalHarmonicIndex idx, std::span<const double> direction);

/// Surface measure of the unit sphere in R^n (2, 2pi, 4pi).
double sphere_area(int n);

/// Tensor quadrature on the unit sphere, exact for harmonics products of total degree <= degree.
struct SphereRule {
  int n = 1;
  std::vector<std::array<double, 3>> directions;
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
  std::span<const double> direction(std::size_t i) const {
    return {directions[i].data(), static_cast<std::size_t>(n)};
  }
};

SphereRule sphere_rule(int n, int degree);

}  // namespace calderon::numkit
