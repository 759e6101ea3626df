#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "calderon/numkit/bessel.hpp"
#include "calderon/numkit/errors.hpp"
#include "calderon/numkit/extended.hpp"
#include "calderon/numkit/fit.hpp"
#include "calderon/numkit/harmonics.hpp"
#include "calderon/numkit/linalg.hpp"
#include "calderon/numkit/parallel.hpp"
#include "calderon/numkit/params.hpp"
#include "calderon/numkit/quadrature.hpp"
#include "calderon/radialbasis.hpp"

using namespace calderon;
using namespace calderon::numkit;

TEST(Quadrature, GaussIsExactForPolynomials) {
  const auto rule = gauss_rule({2.0, 3.0}, 8);
  for (int d = 0; d <= 15; ++d) {
    const double exact = (std::pow(3.0, d + 1) - std::pow(2.0, d + 1)) / (d + 1);
    EXPECT_NEAR(rule.integrate([d](double x) { return std::pow(x, d); }), exact, 1e-12 * exact) << d;
  }
}

TEST(Quadrature, WeightIntegralMatchesClosedForm) {
  // int_2^3 r^{-2} (r^2-1)^{-1} dr = log(3/2)/2 - 1/6
  const radial::WeightedSpaceSpec spec{1, 0.5};
  const auto rule = gauss_rule({2.0, 3.0}, 64);
  const double value = rule.integrate([&](double r) { return spec.weight(r); });
  EXPECT_NEAR(value, 0.5 * std::log(1.5) - 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(value, 0.0360659, 1e-7);
}

TEST(Quadrature, GaussJacobiCarriesTheWeight) {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto rule = gauss_jacobi_rule({0.0, 1.0}, 20, alpha, 0.0);
    EXPECT_NEAR(rule.integrate([](double) { return 1.0; }), 1.0 / (alpha + 1.0), 1e-13);
    EXPECT_NEAR(rule.integrate([](double x) { return x; }), 1.0 / ((alpha + 1.0) * (alpha + 2.0)), 1e-13);
  }
}

TEST(Quadrature, PeriodicTrapezoid) {
  const auto rule = periodic_trapezoid(16);
  EXPECT_NEAR(rule.integrate([](double t) { return std::cos(3 * t) * std::cos(3 * t); }), std::numbers::pi, 1e-13);
  EXPECT_NEAR(rule.integrate([](double t) { return std::sin(5 * t); }), 0.0, 1e-13);
}

TEST(Quadrature, RejectsEmptyRule) { EXPECT_THROW(gauss_rule({0.0, 1.0}, 0), ParameterError); }

TEST(Bessel, HalfOrderClosedForm) {
  // I_{1/2}(z) = sqrt(2/(pi z)) sinh z
  EXPECT_NEAR(bessel_i(0.5, 1.0), std::sqrt(2.0 / std::numbers::pi) * std::sinh(1.0), 1e-15);
  EXPECT_NEAR(bessel_i(0.5, 1.0), 0.937674888245, 1e-12);
  for (double z : {40.0, 200.0, 1000.0, 5000.0}) {
    const double scaled = std::sqrt(2.0 / (std::numbers::pi * z)) * 0.5 * (1.0 - std::exp(-2.0 * z));
    EXPECT_NEAR(bessel_i_scaled(0.5, z), scaled, 1e-14 * scaled) << z;
  }
}

TEST(Bessel, AgreesWithStandardLibrary) {
  for (double nu : {0.0, 0.25, 0.5, 0.75, 1.25, 1.75, 5.5}) {
    for (double z : {1e-3, 0.1, 1.0, 7.5, 29.9, 30.1, 45.0, 120.0}) {
      const double ref = std::cyl_bessel_i(nu, z);
      EXPECT_NEAR(bessel_i(nu, z), ref, 1e-12 * ref) << nu << ' ' << z;
    }
  }
}

// Reference values from 40-digit arithmetic on either side of the series/asymptotic switch.
TEST(Bessel, AccurateAcrossSwitch) {
  const double below = kBesselSeriesLimit * (1 - 1e-12);
  const double above = kBesselSeriesLimit * (1 + 1e-12);
  EXPECT_NEAR(bessel_i_scaled(0.25, below), 0.073068475919289038, 4e-16);
  EXPECT_NEAR(bessel_i_scaled(0.25, above), 0.073068475919215495, 4e-16);
  EXPECT_NEAR(bessel_i_scaled(1.75, below), 0.069445891275400618, 4e-16);
  EXPECT_NEAR(bessel_i_scaled(1.75, above), 0.069445891275337904, 4e-16);
}

TEST(Bessel, ZeroArgumentAndErrors) {
  EXPECT_EQ(bessel_i(0.0, 0.0), 1.0);
  EXPECT_EQ(bessel_i(0.5, 0.0), 0.0);
  EXPECT_THROW(bessel_i(0.5, -1.0), ParameterError);
  EXPECT_THROW(bessel_i(0.5, 1000.0), RangeError);
  EXPECT_NO_THROW(bessel_i_scaled(0.5, 1000.0));
}

TEST(Harmonics, Multiplicities) {
  EXPECT_EQ(harmonic_multiplicity(1, 0), 1);
  EXPECT_EQ(harmonic_multiplicity(1, 1), 1);
  EXPECT_EQ(harmonic_multiplicity(1, 2), 0);
  EXPECT_EQ(max_order(1, 2), -1);
  EXPECT_EQ(harmonic_multiplicity(2, 0), 1);
  for (int m = 1; m < 6; ++m) EXPECT_EQ(harmonic_multiplicity(2, m), 2);
  for (int m = 0; m < 6; ++m) EXPECT_EQ(harmonic_multiplicity(3, m), 2 * m + 1);
  EXPECT_NEAR(sphere_area(1), 2.0, 0.0);
  EXPECT_NEAR(sphere_area(2), 2 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(sphere_area(3), 4 * std::numbers::pi, 1e-14);
}

TEST(Harmonics, OrthonormalOnSphere) {
  for (int n : {1, 2, 3}) {
    const int degree = 5;
    const auto rule = sphere_rule(n, 2 * degree);
    std::vector<SphericalHarmonicIndex> all;
    for (int m = 0; m <= degree; ++m)
      for (int l = 0; l < harmonic_multiplicity(n, m); ++l) all.push_back({m, l});
    for (const auto& a : all) {
      for (const auto& b : all) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i)
          sum += rule.weights[i] * spherical_harmonic(n, a, rule.direction(i)) * spherical_harmonic(n, b, rule.direction(i));
        EXPECT_NEAR(sum, a == b ? 1.0 : 0.0, 1e-12) << n << " (" << a.m << a.l << ")(" << b.m << b.l << ")";
      }
    }
  }
}

TEST(Harmonics, TwoDimensionalModes) {
  const double w[2] = {std::cos(0.3), std::sin(0.3)};
  EXPECT_NEAR(spherical_harmonic(2, {3, 0}, w), std::cos(0.9) / std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(spherical_harmonic(2, {3, 1}, w), std::sin(0.9) / std::sqrt(std::numbers::pi), 1e-15);
}

TEST(Linalg, SvdReconstructs) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Matrix a(9, 5);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) a(i, j) = normal(rng);
  const auto f = svd(a);
  const Matrix back = f.U * f.sigma.asDiagonal() * f.V.transpose();
  EXPECT_LT((back - a).cwiseAbs().maxCoeff(), 1e-12);
  for (int i = 1; i < f.sigma.size(); ++i) EXPECT_GE(f.sigma(i - 1), f.sigma(i));
  EXPECT_NEAR(operator_norm(a), f.sigma(0), 1e-14);
  EXPECT_LT((f.U.transpose() * f.U - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Linalg, SvdRejectsNonFinite) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(svd(a), ParameterError);
}

TEST(Linalg, MinNormOnIdentity) {
  // |x - b| <= 1 with |b| = 5: the minimal x is b (1 - 1/5), of norm 4.
  const auto f = svd(Matrix::Identity(2, 2));
  Vector b(2);
  b << 3.0, 4.0;
  const auto sol = min_norm_within(f, b, 1.0, 0.01);
  EXPECT_LE(sol.residual, 1.0);
  EXPECT_GE(sol.residual, 0.99);
  EXPECT_NEAR(sol.norm, 5.0 - sol.residual, 1e-9);
}

TEST(Linalg, MinNormZeroWhenBudgetIsLoose) {
  const auto f = svd(Matrix::Identity(2, 2));
  Vector b(2);
  b << 0.3, 0.4;
  const auto sol = min_norm_within(f, b, 1.0);
  EXPECT_EQ(sol.norm, 0.0);
}

TEST(Linalg, MinNormInfeasible) {
  Matrix a(2, 1);
  a << 1.0, 0.0;
  const auto f = svd(a);
  Vector b(2);
  b << 0.0, 1.0;
  try {
    min_norm_within(f, b, 0.5);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NEAR(e.achieved_residual(), 1.0, 1e-12);
    EXPECT_EQ(e.budget(), 0.5);
  }
}

TEST(Fit, ExactLineAndQuadratic) {
  const std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<double> y;
  std::vector<double> q;
  for (double v : x) {
    y.push_back(2.0 - 0.5 * v);
    q.push_back(1.0 + 2.0 * v + 3.0 * v * v);
  }
  const auto line = fit_line(x, y);
  EXPECT_NEAR(line.slope, -0.5, 1e-14);
  EXPECT_NEAR(line.intercept, 2.0, 1e-14);
  EXPECT_NEAR(line.r_squared, 1.0, 1e-14);
  const auto quad = fit_quadratic(x, q);
  EXPECT_NEAR(quad.c0, 1.0, 1e-11);
  EXPECT_NEAR(quad.c1, 2.0, 1e-11);
  EXPECT_NEAR(quad.c2, 3.0, 1e-11);
}

TEST(Extended, PrecisionBuckets) {
  EXPECT_EQ(precision_bucket(53), 53);
  EXPECT_EQ(precision_bucket(100), 128);
  EXPECT_EQ(precision_bucket(128), 128);
  EXPECT_EQ(precision_bucket(129), 192);
  EXPECT_EQ(precision_bucket(256), 256);
  EXPECT_THROW(precision_bucket(300), ParameterError);
}

TEST(Extended, DecimalRoundTrip) {
  const Wide third = Wide(1) / Wide(3);
  const Wide back = wide_from_string(to_decimal_string(third));
  EXPECT_EQ(back, third);
}

TEST(Params, Validation) {
  ProblemParams p;
  EXPECT_NO_THROW(p.validate());
  p.s = 1.5;
  EXPECT_THROW(p.validate(), ParameterError);
  p = {};
  p.n = 4;
  EXPECT_THROW(p.validate(), ParameterError);
  p = {};
  p.quad_nodes = 8;
  EXPECT_THROW(p.validate(), ParameterError);
}

TEST(Parallel, EveryIndexOnceForAnyThreadCount) {
  for (unsigned threads : {1u, 2u, 4u}) {
    const WorkerPool pool(threads);
    std::vector<int> hits(1000, 0);
    pool.for_each_index(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(Parallel, RethrowsFirstError) {
  const WorkerPool pool(3);
  EXPECT_THROW(pool.for_each_index(50,
                                   [](std::size_t i) {
                                     if (i == 17) throw NumericError("boom");
                                   }),
               NumericError);
}
