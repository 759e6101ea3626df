#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "calderon/hadamard.hpp"
#include "calderon/numkit/errors.hpp"

using namespace calderon;
using namespace calderon::hadamard;

TEST(Hadamard, Constant) {
  EXPECT_NEAR(cs_constant(0.5), std::sqrt(std::numbers::pi / 2.0), 1e-15);
  EXPECT_NEAR(cs_constant(0.25), std::pow(2.0, -0.75) * std::tgamma(0.25), 1e-14);
}

TEST(Hadamard, ClassicalLimit) {
  const auto sol = ExtensionSolution::make(7, 0.5);
  for (double x : {0.1, 0.4, 0.9})
    for (double y : {0.05, 0.5, 1.7}) {
      const double ref = std::sin(7 * x) * std::sinh(7 * y) / 7.0;
      EXPECT_NEAR(eval_v(sol, x, y), ref, 1e-14 * std::sinh(7 * y));
    }
}

TEST(Hadamard, ErrorsAndLogForm) {
  const auto sol = ExtensionSolution::make(2000, 0.25);
  EXPECT_THROW(eval_v(sol, 0.3, -0.1), ParameterError);
  EXPECT_THROW(eval_v(sol, 0.3, 1.0), RangeError);
  const double lv = log_abs_v(sol, 0.3, 1.0);
  EXPECT_TRUE(std::isfinite(lv));
  EXPECT_NEAR(lv / 2000.0, 1.0, 0.01);
  const auto small = ExtensionSolution::make(3, 0.25);
  EXPECT_NEAR(log_abs_v(small, 0.3, 0.8), std::log(std::abs(eval_v(small, 0.3, 0.8))), 1e-13);
}

TEST(Hadamard, ResidualSecondOrder) {
  for (double s : {0.25, 0.5, 0.75}) {
    const auto sol = ExtensionSolution::make(5, s);
    ResidualGrid coarse, fine;
    coarse.steps = 64;
    fine.steps = 128;
    const double ratio = pde_residual(sol, coarse) / pde_residual(sol, fine);
    EXPECT_GT(ratio, 3.5) << s;
    EXPECT_LT(ratio, 4.5) << s;
  }
  ResidualGrid bad;
  bad.y_min = 0.0;
  EXPECT_THROW(pde_residual(ExtensionSolution::make(5, 0.5), bad), ParameterError);
}

// A wrong Bessel order leaves an O(1) residual that does not refine away.
TEST(Hadamard, ShiftedOrderIsNotASolution) {
  const auto bad = ExtensionSolution::make(5, 0.5, 0.1);
  ResidualGrid coarse, fine;
  coarse.steps = 128;
  fine.steps = 256;
  EXPECT_LT(pde_residual(bad, coarse) / pde_residual(bad, fine), 1.5);
}

TEST(Hadamard, FluxLimit) {
  for (double s : {0.25, 0.5, 0.75})
    for (int n : {1, 3, 5}) {
      const auto flux = boundary_flux(ExtensionSolution::make(n, s), 0.7, dyadic_heights());
      EXPECT_NEAR(flux.extrapolated, std::sin(n * 0.7), 1e-6) << s << ' ' << n;
    }
  const auto h = dyadic_heights(2, 3);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h[0], 0.25);
  EXPECT_EQ(h[2], 0.0625);
  EXPECT_THROW(boundary_flux(ExtensionSolution::make(1, 0.5), 0.7, {0.1, 0.2}), ParameterError);
}

TEST(Hadamard, GrowthNormalization) {
  for (double s : {0.25, 0.5, 0.75}) {
    const auto table = growth_table(s, 1.0, 1.0, 20, 80);
    EXPECT_EQ(table.rows.size(), 61u);
    EXPECT_LE(table.spread, 0.05) << s;
    for (const auto& row : table.rows)
      if (row.usable) EXPECT_NEAR(row.asymptotic_ratio, 1.0, 0.02);
  }
}
