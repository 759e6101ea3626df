#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "calderon/fracpoisson.hpp"
#include "calderon/hilbert1d.hpp"
#include "calderon/numkit/errors.hpp"

using namespace calderon;
using namespace calderon::hilbert;

namespace {

const HtSvd& default_svd() {
  static const HtSvd svd = ht_svd(build_ht(64, 64), 12);
  return svd;
}

}  // namespace

TEST(TruncatedHT, ClosedFormsOnConstants) {
  const auto ht = build_ht(64, 64);
  // int_2^3 dy / (0 - y) = -log(3/2)
  EXPECT_NEAR(ht.forward([](double) { return 1.0; }, 0.0), -std::log(1.5), 1e-14);
  EXPECT_NEAR(ht.forward([](double) { return 1.0; }, 0.0), -0.405465108, 1e-9);
  // int_{-1}^1 dt / (y - t) = log((y+1)/(y-1))
  EXPECT_NEAR(ht.adjoint([](double) { return 1.0; }, 2.5), std::log(3.5 / 1.5), 1e-14);
  EXPECT_THROW(build_ht(16, 64), ParameterError);
}

TEST(HtSvd, DecayingOrthonormalTriples) {
  const auto& svd = default_svd();
  ASSERT_GE(svd.triples().size(), 8u);
  EXPECT_EQ(svd.requested(), 12);
  EXPECT_TRUE(svd.warning().has_value());
  const auto& src = svd.ht().source;
  for (std::size_t a = 0; a < svd.triples().size(); ++a) {
    const auto& ta = svd.triples()[a];
    EXPECT_LT(ta.residual, 1e-8);
    EXPECT_LT(ta.adjoint_residual, 1e-8);
    if (a > 0) EXPECT_LT(ta.sigma, svd.triples()[a - 1].sigma);
    for (std::size_t b = 0; b <= a; ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < src.size(); ++j) dot += src.weights[j] * ta.f(j) * svd.triples()[b].f(j);
      EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-10);
    }
  }
  EXPECT_THROW(svd.triple(40), IndexError);
}

// H f_l = sigma_l g_l pointwise, through the interpolants.
TEST(HtSvd, SingularRelationOffTheNodes) {
  const auto& svd = default_svd();
  for (int l = 0; l < 5; ++l) {
    const auto& t = svd.triple(l);
    for (double x : {-0.9, -0.31, 0.0, 0.47, 0.88}) {
      const double lhs = svd.ht().forward([&](double y) { return svd.f_at(l, y); }, x);
      EXPECT_NEAR(lhs, t.sigma * svd.g_at(l, x), 1e-9) << l << ' ' << x;
    }
  }
}

// The l-th singular function of the commuting Sturm-Liouville problem has l sign changes.
TEST(HtSvd, SignChangesCountIndex) {
  const auto& svd = default_svd();
  for (int l = 0; l <= 6; ++l) {
    int changes = 0;
    double previous = svd.f_at(l, 2.0005);
    for (double y = 2.0; y <= 2.9995; y += 0.0005) {
      const double v = svd.f_at(l, y + 0.0005);
      if (v * previous < 0.0) ++changes;
      previous = v;
    }
    EXPECT_EQ(changes, l);
  }
}

TEST(SturmLiouville, CoefficientAndResiduals) {
  for (double root : {-1.0, 1.0, 2.0, 3.0}) EXPECT_EQ(sl_coefficient(root), 0.0);
  EXPECT_NEAR(sl_coefficient(0.0), -6.0, 1e-15);
  const auto& svd = default_svd();
  double previous = -1.0;
  for (int l = 0; l <= 8; ++l) {
    const auto rep = sturm_liouville_check(svd, l);
    EXPECT_LT(rep.residual, 5e-2) << l;
    EXPECT_GT(rep.lambda, previous);
    previous = rep.lambda;
  }
}

TEST(Identity, KernelAndHilbertFormsAgree) {
  for (double s : {0.25, 0.5, 0.75}) {
    for (auto g : {std::function<double(double)>([](double) { return 1.0; }),
                   std::function<double(double)>([](double y) { return y * y - 4.0; })}) {
      const auto check = ht_frac_identity(g, s);
      EXPECT_LT(check.discrepancy, 1e-8) << s;
      EXPECT_GT(check.cosine, 1.0 - 1e-10) << s;
    }
  }
}

TEST(Identity, SingularFunctions) {
  const auto& svd = default_svd();
  for (int l = 0; l <= 3; ++l) EXPECT_LT(singular_identity_defect(svd, l, 0.5), 1e-6) << l;
}

TEST(NormEquivalence, SharpConstants) {
  for (double gamma : {0.25, 0.5, 0.75}) {
    const auto eq = weighted_norm_equivalence(gamma, 100, 3);
    EXPECT_NEAR(eq.inf_weight, std::pow(8.0, -gamma), 1e-14);
    EXPECT_NEAR(eq.sup_weight, std::pow(3.0, -gamma), 1e-14);
    EXPECT_GE(eq.c1, eq.inf_weight * (1 - 1e-12));
    EXPECT_LE(eq.c2, eq.sup_weight * (1 + 1e-12));
    EXPECT_LE(eq.c1, eq.c2);
  }
  EXPECT_TRUE(weighted_norm_equivalence(0.5, 50, 1).within_third_to_three);
  EXPECT_FALSE(weighted_norm_equivalence(0.75, 50, 1).within_third_to_three);
}

TEST(ControlGrowth, TracksInverseSigma) {
  const auto& svd = default_svd();
  for (double s : {0.25, 0.75}) {
    const auto growth = control_growth_1d(svd, 8, s);
    ASSERT_EQ(growth.rows.size(), 8u);
    for (const auto& row : growth.rows) {
      if (row.degenerate) continue;
      EXPECT_TRUE(row.within_band) << s << ' ' << row.k;
      EXPECT_LE(row.residual, 1.0 / row.k * (1 + 1e-9));
    }
    EXPECT_GT(growth.norm_slope, 0.0);
    EXPECT_NEAR(growth.norm_slope, -growth.sigma_slope, 0.2 * std::abs(growth.sigma_slope));
  }
  EXPECT_THROW(control_growth_1d(svd, 40, 0.5), ParameterError);
}
