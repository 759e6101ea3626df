// One line per acceptance criterion: verdict, measured values against their
// tolerances, and wall clock against the runtime limit.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "calderon/dtn.hpp"
#include "calderon/fracpoisson.hpp"
#include "calderon/hadamard.hpp"
#include "calderon/hilbert1d.hpp"
#include "calderon/mandache.hpp"
#include "calderon/numkit/fit.hpp"
#include "calderon/numkit/harmonics.hpp"
#include "calderon/radialbasis.hpp"

using namespace calderon;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    passed = passed && ok;
    detail << (ok ? "" : "!") << what << "; ";
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

ProblemParams params_for(int n, double s) {
  ProblemParams p;
  p.n = n;
  p.s = s;
  return p;
}

const double kLog2 = std::log(2.0);

void basis_decay(Outcome& out) {
  double worst_ratio = 0.0;
  double worst_slope = -std::numeric_limits<double>::infinity();
  std::size_t rows = 0;
  for (int n : {1, 2})
    for (double s : {0.25, 0.5, 0.75}) {
      const auto rep = poisson::decay_report(12, params_for(n, s));
      worst_ratio = std::max(worst_ratio, rep.max_ratio);
      worst_slope = std::max(worst_slope, rep.fit.slope);
      rows += rep.rows.size();
    }
  out.expect(worst_ratio <= 1.0, "max |A0 f|/(c_ns 2^{-m-k}) = " + num(worst_ratio) + " <= 1 over " +
                                     std::to_string(rows) + " rows");
  out.expect(worst_slope <= -kLog2 + 0.05, "worst slope " + num(worst_slope) + " <= " + num(-kLog2 + 0.05));
}

void orthonormality(Outcome& out) {
  double gram = 0.0;
  double moments = 0.0;
  for (int n : {1, 2, 3})
    for (double s : {0.25, 0.5, 0.75}) {
      const auto params = params_for(n, s);
      for (int m = 0; m <= 12; ++m) {
        const auto basis = radial::build_radial_basis(m, 12 - m, params);
        for (int i = 0; i <= basis.k_max(); ++i) {
          const auto fi = [&](double r) { return basis.profile(i).eval_exact(r); };
          for (int j = 0; j <= i; ++j) {
            const double g =
                radial::inner_product_s(fi, [&](double r) { return basis.profile(j).eval_exact(r); }, params);
            gram = std::max(gram, std::abs(g - (i == j ? 1.0 : 0.0)));
          }
          for (int j = 0; j <= radial::vanishing_order(i); ++j)
            moments = std::max(moments, std::abs(radial::moment(basis, i, j)));
        }
      }
    }
  // angular factor: orthonormal harmonics under an exact sphere rule
  double angular = 0.0;
  for (int n : {1, 2, 3}) {
    const auto rule = numkit::sphere_rule(n, 24);
    for (int m1 = 0; m1 <= 12; ++m1)
      for (int l1 = 0; l1 < numkit::harmonic_multiplicity(n, m1); ++l1)
        for (int m2 = 0; m2 <= 12; ++m2)
          for (int l2 = 0; l2 < numkit::harmonic_multiplicity(n, m2); ++l2) {
            double sum = 0.0;
            for (std::size_t q = 0; q < rule.size(); ++q)
              sum += rule.weights[q] * numkit::spherical_harmonic(n, {m1, l1}, rule.direction(q)) *
                     numkit::spherical_harmonic(n, {m2, l2}, rule.direction(q));
            angular = std::max(angular, std::abs(sum - ((m1 == m2 && l1 == l2) ? 1.0 : 0.0)));
          }
  }
  out.expect(std::max(gram, angular) < 1e-10,
             "Gram deviation radial " + num(gram) + ", angular " + num(angular) + " < 1e-10");
  out.expect(moments < 1e-10, "max |moment(j)|, j <= k0: " + num(moments) + " < 1e-10");
}

void gamma_smoothing(Outcome& out) {
  const auto params = params_for(1, 0.5);
  const int cap = 10;
  const auto basis =
      std::make_shared<const poisson::ExteriorBasis>(poisson::ExteriorBasis::build_triangle(params, cap));
  const auto indices = poisson::triangle_indices(1, cap);
  const dtn::GammaEvaluator coarse(basis, indices, {256});
  const dtn::GammaEvaluator fine(basis, indices, {512});
  const double r0 = coarse.op().lambda_min() / 2.0;
  const auto q = dtn::Potential::bump(1, 0.5 * r0, {0.2, 0.0, 0.0}, 0.5);
  const auto a = coarse.evaluate(q);
  const auto b = fine.evaluate(q);
  const auto fa = dtn::fit_diagonal_decay(a);
  const auto fb = dtn::fit_diagonal_decay(b);
  const double change = std::abs(fa.rate - fb.rate) / std::abs(fb.rate);
  const double symmetry = std::max(a.symmetry_defect(), b.symmetry_defect());
  out.expect(std::abs(q.sup_norm() - 0.5 * r0) < 1e-12 * r0, "|q|_inf = r0/2 = " + num(0.5 * r0));
  out.expect(fb.rate > 0.0, "rate c = " + num(fa.rate) + " (h) / " + num(fb.rate) + " (h/2) > 0");
  out.expect(change <= 0.1, "mesh-halving change " + num(change) + " <= 0.1");
  out.expect(symmetry < 1e-6, "symmetry " + num(symmetry) + " < 1e-6");
}

void norm_chain(Outcome& out) {
  int violations = 0;
  int total = 0;
  double worst = 0.0;
  for (auto [n, cap] : {std::pair{1, 10}, std::pair{2, 10}, std::pair{3, 6}}) {
    for (int i = 0; i < 100; ++i) {
      std::function<double(int)> envelope;
      if (i % 2 == 0)
        envelope = [n](int level) { return std::pow(1.0 + level, -(n + 2)); };
      else
        envelope = [i](int level) { return std::exp(-0.05 * i * level); };
      const auto t = dtn::random_section(n, cap, envelope, 1000 * n + i);
      const double ratio = t.op_norm() / t.x_norm();
      worst = std::max(worst, ratio);
      ++total;
      if (ratio > 4.0) ++violations;
    }
  }
  out.expect(violations == 0, std::to_string(violations) + " violations of |T|_op <= 4 |T|_X in " +
                                  std::to_string(total) + " sections (worst ratio " + num(worst) + ")");
}

void counting(Outcome& out) {
  int mismatches = 0;
  double worst_bound = 0.0;
  double worst_sum = 0.0;
  for (int n : {1, 2, 3}) {
    double sum = 0.0;
    for (int p = 0; p <= 20; ++p) {
      const auto exact = dtn::count_tuples(p, n);
      if (p <= 6) {
        const auto all = poisson::triangle_indices(n, p);
        std::int64_t brute = 0;
        for (const auto& i1 : all)
          for (const auto& i2 : all)
            if (std::max(i1.level(), i2.level()) == p) ++brute;
        if (brute != exact) ++mismatches;
      }
      worst_bound = std::max(worst_bound, static_cast<double>(exact) / dtn::tuple_count_bound(p, n));
      sum += std::pow(1.0 + p, -2.0 * (n + 2)) * static_cast<double>(exact);
    }
    worst_sum = std::max(worst_sum, sum);
  }
  out.expect(mismatches == 0, std::to_string(mismatches) + " enumeration mismatches for p <= 6");
  out.expect(worst_bound <= 1.0, "max N_p / 8(p+1)^{2n+1} = " + num(worst_bound) + " <= 1");
  out.expect(worst_sum <= 16.0, "max_n sum (1+p)^{-2(n+2)} N_p = " + num(worst_sum) + " <= 16");
}

void instability(Outcome& out) {
  const auto op = dtn::assemble_frac_op(256, 0.5);
  const double r0 = op.lambda_min() / 2.0;
  const double eps = 0.05 * r0;
  const auto spec = mandache::BumpFamilySpec::with_subdivisions(1, 1, eps, 3);
  mandache::SearchOptions options;
  options.cap = 8;
  options.gamma.mesh_elements = 256;
  options.params = params_for(1, 0.5);
  const auto found = mandache::instability_search(dtn::Potential::zero(1), spec, options);
  const auto& rep = found.report;
  out.expect(std::pow(2, rep.bits) == 8, "|Z| = " + std::to_string(1 << rep.bits));
  out.expect(std::abs(rep.linf_distance - eps) <= 1e-9 * eps, "|q1-q2|_inf = " + num(rep.linf_distance) +
                                                                    " = eps = " + num(eps));
  out.expect(rep.contraction_ratio <= 1e-2,
             "X-distance / eps = " + num(rep.contraction_ratio) + " <= 1e-2 (X-distance " + num(rep.x_distance) + ")");
  out.detail << "response-normalized ratio " << num(rep.normalized_ratio) << "; target 8exp(-eps^{-1/5}) = "
             << num(rep.target) << "; ";
}

void runge(Outcome& out) {
  for (int n : {2, 3}) {
    const auto params = params_for(n, 0.5);
    const double c0 = 1.0 / (4.0 * poisson::decomposition_constant(n, 0.5));
    std::vector<double> ps;
    std::vector<double> logs;
    double worst = std::numeric_limits<double>::infinity();
    for (int p = 2; p <= 8; ++p) {
      const auto res = poisson::min_norm_control(p, {p + 2, p + 2}, params);
      ps.push_back(p);
      logs.push_back(std::log(res.norm));
      worst = std::min(worst, res.norm / (c0 * std::ldexp(1.0, p)));
    }
    const double slope = numkit::fit_line(ps, logs).slope;
    out.expect(slope >= kLog2 - 0.1, "n=" + std::to_string(n) + " slope " + num(slope) + " >= " + num(kLog2 - 0.1));
    out.expect(worst >= 1.0, "n=" + std::to_string(n) + " min |f|/(c0 2^p) = " + num(worst) + " >= 1");
  }
}

void hilbert_transform(Outcome& out) {
  const auto svd = hilbert::ht_svd(hilbert::build_ht(64, 64), 12);
  double residual = 0.0;
  std::vector<double> ls;
  std::vector<double> logs;
  for (const auto& t : svd.triples()) {
    residual = std::max({residual, t.residual, t.adjoint_residual});
    ls.push_back(t.l);
    logs.push_back(std::log(t.sigma));
  }
  const auto fit = numkit::fit_line(ls, logs);
  out.expect(residual < 1e-8, "SVD residual " + num(residual) + " < 1e-8 for l <= " +
                                  std::to_string(svd.triples().size() - 1));
  out.expect(1.0 - fit.r_squared < 0.05, "log sigma fit 1-R^2 " + num(1.0 - fit.r_squared) + " < 0.05");

  double sl = 0.0;
  std::vector<double> lambda;
  std::vector<double> idx;
  for (int l = 0; l <= 8; ++l) {
    const auto rep = hilbert::sturm_liouville_check(svd, l);
    sl = std::max(sl, rep.residual);
    idx.push_back(l);
    lambda.push_back(rep.lambda);
  }
  const auto quad = numkit::fit_quadratic(idx, lambda);
  out.expect(sl < 5e-2, "SL residual " + num(sl) + " < 5e-2");
  out.expect(quad.c2 > 0.0, "lambda_l l^2 coefficient " + num(quad.c2) + " > 0");

  double discrepancy = 0.0;
  double cosine = 1.0;
  int outside = 0;
  for (double s : {0.25, 0.5, 0.75}) {
    for (const auto& g : {std::function<double(double)>([](double) { return 1.0; }),
                          std::function<double(double)>([](double y) { return y; }),
                          std::function<double(double)>([](double y) { return std::exp(-y); })}) {
      const auto check = hilbert::ht_frac_identity(g, s);
      discrepancy = std::max(discrepancy, check.discrepancy);
      cosine = std::min(cosine, check.cosine);
    }
    for (const auto& row : hilbert::control_growth_1d(svd, 8, s).rows)
      if (!row.degenerate && !row.within_band) ++outside;
  }
  out.expect(discrepancy < 1e-8, "identity discrepancy " + num(discrepancy) + " < 1e-8");
  out.expect(cosine > 1.0 - 1e-10, "collinearity 1-" + num(1.0 - cosine) + " > 1-1e-10");
  out.expect(outside == 0, std::to_string(outside) + " control rows outside the norm-equivalence band");
}

void hadamard_example(Outcome& out) {
  double min_order = std::numeric_limits<double>::infinity();
  double flux_error = 0.0;
  double spread = 0.0;
  const std::vector<int> steps{32, 64, 128, 256};
  for (double s : {0.25, 0.5, 0.75}) {
    const auto sol = hadamard::ExtensionSolution::make(5, s);
    std::vector<double> res;
    for (int st : steps) {
      hadamard::ResidualGrid grid;
      grid.steps = st;
      res.push_back(hadamard::pde_residual(sol, grid));
    }
    for (std::size_t i = 0; i + 1 < res.size(); ++i) min_order = std::min(min_order, std::log2(res[i] / res[i + 1]));
    const auto flux = hadamard::boundary_flux(sol, 1.0, hadamard::dyadic_heights());
    flux_error = std::max(flux_error, std::abs(flux.extrapolated - std::sin(5.0)));
    spread = std::max(spread, hadamard::growth_table(s, 1.0, 1.0, 20, 80).spread);
  }
  double classical = 0.0;
  const auto half = hadamard::ExtensionSolution::make(5, 0.5);
  for (double x = 0.05; x < 1.0; x += 0.1)
    for (double y = 0.1; y < 2.0; y += 0.1) {
      const double scale = std::sinh(5 * y) / 5;
      classical = std::max(classical, std::abs(hadamard::eval_v(half, x, y) - std::sin(5 * x) * scale) / scale);
    }
  out.expect(min_order >= 1.8, "residual order " + num(min_order) + " >= 1.8");
  out.expect(flux_error < 1e-6, "flux error " + num(flux_error) + " < 1e-6");
  out.expect(spread <= 0.05, "growth spread " + num(spread) + " <= 0.05");
  out.expect(classical < 1e-12, "s=1/2 vs sin(nx)sinh(ny)/n " + num(classical) + " < 1e-12");
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  void (*run)(Outcome&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "basis decay", 60.0, basis_decay},
      {2, "orthonormality and moments", 30.0, orthonormality},
      {3, "Gamma smoothing", 300.0, gamma_smoothing},
      {4, "norm chain", 5.0, norm_chain},
      {5, "counting", 5.0, counting},
      {6, "instability witness", 600.0, instability},
      {7, "Runge optimality", 120.0, runge},
      {8, "Hilbert transform", 60.0, hilbert_transform},
      {9, "Hadamard example", 30.0, hadamard_example},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.expect(false, std::string("error: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.expect(seconds < c.limit_seconds, "runtime " + num(seconds) + " s < " + num(c.limit_seconds) + " s");
    if (!out.passed) ++failed;
    std::printf("[%s] criterion %d (%s): %s\n", out.passed ? "PASS" : "FAIL", c.id, c.name, out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
