#include "calderon/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

#include "calderon/dtn.hpp"
#include "calderon/fracpoisson.hpp"
#include "calderon/hadamard.hpp"
#include "calderon/hilbert1d.hpp"
#include "calderon/io.hpp"
#include "calderon/mandache.hpp"
#include "calderon/numkit/errors.hpp"
#include "calderon/numkit/fit.hpp"
#include "calderon/radialbasis.hpp"

namespace calderon::cli {

namespace {

using io::format_double;
using poisson::BasisIndex;

std::string fmt(double x) { return format_double(x); }
std::string fmt(int x) { return std::to_string(x); }
std::string fmt(std::int64_t x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "1" : "0"; }

std::string tag(int n, double s) { return "n=" + std::to_string(n) + " s=" + format_double(s); }

void strictly_positive(Report& r, std::string name, double value, std::string detail = {}) {
  r.checks.push_back({std::move(name), value > 0.0, value, 0.0, std::move(detail)});
}

double slope_of_log(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> logs(y.size());
  std::transform(y.begin(), y.end(), logs.begin(), [](double v) { return std::log(v); });
  return numkit::fit_line(x, logs).slope;
}

void decay_rows(Report& r, io::CsvTable& table, const poisson::DecayReport& rep, bool with_params) {
  for (const auto& row : rep.rows) {
    std::vector<std::string> cells;
    if (with_params) cells = {fmt(rep.n), fmt(rep.s)};
    for (auto cell : {fmt(row.idx.m), fmt(row.idx.k), fmt(row.idx.l), fmt(row.norm), fmt(row.bound)})
      cells.push_back(std::move(cell));
    table.add_row(std::move(cells));
  }
  const auto label = tag(rep.n, rep.s);
  r.check_at_most("decay_bound " + label, rep.max_ratio, 1.0, "max norm / (c_ns 2^{-m-k})");
  if (rep.cap >= 1) {
    r.check_at_most("decay_slope " + label, rep.fit.slope, -std::log(2.0) + 0.05, "slope of log norm in m+k");
  } else {
    r.notes.push_back("decay slope not fitted for cap 0 (" + label + ")");
  }
}

}  // namespace

Report cmd_basis(const RunConfig& config, const numkit::WorkerPool& pool) {
  Report r;
  r.command = "basis";
  const auto& params = config.params;
  const int cap = config.basis.cap;
  const auto basis = poisson::ExteriorBasis::build_triangle(params, cap, &pool);

  double gram = 0.0;
  double moments = 0.0;
  auto& moment_table = r.add_table("moments", {"m", "k", "j", "moment"});
  for (int m = 0; m <= basis.m_max(); ++m) {
    const auto& radial = basis.radial(m);
    gram = std::max(gram, radial.diagnostics().gram_residual);
    for (int k = 0; k <= radial.k_max(); ++k) {
      for (int j = 0; j <= radial::vanishing_order(k); ++j) {
        const double value = radial::moment(radial, k, j);
        moments = std::max(moments, std::abs(value));
        moment_table.add_row({fmt(m), fmt(k), fmt(j), fmt(value)});
      }
    }
    r.artifacts.emplace_back("basis_m" + std::to_string(m) + ".json", io::basis_to_json(radial));
  }

  const auto rep = poisson::decay_report(cap, params, {config.decay.radial_nodes}, &pool);
  auto& table = r.add_table("decay", {"m", "k", "l", "norm", "bound"});
  decay_rows(r, table, rep, false);
  r.check_at_most("gram_deviation", gram, 1e-10, "max |(g_i, g_j)_s - delta_ij|");
  r.check_at_most("vanishing_moments", moments, 1e-10, "max |moment(j)| over j <= k0");

  r.results = {{"n", params.n},         {"s", params.s},
               {"cap", cap},            {"c_ns", rep.c_ns},
               {"rows", rep.rows.size()}, {"max_ratio", rep.max_ratio},
               {"slope", rep.fit.slope}, {"gram_deviation", gram},
               {"max_moment", moments}};
  return r;
}

Report cmd_decay(const RunConfig& config, const numkit::WorkerPool& pool) {
  Report r;
  r.command = "decay";
  auto& table = r.add_table("decay", {"n", "s", "m", "k", "l", "norm", "bound"});
  nlohmann::json fits = nlohmann::json::array();
  for (int n : config.decay.dims) {
    for (double s : config.decay.orders) {
      ProblemParams params = config.params;
      params.n = n;
      params.s = s;
      const auto rep = poisson::decay_report(config.decay.cap, params, {config.decay.radial_nodes}, &pool);
      decay_rows(r, table, rep, true);
      fits.push_back({{"n", n},
                      {"s", s},
                      {"c_ns", rep.c_ns},
                      {"slope", rep.fit.slope},
                      {"r_squared", rep.fit.r_squared},
                      {"max_ratio", rep.max_ratio}});
    }
  }
  r.results = {{"cap", config.decay.cap}, {"fits", fits}};
  return r;
}

Report cmd_gamma(const RunConfig& config, const numkit::WorkerPool& pool) {
  Report r;
  r.command = "gamma";
  ProblemParams params = config.params;
  if (params.n != 1) {
    r.notes.push_back("Gamma sections are evaluated in one dimension; params.n ignored");
    params.n = 1;
  }
  const auto& g = config.gamma;
  const auto basis =
      std::make_shared<const poisson::ExteriorBasis>(poisson::ExteriorBasis::build_triangle(params, g.cap, &pool));
  const auto indices = poisson::triangle_indices(1, g.cap);
  const dtn::GammaEvaluator coarse(basis, indices, {g.mesh_elements});
  const dtn::GammaEvaluator fine(basis, indices, {2 * g.mesh_elements});
  const double r0 = coarse.op().lambda_min() / 2.0;
  const auto q = dtn::Potential::bump(1, g.amplitude * r0, {g.center, 0.0, 0.0}, g.radius);

  const auto a = coarse.evaluate(q, &pool);
  const auto b = fine.evaluate(q, &pool);
  const auto fa = dtn::fit_diagonal_decay(a);
  const auto fb = dtn::fit_diagonal_decay(b);

  strictly_positive(r, "decay_rate", fb.rate, "fitted c in |a_ii| ~ C e^{-c(m+k)}");
  r.check_at_most("rate_mesh_stability", std::abs(fa.rate - fb.rate) / std::abs(fb.rate), 0.1,
                  "relative change of c under mesh halving");
  r.check_at_most("symmetry", std::max(a.symmetry_defect(), b.symmetry_defect()), 1e-6,
                  "max |a_12 - a_21| / max |a|");

  auto& diag = r.add_table("diagonal", {"m", "k", "l", "level", "coarse", "fine"});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& idx = indices[i];
    diag.add_row({fmt(idx.m), fmt(idx.k), fmt(idx.l), fmt(idx.level()), fmt(a.entries(i, i)), fmt(b.entries(i, i))});
  }
  auto matrix = io::gamma_to_csv(b);
  matrix.metadata.emplace_back("mesh_elements", std::to_string(2 * g.mesh_elements));
  r.tables.emplace_back("matrix", std::move(matrix));

  // Norm chain on random sections with polynomial and exponential envelopes.
  auto& chain = r.add_table("norm_chain", {"n", "sample", "op_norm", "x_norm", "ratio"});
  nlohmann::json chain_results = nlohmann::json::array();
  for (int n : {1, 2}) {
    double worst = 0.0;
    for (int i = 0; i < g.random_matrices; ++i) {
      std::function<double(int)> envelope;
      if (i % 2 == 0)
        envelope = [n](int level) { return std::pow(1.0 + level, -(n + 2)); };
      else
        envelope = [rate = fb.rate](int level) { return std::exp(-rate * level); };
      const auto t = dtn::random_section(n, g.cap, envelope, config.seed + static_cast<std::uint64_t>(i));
      const double op = t.op_norm();
      const double x = t.x_norm();
      worst = std::max(worst, op / x);
      chain.add_row({fmt(n), fmt(i), fmt(op), fmt(x), fmt(op / x)});
    }
    r.check_at_most("norm_chain n=" + std::to_string(n), worst, 4.0, "max |T|_op / |T|_X");
    chain_results.push_back({{"n", n}, {"samples", g.random_matrices}, {"max_ratio", worst}});
  }

  // Tuple counts: closed form against enumeration, growth bound and the weighted sum.
  auto& counts = r.add_table("counts", {"n", "p", "N_p", "bound", "dimension_bound"});
  for (int n : {1, 2, 3}) {
    std::int64_t mismatch = 0;
    double worst_bound = 0.0;
    double sum = 0.0;
    for (int p = 0; p <= g.count_p_max; ++p) {
      const auto exact = dtn::count_tuples(p, n);
      if (p <= 6) {
        const auto all = poisson::triangle_indices(n, p);
        std::int64_t brute = 0;
        for (const auto& i1 : all)
          for (const auto& i2 : all)
            if (std::max(i1.level(), i2.level()) == p) ++brute;
        mismatch += std::abs(brute - exact);
      }
      const double bound = dtn::tuple_count_bound(p, n);
      worst_bound = std::max(worst_bound, static_cast<double>(exact) / bound);
      sum += std::pow(1.0 + p, -2.0 * (n + 2)) * static_cast<double>(exact);
      counts.add_row({fmt(n), fmt(p), fmt(exact), fmt(bound), fmt(dtn::count_tuples_dimension_bound(p, n))});
    }
    r.check_at_most("count_enumeration n=" + std::to_string(n), static_cast<double>(mismatch), 0.0,
                    "total |N_p - enumeration| for p <= 6");
    r.check_at_most("count_bound n=" + std::to_string(n), worst_bound, 1.0, "max N_p / (8 (p+1)^{2n+1})");
    r.check_at_most("count_sum n=" + std::to_string(n), sum, 16.0, "sum (1+p)^{-2(n+2)} N_p");
  }

  r.results = {{"s", params.s},
               {"cap", g.cap},
               {"lambda_min", coarse.op().lambda_min()},
               {"r0", r0},
               {"q", q.descriptor()},
               {"q_sup", q.sup_norm()},
               {"coarse", {{"mesh_elements", g.mesh_elements}, {"rate", fa.rate}, {"constant", fa.constant},
                           {"r_squared", fa.r_squared}, {"symmetry", a.symmetry_defect()}}},
               {"fine", {{"mesh_elements", 2 * g.mesh_elements}, {"rate", fb.rate}, {"constant", fb.constant},
                         {"envelope", fb.envelope}, {"r_squared", fb.r_squared}, {"symmetry", b.symmetry_defect()},
                         {"x_norm", b.x_norm()}, {"op_norm", b.op_norm()}}},
               {"norm_chain", chain_results}};
  return r;
}

Report cmd_instability(const RunConfig& config, const numkit::WorkerPool& pool) {
  Report r;
  r.command = "instability";
  ProblemParams params = config.params;
  if (params.n != 1) {
    r.notes.push_back("the instability search runs in one dimension; params.n ignored");
    params.n = 1;
  }
  const auto& c = config.instability;
  const auto op = dtn::assemble_frac_op(c.mesh_elements, params.s);
  const double r0 = op.lambda_min() / 2.0;
  const double eps = c.eps_fraction * r0;
  const auto spec = mandache::BumpFamilySpec::with_subdivisions(1, c.m, eps, c.N);

  mandache::SearchOptions options;
  options.cap = c.cap;
  options.gamma.mesh_elements = c.mesh_elements;
  options.params = params;
  options.seed = config.seed;
  options.exhaustive_bits = c.exhaustive_bits;
  options.sampled_pairs = c.sampled_pairs;
  const auto found = mandache::instability_search(dtn::Potential::zero(1), spec, options, &pool);
  const auto& rep = found.report;

  r.check_at_most("pair_distance", std::abs(rep.linf_distance - eps) / eps, 1e-6, "| |q1-q2|_inf - eps | / eps");
  r.check_at_most("contraction", rep.contraction_ratio, 1e-2, "|Gamma(q1)-Gamma(q2)|_X / |q1-q2|_inf");
  r.check_at_most("operator_chain", rep.op_distance, rep.op_bound, "|.|_op <= 4 |.|_X on the pair");
  r.check_flag("pigeonhole_hypothesis", rep.hypothesis_met, "|Z| > |Y_delta|");
  r.notes.push_back("theoretical target 8 exp(-eps^{-n/((2n+3)m)}) = " + format_double(rep.target));

  const auto& net = rep.net;
  r.results = {{"eps", rep.eps},
               {"delta", rep.delta},
               {"r0", rep.r0},
               {"beta", spec.beta},
               {"mu", spec.mu},
               {"N", spec.N},
               {"bits", rep.bits},
               {"cardinality", std::pow(2.0, rep.bits)},
               {"log_cardinality", rep.log_z},
               {"log_cardinality_bound", spec.log_cardinality_bound()},
               {"net",
                {{"C", net.C},
                 {"c", net.c},
                 {"R0", net.R0},
                 {"l_delta", net.l_delta},
                 {"delta_prime", net.delta_prime},
                 {"net_terms", net.net_terms},
                 {"net_terms_bound", net.net_terms_bound},
                 {"grid_points", net.grid_points},
                 {"log_net_size", net.log_net_size},
                 {"log_net_size_bound", net.log_net_size_bound},
                 {"log_ratio", net.log_ratio}}},
               {"hypothesis_met", rep.hypothesis_met},
               {"exhaustive", rep.exhaustive},
               {"pairs_examined", rep.pairs_examined},
               {"mask1", rep.mask1},
               {"mask2", rep.mask2},
               {"q1", found.q1.descriptor()},
               {"q2", found.q2.descriptor()},
               {"linf_distance", rep.linf_distance},
               {"max_offset", rep.max_offset},
               {"x_distance", rep.x_distance},
               {"op_distance", rep.op_distance},
               {"op_bound", rep.op_bound},
               {"target", rep.target},
               {"contraction_ratio", rep.contraction_ratio},
               {"response_scale", rep.response_scale},
               {"normalized_ratio", rep.normalized_ratio},
               {"fit", {{"rate", rep.fit.rate}, {"constant", rep.fit.constant}, {"r_squared", rep.fit.r_squared}}}};
  return r;
}

Report cmd_approx(const RunConfig& config, const numkit::WorkerPool& pool) {
  Report r;
  r.command = "approx";
  const auto& a = config.approx;
  auto& table = r.add_table("control", {"n", "p", "norm", "lower_bound", "residual", "budget", "lambda", "alpha0"});
  nlohmann::json fits = nlohmann::json::array();
  for (int n : a.dims) {
    ProblemParams params = config.params;
    params.n = n;
    const double c0 = 1.0 / (4.0 * poisson::decomposition_constant(n, params.s));
    std::vector<double> ps;
    std::vector<double> norms;
    double worst = std::numeric_limits<double>::infinity();
    bool feasible = true;
    for (int p = a.p_min; p <= a.p_max; ++p) {
      try {
        const auto res = poisson::min_norm_control(p, {p + 2, p + 2}, params, {a.radial_nodes, a.rel_tol}, &pool);
        const double lower = c0 * std::ldexp(1.0, p);
        worst = std::min(worst, res.norm / lower);
        ps.push_back(p);
        norms.push_back(res.norm);
        table.add_row({fmt(n), fmt(p), fmt(res.norm), fmt(lower), fmt(res.residual), fmt(res.budget), fmt(res.lambda),
                       fmt(res.alpha0)});
      } catch (const InfeasibleError& e) {
        feasible = false;
        r.notes.push_back(tag(n, params.s) + " p=" + std::to_string(p) + ": " + e.what());
      }
    }
    r.check_flag("feasible " + tag(n, params.s), feasible, "every budget 1/p reached");
    const double slope = ps.size() >= 2 ? slope_of_log(ps, norms) : 0.0;
    r.check_at_least("growth_slope " + tag(n, params.s), slope, std::log(2.0) - 0.1, "slope of log |f| in p");
    r.check_at_least("lower_bound " + tag(n, params.s), worst, 1.0, "min |f| / (2^p / (4 c_ns))");
    fits.push_back({{"n", n}, {"s", params.s}, {"c0", c0}, {"slope", slope}, {"min_ratio", worst}});
  }
  r.results = {{"fits", fits}};
  return r;
}

Report cmd_hilbert(const RunConfig& config, const numkit::WorkerPool&) {
  Report r;
  r.command = "hilbert";
  const auto& h = config.hilbert;
  const auto ht = hilbert::build_ht(h.target_nodes, h.source_nodes);
  const auto svd = hilbert::ht_svd(ht, h.count);
  if (svd.warning()) r.notes.push_back(*svd.warning());
  const auto& triples = svd.triples();

  auto& sigma_table = r.add_table("sigma", {"l", "sigma", "residual", "adjoint_residual"});
  std::vector<double> ls;
  std::vector<double> log_sigma;
  double worst_residual = 0.0;
  for (const auto& t : triples) {
    sigma_table.add_row({fmt(t.l), fmt(t.sigma), fmt(t.residual), fmt(t.adjoint_residual)});
    worst_residual = std::max({worst_residual, t.residual, t.adjoint_residual});
    ls.push_back(t.l);
    log_sigma.push_back(std::log(t.sigma));
  }
  const auto sigma_fit = numkit::fit_line(ls, log_sigma);
  r.check_at_most("svd_residual", worst_residual, 1e-8, "max singular-pair residual on a refined grid");
  r.check_at_most("sigma_fit", 1.0 - sigma_fit.r_squared, 0.05, "1 - R^2 of log sigma_l against l");
  r.check_at_most("sigma_slope", sigma_fit.slope, 0.0, "fitted slope of log sigma_l");

  auto& sl_table = r.add_table("sturm_liouville", {"l", "lambda", "residual"});
  const int sl_last = std::min(h.sl_max, static_cast<int>(triples.size()) - 1);
  std::vector<double> sl_l;
  std::vector<double> sl_lambda;
  double sl_worst = 0.0;
  for (int l = 0; l <= sl_last; ++l) {
    const auto rep = hilbert::sturm_liouville_check(svd, l);
    sl_table.add_row({fmt(l), fmt(rep.lambda), fmt(rep.residual)});
    sl_worst = std::max(sl_worst, rep.residual);
    sl_l.push_back(l);
    sl_lambda.push_back(rep.lambda);
  }
  if (sl_last < h.sl_max)
    r.notes.push_back("Sturm-Liouville check limited to l <= " + std::to_string(sl_last) + " by the resolvable range");
  r.check_at_most("sturm_liouville", sl_worst, 5e-2, "interior relative residual, l <= " + std::to_string(sl_last));
  const auto quad = numkit::fit_quadratic(sl_l, sl_lambda);
  strictly_positive(r, "sturm_liouville_quadratic", quad.c2, "l^2 coefficient of lambda_l");

  auto& id_table = r.add_table("identity", {"s", "data", "discrepancy", "cosine"});
  auto& sing_table = r.add_table("singular_identity", {"s", "l", "sigma", "defect", "asserted"});
  auto& ctl_table = r.add_table("control", {"s", "k", "sigma", "norm", "inv_sigma", "scaled", "band_low", "band_high",
                                            "residual", "degenerate", "within_band"});
  nlohmann::json per_order = nlohmann::json::array();
  const std::vector<std::pair<std::string, std::function<double(double)>>> data{
      {"1", [](double) { return 1.0; }},
      {"y", [](double y) { return y; }},
      {"exp(-y)", [](double y) { return std::exp(-y); }}};
  for (double s : h.orders) {
    const auto label = "s=" + format_double(s);
    double discrepancy = 0.0;
    double cosine = 1.0;
    for (const auto& [name, g] : data) {
      const auto check = hilbert::ht_frac_identity(g, s);
      discrepancy = std::max(discrepancy, check.discrepancy);
      cosine = std::min(cosine, check.cosine);
      id_table.add_row({fmt(s), name, fmt(check.discrepancy), fmt(check.cosine)});
    }
    r.check_at_most("identity " + label, discrepancy, 1e-8, "kernel form vs Hilbert form of A0");
    r.check_at_least("collinearity " + label, cosine, 1.0 - 1e-10);

    double singular = 0.0;
    for (const auto& t : triples) {
      const double defect = hilbert::singular_identity_defect(svd, t.l, s);
      const bool asserted = t.sigma >= h.identity_sigma_floor;
      if (asserted) singular = std::max(singular, defect);
      sing_table.add_row({fmt(s), fmt(t.l), fmt(t.sigma), fmt(defect), fmt(asserted)});
    }
    r.check_at_most("singular_identity " + label, singular, 1e-6,
                    "A0 f^_l = -c(s) sigma_l g^_l for sigma_l >= " + format_double(h.identity_sigma_floor));

    const auto eq = hilbert::weighted_norm_equivalence(s, 200, config.seed);
    r.check_flag("norm_equivalence " + label,
                 eq.c1 >= eq.inf_weight * (1.0 - 1e-9) && eq.c2 <= eq.sup_weight * (1.0 + 1e-9),
                 "c1, c2 within the sharp weight extremes");
    if (!eq.within_third_to_three)
      r.notes.push_back("norm equivalence constants leave (1/3, 3) at " + label + ": c1=" + format_double(eq.c1) +
                        " c2=" + format_double(eq.c2));

    const auto growth = hilbert::control_growth_1d(svd, h.k_max, s);
    int outside = 0;
    for (const auto& row : growth.rows) {
      if (!row.degenerate && !row.within_band) ++outside;
      ctl_table.add_row({fmt(s), fmt(row.k), fmt(row.sigma), fmt(row.norm), fmt(row.inv_sigma), fmt(row.scaled),
                         fmt(row.band_low), fmt(row.band_high), fmt(row.residual), fmt(row.degenerate),
                         fmt(row.within_band)});
    }
    r.check_at_most("control_band " + label, outside, 0.0, "rows with |f~_k| c(s) sigma_k outside the band");
    per_order.push_back({{"s", s},
                         {"identity_discrepancy", discrepancy},
                         {"identity_cosine", cosine},
                         {"singular_defect", singular},
                         {"c1", eq.c1},
                         {"c2", eq.c2},
                         {"within_third_to_three", eq.within_third_to_three},
                         {"control_norm_slope", growth.norm_slope},
                         {"control_sigma_slope", growth.sigma_slope}});
  }

  r.results = {{"requested", svd.requested()},
               {"resolvable", svd.resolvable()},
               {"sigma_slope", sigma_fit.slope},
               {"sigma_r_squared", sigma_fit.r_squared},
               {"sturm_liouville_quadratic", {{"c0", quad.c0}, {"c1", quad.c1}, {"c2", quad.c2}}},
               {"orders", per_order}};
  return r;
}

Report cmd_hadamard(const RunConfig& config, const numkit::WorkerPool&) {
  Report r;
  r.command = "hadamard";
  const auto& c = config.hadamard;
  auto& conv = r.add_table("convergence", {"s", "steps", "h", "residual", "shifted_residual"});
  auto& flux_table = r.add_table("flux", {"s", "y", "flux"});
  auto& growth_table = r.add_table("growth", {"s", "n", "y0", "log_abs_v", "normalized", "asymptotic_ratio", "usable"});
  nlohmann::json per_order = nlohmann::json::array();
  bool classical_seen = false;
  for (double s : c.orders) {
    const auto label = "s=" + format_double(s);
    const auto sol = hadamard::ExtensionSolution::make(c.n, s);
    const auto shifted = hadamard::ExtensionSolution::make(c.n, s, 0.1);
    std::vector<double> res;
    std::vector<double> bad;
    for (int steps : c.steps) {
      hadamard::ResidualGrid grid;
      grid.steps = steps;
      res.push_back(hadamard::pde_residual(sol, grid));
      bad.push_back(hadamard::pde_residual(shifted, grid));
      conv.add_row({fmt(s), fmt(steps), fmt((grid.x_max - grid.x_min) / steps), fmt(res.back()), fmt(bad.back())});
    }
    double min_order = std::numeric_limits<double>::infinity();
    double shifted_order = 0.0;
    for (std::size_t i = 0; i + 1 < res.size(); ++i) {
      const double refine = std::log(static_cast<double>(c.steps[i + 1]) / c.steps[i]);
      min_order = std::min(min_order, std::log(res[i] / res[i + 1]) / refine);
      shifted_order = std::log(bad[i] / bad[i + 1]) / refine;
    }
    r.check_at_least("residual_order " + label, min_order, 1.8, "observed order of the weighted-flux residual");
    r.check_at_most("shifted_order " + label, shifted_order, 1.0,
                    "a wrong Bessel order must not converge (last observed order)");

    const auto flux = hadamard::boundary_flux(sol, c.x0, hadamard::dyadic_heights());
    for (std::size_t i = 0; i < flux.heights.size(); ++i)
      flux_table.add_row({fmt(s), fmt(flux.heights[i]), fmt(flux.values[i])});
    const double exact = std::sin(c.n * c.x0);
    r.check_at_most("flux_limit " + label, std::abs(flux.extrapolated - exact), 1e-6, "|lim y^{1-2s} v_y - sin(n x)|");

    const auto growth = hadamard::growth_table(s, c.x0, c.y0, c.n_min, c.n_max);
    for (const auto& row : growth.rows)
      growth_table.add_row({fmt(s), fmt(row.n), fmt(c.y0), fmt(row.log_abs_v), fmt(row.normalized),
                            fmt(row.asymptotic_ratio), fmt(row.usable)});
    r.check_at_most("growth_spread " + label, growth.spread, 0.05, "max/min - 1 of |v_n| e^{-n y0} n^{s+1/2}");

    double classical = 0.0;
    if (std::abs(s - 0.5) < 1e-12) {
      classical_seen = true;
      for (double x = 0.05; x < 1.0; x += 0.1) {
        for (double y = 0.1; y < 2.0; y += 0.1) {
          const double ref = std::sin(c.n * x) * std::sinh(c.n * y) / c.n;
          classical = std::max(classical, std::abs(hadamard::eval_v(sol, x, y) - ref) / (std::sinh(c.n * y) / c.n));
        }
      }
      r.check_at_most("classical_limit", classical, 1e-12, "relative difference to sin(nx) sinh(ny)/n");
    }
    per_order.push_back({{"s", s},
                         {"C_s", hadamard::cs_constant(s)},
                         {"min_order", min_order},
                         {"shifted_order", shifted_order},
                         {"flux", flux.extrapolated},
                         {"flux_correction", flux.correction},
                         {"growth_spread", growth.spread}});
  }
  if (!classical_seen) r.notes.push_back("s = 1/2 not among hadamard.orders; classical limit not checked");
  r.notes.push_back("C_s = 2^{s-1} Gamma(s) is derived from the small-argument Bessel asymptotics");
  r.results = {{"n", c.n}, {"x0", c.x0}, {"y0", c.y0}, {"orders", per_order}};
  return r;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"basis", "decay", "gamma", "instability", "approx", "hilbert", "hadamard"};
  return names;
}

std::vector<Report> run_command(const std::string& name, const RunConfig& config) {
  config.validate();
  const numkit::WorkerPool pool(config.threads);
  using Command = Report (*)(const RunConfig&, const numkit::WorkerPool&);
  const auto lookup = [](const std::string& n) -> Command {
    if (n == "basis") return cmd_basis;
    if (n == "decay") return cmd_decay;
    if (n == "gamma") return cmd_gamma;
    if (n == "instability") return cmd_instability;
    if (n == "approx") return cmd_approx;
    if (n == "hilbert") return cmd_hilbert;
    if (n == "hadamard") return cmd_hadamard;
    throw ParameterError("unknown command '" + n + "'");
  };
  std::vector<std::string> selected;
  if (name == "all")
    selected = command_names();
  else
    selected = {name};

  std::vector<Report> reports;
  for (const auto& n : selected) {
    const auto command = lookup(n);
    const auto start = std::chrono::steady_clock::now();
    Report report = command(config, pool);
    report.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.config = to_json(config);
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace calderon::cli
