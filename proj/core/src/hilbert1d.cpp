#include "calderon/hilbert1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "calderon/fracpoisson.hpp"
#include "calderon/numkit/errors.hpp"
#include "calderon/numkit/fit.hpp"

namespace calderon::hilbert {

namespace {

// barycentric weights of a Gauss-Legendre rule
std::vector<double> barycentric_weights(const numkit::QuadRule& rule) {
  const double half = 0.5 * rule.interval.length();
  const double mid = 0.5 * (rule.interval.a + rule.interval.b);
  std::vector<double> w(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = (rule.nodes[i] - mid) / half;
    w[i] = (i % 2 == 0 ? 1.0 : -1.0) * std::sqrt((1.0 - x * x) * rule.weights[i] / half);
  }
  return w;
}

double interpolate(const numkit::QuadRule& rule, const std::vector<double>& bary, const Vector& values, double x) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double d = x - rule.nodes[i];
    if (d == 0.0) return values(static_cast<Eigen::Index>(i));
    const double c = bary[i] / d;
    num += c * values(static_cast<Eigen::Index>(i));
    den += c;
  }
  return num / den;
}

Matrix differentiation_matrix(const numkit::QuadRule& rule) {
  const auto w = barycentric_weights(rule);
  const auto n = static_cast<Eigen::Index>(rule.size());
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (w[j] / w[i]) / (rule.nodes[i] - rule.nodes[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

double weighted_norm(const numkit::QuadRule& rule, const std::vector<double>& values) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * values[i] * values[i];
  return std::sqrt(sum);
}

double hilbert_constant(double s) { return poisson::poisson_constant(1, s); }

}  // namespace

double TruncatedHT::forward(const std::function<double(double)>& f, double t) const {
  return source.integrate([&](double y) { return f(y) / (t - y); });
}

double TruncatedHT::adjoint(const std::function<double(double)>& g, double y) const {
  return target.integrate([&](double t) { return g(t) / (y - t); });
}

TruncatedHT build_ht(int target_nodes, int source_nodes) {
  if (target_nodes < 32 || source_nodes < 32) throw ParameterError("the truncated Hilbert transform needs at least 32 nodes per interval");
  TruncatedHT ht;
  ht.target = numkit::gauss_rule({-1.0, 1.0}, target_nodes);
  ht.source = numkit::gauss_rule({2.0, 3.0}, source_nodes);
  ht.matrix.resize(target_nodes, source_nodes);
  for (int i = 0; i < target_nodes; ++i)
    for (int j = 0; j < source_nodes; ++j) ht.matrix(i, j) = ht.source.weights[j] / (ht.target.nodes[i] - ht.source.nodes[j]);
  return ht;
}

HtSvd::HtSvd(TruncatedHT ht, std::vector<SvdTriple> triples, int requested, int resolvable)
    : ht_(std::move(ht)), triples_(std::move(triples)), requested_(requested), resolvable_(resolvable) {
  if (static_cast<int>(triples_.size()) < requested_) {
    std::ostringstream os;
    os << "requested " << requested_ << " singular triples, only " << triples_.size()
       << " lie above the noise floor";
    warning_ = os.str();
  }
}

const SvdTriple& HtSvd::triple(int l) const {
  if (l < 0 || l >= static_cast<int>(triples_.size())) throw IndexError("singular triple " + std::to_string(l) + " is not available");
  return triples_[static_cast<std::size_t>(l)];
}

double HtSvd::f_at(int l, double y) const {
  return interpolate(ht_.source, barycentric_weights(ht_.source), triple(l).f, y);
}

double HtSvd::g_at(int l, double t) const {
  return interpolate(ht_.target, barycentric_weights(ht_.target), triple(l).g, t);
}

double HtSvd::fhat_at(int l, double y, double s) const { return std::pow(y * y - 1.0, s) * f_at(l, y); }

double HtSvd::ghat_at(int l, double t, double s) const { return std::pow(1.0 - t * t, s) * g_at(l, t); }

HtSvd ht_svd(const TruncatedHT& ht, int count) {
  if (count < 1) throw ParameterError("need at least one singular triple");
  const auto nt = static_cast<Eigen::Index>(ht.target.size());
  const auto ny = static_cast<Eigen::Index>(ht.source.size());
  Vector wt(nt), wy(ny);
  for (Eigen::Index i = 0; i < nt; ++i) wt(i) = std::sqrt(ht.target.weights[i]);
  for (Eigen::Index j = 0; j < ny; ++j) wy(j) = std::sqrt(ht.source.weights[j]);
  // D_t^{1/2} K D_y^{1/2} with K_ij = 1/(t_i - y_j)
  const Matrix b = wt.asDiagonal() * ht.matrix * wy.cwiseInverse().asDiagonal();
  const auto factors = numkit::svd(b);
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * factors.sigma(0);
  int resolvable = 0;
  while (resolvable < factors.sigma.size() && factors.sigma(resolvable) > floor) ++resolvable;
  const int kept = std::min(count, resolvable);

  // refined rules for the residuals
  const auto fine_t = numkit::gauss_rule({-1.0, 1.0}, static_cast<int>(2 * nt));
  const auto fine_y = numkit::gauss_rule({2.0, 3.0}, static_cast<int>(2 * ny));
  const auto bary_t = barycentric_weights(ht.target);
  const auto bary_y = barycentric_weights(ht.source);

  std::vector<SvdTriple> triples;
  for (int l = 0; l < kept; ++l) {
    SvdTriple tr;
    tr.l = l;
    tr.sigma = factors.sigma(l);
    tr.g = factors.U.col(l).cwiseQuotient(wt);
    tr.f = factors.V.col(l).cwiseQuotient(wy);
    if (tr.f.sum() < 0.0) {  // fix the sign pairwise
      tr.f = -tr.f;
      tr.g = -tr.g;
    }
    std::vector<double> f_fine(fine_y.size()), g_fine(fine_t.size());
    for (std::size_t j = 0; j < fine_y.size(); ++j) f_fine[j] = interpolate(ht.source, bary_y, tr.f, fine_y.nodes[j]);
    for (std::size_t i = 0; i < fine_t.size(); ++i) g_fine[i] = interpolate(ht.target, bary_t, tr.g, fine_t.nodes[i]);
    std::vector<double> forward(fine_t.size()), backward(fine_y.size());
    for (std::size_t i = 0; i < fine_t.size(); ++i) {
      double h = 0.0;
      for (std::size_t j = 0; j < fine_y.size(); ++j) h += fine_y.weights[j] * f_fine[j] / (fine_t.nodes[i] - fine_y.nodes[j]);
      forward[i] = h - tr.sigma * g_fine[i];
    }
    for (std::size_t j = 0; j < fine_y.size(); ++j) {
      double h = 0.0;
      for (std::size_t i = 0; i < fine_t.size(); ++i) h += fine_t.weights[i] * g_fine[i] / (fine_y.nodes[j] - fine_t.nodes[i]);
      backward[j] = h + tr.sigma * f_fine[j];
    }
    tr.residual = weighted_norm(fine_t, forward);
    tr.adjoint_residual = weighted_norm(fine_y, backward);
    triples.push_back(std::move(tr));
  }
  return HtSvd(ht, std::move(triples), count, resolvable);
}

double sl_coefficient(double x) { return (x - 1.0) * (x + 1.0) * (x - 2.0) * (x - 3.0); }

SturmLiouvilleReport sturm_liouville_check(const HtSvd& svd, int l, double margin) {
  const auto& tr = svd.triple(l);
  const auto& rule = svd.ht().source;
  const Matrix d = differentiation_matrix(rule);
  const auto n = static_cast<Eigen::Index>(rule.size());
  Vector flux = d * tr.f;
  for (Eigen::Index i = 0; i < n; ++i) flux(i) *= sl_coefficient(rule.nodes[i]);
  Vector lf = d * flux;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = rule.nodes[i];
    lf(i) += 2.0 * (x - 1.25) * (x - 1.25) * tr.f(i);
  }
  double ff = 0.0, flf = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = rule.nodes[i];
    if (x < 2.0 + margin || x > 3.0 - margin) continue;
    ff += rule.weights[i] * tr.f(i) * tr.f(i);
    flf += rule.weights[i] * tr.f(i) * lf(i);
  }
  if (ff == 0.0) throw NumericError("no interior nodes for the Sturm-Liouville check");
  SturmLiouvilleReport report;
  report.l = l;
  report.lambda = flf / ff;
  double res = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = rule.nodes[i];
    if (x < 2.0 + margin || x > 3.0 - margin) continue;
    const double r = lf(i) - report.lambda * tr.f(i);
    res += rule.weights[i] * r * r;
  }
  report.residual = std::sqrt(res) / (std::abs(report.lambda) * std::sqrt(ff));
  report.noisy = report.residual > 0.1;
  return report;
}

namespace {

std::vector<double> kernel_side(const std::function<double(double)>& g, double s, const numkit::QuadRule& points,
                                int kernel_nodes) {
  ProblemParams params;
  params.n = 1;
  params.s = s;
  const poisson::ExteriorFunction data = [&g](std::span<const double> y) {
    return y[0] >= 2.0 && y[0] <= 3.0 ? g(y[0]) : 0.0;
  };
  std::vector<std::array<double, 3>> xs;
  for (double x : points.nodes) xs.push_back({x, 0.0, 0.0});
  return poisson::apply_A0_at(data, params, xs, {kernel_nodes, 1});
}

}  // namespace

IdentityCheck ht_frac_identity(const std::function<double(double)>& g, double s, const IdentityOptions& options) {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("fractional order s must lie in (0,1)");
  const auto points = numkit::gauss_rule({-1.0, 1.0}, options.evaluation_nodes);
  const auto source = numkit::gauss_rule({2.0, 3.0}, options.transform_nodes);
  const auto lhs = kernel_side(g, s, points, options.kernel_nodes);
  std::vector<double> transformed(points.size()), diff(points.size());
  const double c = hilbert_constant(s);
  double dot = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points.nodes[i];
    const double h = source.integrate([&](double y) { return std::pow(y * y - 1.0, -s) * g(y) / (x - y); });
    transformed[i] = -std::pow(1.0 - x * x, s) * h;
    diff[i] = lhs[i] - c * transformed[i];
    dot += points.weights[i] * lhs[i] * transformed[i];
  }
  const double lhs_norm = weighted_norm(points, lhs);
  if (lhs_norm == 0.0) throw NumericError("A0 g vanishes; the identity check is undefined");
  IdentityCheck out;
  out.discrepancy = weighted_norm(points, diff) / lhs_norm;
  out.cosine = dot / (lhs_norm * weighted_norm(points, transformed));
  return out;
}

double singular_identity_defect(const HtSvd& svd, int l, double s, const IdentityOptions& options) {
  const auto points = numkit::gauss_rule({-1.0, 1.0}, options.evaluation_nodes);
  const auto lhs = kernel_side([&](double y) { return svd.fhat_at(l, y, s); }, s, points, options.kernel_nodes);
  const double c = hilbert_constant(s);
  const double sigma = svd.triple(l).sigma;
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double rhs = -c * sigma * svd.ghat_at(l, points.nodes[i], s);
    worst = std::max(worst, std::abs(lhs[i] - rhs));
    scale = std::max(scale, std::abs(rhs));
  }
  return worst / scale;
}

NormEquivalence weighted_norm_equivalence(double gamma, int samples, std::uint64_t seed, int nodes) {
  if (samples < 1) throw ParameterError("need at least one sample");
  const auto rule = numkit::gauss_rule({2.0, 3.0}, nodes);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> spot(2.0, 3.0);
  NormEquivalence out;
  out.gamma = gamma;
  out.c1 = std::numeric_limits<double>::infinity();
  const double w2 = std::pow(3.0, -gamma), w3 = std::pow(8.0, -gamma);
  out.inf_weight = std::min(w2, w3);
  out.sup_weight = std::max(w2, w3);
  for (int k = 0; k < samples; ++k) {
    // random trigonometric polynomial, sometimes localized near a random point
    std::array<double, 11> a{};
    for (double& v : a) v = normal(rng);
    const double center = spot(rng);
    const double width = k % 2 == 0 ? 1e3 : 0.05 + 0.5 * std::abs(normal(rng));
    double plain = 0.0, weighted = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double y = rule.nodes[i];
      double f = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) f += a[j] * std::cos(std::numbers::pi * j * (y - 2.0));
      f *= std::exp(-std::pow((y - center) / width, 2));
      plain += rule.weights[i] * f * f;
      weighted += rule.weights[i] * std::pow(y * y - 1.0, 2.0 * gamma) * f * f;
    }
    const double ratio = std::sqrt(plain / weighted);
    out.c1 = std::min(out.c1, ratio);
    out.c2 = std::max(out.c2, ratio);
  }
  out.within_third_to_three = out.c1 > 1.0 / 3.0 && out.c2 < 3.0;
  return out;
}

ControlGrowth control_growth_1d(const HtSvd& svd, int k_max, double s, double rel_tol) {
  if (k_max < 1) throw ParameterError("k_max must be at least 1");
  if (k_max >= static_cast<int>(svd.triples().size()))
    throw ParameterError("k_max = " + std::to_string(k_max) + " exceeds the resolved singular triples");
  const auto& ht = svd.ht();
  const auto nt = static_cast<Eigen::Index>(ht.target.size());
  const auto ny = static_cast<Eigen::Index>(ht.source.size());
  const double c = hilbert_constant(s);
  // coordinates: x = D_y^{1/2} f, residual in D_t^{1/2} (1-t^2)^{-s} (A0 f - g^_k)
  Matrix t_op(nt, ny);
  double c1 = std::numeric_limits<double>::infinity(), c2 = 0.0;
  for (Eigen::Index j = 0; j < ny; ++j) {
    const double y = ht.source.nodes[j];
    const double w = std::pow(y * y - 1.0, s);
    c1 = std::min(c1, w);
    c2 = std::max(c2, w);
    for (Eigen::Index i = 0; i < nt; ++i)
      t_op(i, j) = -c * std::sqrt(ht.target.weights[i]) * ht.matrix(i, j) / (std::sqrt(ht.source.weights[j]) * w);
  }
  const auto factors = numkit::svd(t_op);
  ControlGrowth out;
  out.s = s;
  std::vector<double> ks, log_norm, log_sigma;
  for (int k = 1; k <= k_max; ++k) {
    const auto& tr = svd.triple(k);
    Vector rhs(nt);
    for (Eigen::Index i = 0; i < nt; ++i) rhs(i) = std::sqrt(ht.target.weights[i]) * tr.g(i);
    const double budget = 1.0 / k;
    ControlRow row;
    row.degenerate = rhs.norm() <= budget * (1.0 + 1e-10);
    const auto sol = row.degenerate ? numkit::MinNormSolution{{}, 0.0, rhs.norm(), 0.0}
                                    : numkit::min_norm_within(factors, rhs, budget, rel_tol);
    row.k = k;
    row.sigma = tr.sigma;
    row.norm = sol.norm;
    row.inv_sigma = 1.0 / tr.sigma;
    row.scaled = sol.norm * c * tr.sigma;
    row.band_low = c1 * (1.0 - budget);
    row.band_high = c2;
    row.residual = sol.residual;
    row.within_band = row.scaled >= row.band_low && row.scaled <= row.band_high;
    if (!row.degenerate) {
      ks.push_back(k);
      log_norm.push_back(std::log(row.norm));
      log_sigma.push_back(std::log(row.sigma));
    }
    out.rows.push_back(row);
  }
  if (ks.size() >= 2) {
    out.norm_slope = numkit::fit_line(ks, log_norm).slope;
    out.sigma_slope = numkit::fit_line(ks, log_sigma).slope;
  }
  return out;
}

}  // namespace calderon::hilbert
