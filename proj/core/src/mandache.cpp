#include "calderon/mandache.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "calderon/numkit/errors.hpp"

namespace calderon::mandache {

namespace {

double binomial(int a, int b) {
  double r = 1.0;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

// all multi-indices of length n with |alpha| <= m
std::vector<std::array<int, 3>> multi_indices(int n, int m) {
  std::vector<std::array<int, 3>> out;
  for (int a0 = 0; a0 <= m; ++a0)
    for (int a1 = 0; a1 <= (n > 1 ? m - a0 : 0); ++a1)
      for (int a2 = 0; a2 <= (n > 2 ? m - a0 - a1 : 0); ++a2) out.push_back({a0, a1, a2});
  return out;
}

}  // namespace

double sampled_cm_norm(int n, int m, const Potential::Evaluator& f, int points_per_axis) {
  if (n < 1 || n > 3) throw ParameterError("dimension n must be 1, 2 or 3");
  if (m < 0) throw ParameterError("smoothness order must be nonnegative");
  const int P = points_per_axis > 0 ? points_per_axis : (n == 1 ? 4001 : (n == 2 ? 401 : 81));
  if (P < 3) throw ParameterError("need at least 3 sample points per axis");
  const double step = 2.0 / (P - 1);
  long total = 1;
  for (int d = 0; d < n; ++d) total *= P;
  double best = 0.0;
  for (const auto& alpha : multi_indices(n, m)) {
    // tensor stencil: offsets (j - alpha_d/2) step, weights (-1)^{alpha_d - j} C(alpha_d, j) / step^{alpha_d}
    std::vector<std::pair<std::array<double, 3>, double>> stencil{{{0.0, 0.0, 0.0}, 1.0}};
    for (int d = 0; d < n; ++d) {
      std::vector<std::pair<std::array<double, 3>, double>> next;
      for (const auto& [offset, w] : stencil)
        for (int j = 0; j <= alpha[d]; ++j) {
          auto o = offset;
          o[d] = (j - 0.5 * alpha[d]) * step;
          const double sign = (alpha[d] - j) % 2 == 0 ? 1.0 : -1.0;
          next.push_back({o, w * sign * binomial(alpha[d], j) / std::pow(step, alpha[d])});
        }
      stencil = std::move(next);
    }
    std::array<double, 3> x{}, y{};
    for (long flat = 0; flat < total; ++flat) {
      long rest = flat;
      for (int d = 0; d < n; ++d) {
        x[d] = -1.0 + step * static_cast<double>(rest % P);
        rest /= P;
      }
      double value = 0.0;
      for (const auto& [offset, w] : stencil) {
        for (int d = 0; d < n; ++d) y[d] = x[d] + offset[d];
        value += w * f(std::span<const double>(y.data(), n));
      }
      best = std::max(best, std::abs(value));
    }
  }
  return best;
}

double mold_cm_norm(int n, int m) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({n, m}); it != cache.end()) return it->second;
  }
  const double value = sampled_cm_norm(n, m, dtn::standard_bump);
  std::lock_guard lock(mutex);
  cache[{n, m}] = value;
  return value;
}

BumpFamilySpec BumpFamilySpec::make(int n, int m, double eps, double beta) {
  if (n < 1 || n > 3) throw ParameterError("dimension n must be 1, 2 or 3");
  if (m < 1) throw ParameterError("smoothness order m must be at least 1");
  if (!(beta > 0.0)) throw ParameterError("C^m budget beta must be positive");
  BumpFamilySpec spec;
  spec.n = n;
  spec.m = m;
  spec.eps = eps;
  spec.beta = beta;
  spec.mu = std::pow(n, 0.5 * m) * mold_cm_norm(n, m);
  if (!(eps > 0.0 && eps < beta / spec.mu)) {
    std::ostringstream os;
    os << "amplitude eps = " << eps << " must lie in (0, beta/mu) = (0, " << beta / spec.mu << ")";
    throw ParameterError(os.str());
  }
  // guard against floor() landing one below an exact integer
  spec.N = static_cast<int>(std::floor(std::pow(beta / (spec.mu * eps), 1.0 / m) * (1.0 + 1e-12)));
  const double side = 2.0 / (spec.N * std::sqrt(static_cast<double>(n)));
  long cells = 1;
  for (int d = 0; d < n; ++d) cells *= spec.N;
  if (cells > 62) throw BudgetError("N^n = " + std::to_string(cells) + " exceeds 62 bumps");
  for (long flat = 0; flat < cells; ++flat) {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    long rest = flat;
    for (int d = 0; d < n; ++d) {
      c[d] = -1.0 / std::sqrt(static_cast<double>(n)) + (static_cast<double>(rest % spec.N) + 0.5) * side;
      rest /= spec.N;
    }
    spec.centers.push_back(c);
  }
  return spec;
}

BumpFamilySpec BumpFamilySpec::with_subdivisions(int n, int m, double eps, int N) {
  if (N < 1) throw ParameterError("subdivision count must be positive");
  const double mu = std::pow(n, 0.5 * m) * mold_cm_norm(n, m);
  return make(n, m, eps, std::pow(N + 0.5, m) * mu * eps);
}

double BumpFamilySpec::bump_radius() const { return 1.0 / (N * std::sqrt(static_cast<double>(n))); }

Potential BumpFamilySpec::member(std::uint64_t mask) const {
  if (bits() < 64 && (mask >> bits()) != 0) throw IndexError("mask selects bumps beyond N^n");
  std::vector<std::array<double, 3>> chosen;
  for (int j = 0; j < bits(); ++j)
    if ((mask >> j) & 1U) chosen.push_back(centers[j]);
  const double scale = 1.0 / bump_radius();
  auto eval = [dim = n, chosen, scale, amplitude = eps](std::span<const double> x) {
    double total = 0.0;
    std::array<double, 3> y{0.0, 0.0, 0.0};
    for (const auto& c : chosen) {
      for (int d = 0; d < dim; ++d) y[d] = scale * (x[d] - c[d]);
      total += dtn::standard_bump(std::span<const double>(y.data(), dim));
    }
    return amplitude * total;
  };
  std::ostringstream os;
  os << "bumps(eps=" << eps << ", N=" << N << ", mask=" << mask << ')';
  return Potential(n, eval, os.str(), chosen);
}

double BumpFamilySpec::log_cardinality() const { return bits() * std::log(2.0); }

double BumpFamilySpec::log_cardinality_bound() const {
  return std::pow(2.0, -n - 1) * std::pow(beta / (mu * eps), static_cast<double>(n) / m);
}

std::vector<Potential> build_discrete_set(const BumpFamilySpec& spec) {
  if (spec.bits() > 16) throw BudgetError("discrete set of 2^" + std::to_string(spec.bits()) + " members is too large");
  std::vector<Potential> out;
  const std::uint64_t count = std::uint64_t{1} << spec.bits();
  out.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) out.push_back(spec.member(mask));
  return out;
}

NetSpec net_parameters(double delta, double C, double c, int n, double R0) {
  if (!(delta > 0.0 && delta < std::exp(-1.0))) throw ParameterError("delta must lie in (0, 1/e)");
  if (!(C > 0.0 && c > 0.0 && R0 > 0.0)) throw ParameterError("decay constants and R0 must be positive");
  if (n < 1 || n > 3) throw ParameterError("dimension n must be 1, 2 or 3");
  NetSpec net;
  net.n = n;
  net.delta = delta;
  net.C = C;
  net.c = c;
  net.R0 = R0;
  auto phi = [&](int l) { return std::pow(1.0 + l, n + 2) * C * std::exp(-c * l); };
  // phi increases up to (n+2)/c - 1 and decreases afterwards
  int l = std::max(0, static_cast<int>(std::floor((n + 2) / c - 1.0)));
  while (phi(l) > delta) ++l;
  while (l > 0 && phi(l - 1) <= delta) --l;
  net.l_delta = l;
  net.delta_prime = std::pow(1.0 + l, -(n + 2)) * delta;
  for (int p = 0; p < l; ++p) net.net_terms += dtn::count_tuples(p, n);
  net.net_terms_bound = 2.0 * std::pow(l + 1.0, 2 * n + 2);
  net.grid_points = 2.0 * std::floor(R0 / net.delta_prime) + 1.0;
  net.log_net_size = static_cast<double>(net.net_terms) * std::log(net.grid_points);
  net.log_net_size_bound = net.net_terms_bound * std::log(2.0 * R0 * std::pow(1.0 + l, n + 2) / delta);
  net.log_ratio = l / std::log(1.0 / delta);
  return net;
}

GammaMatrix project_to_net(const GammaMatrix& mat, const NetSpec& net) {
  if (mat.n != net.n) throw ParameterError("net built for a different dimension");
  const double xn = mat.x_norm();
  if (xn > net.R0) {
    std::ostringstream os;
    os << "|Gamma|_X = " << xn << " exceeds R0 = " << net.R0;
    throw OutOfBallError(os.str());
  }
  GammaMatrix out = mat;
  const double top = std::floor(net.R0 / net.delta_prime);
  for (std::size_t i = 0; i < mat.indices.size(); ++i)
    for (std::size_t j = 0; j < mat.indices.size(); ++j) {
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      if (std::max(mat.indices[i].level(), mat.indices[j].level()) < net.l_delta) {
        const double steps = std::clamp(std::round(mat.entries(a, b) / net.delta_prime), -top, top);
        out.entries(a, b) = steps * net.delta_prime;
      } else {
        out.entries(a, b) = 0.0;
      }
    }
  return out;
}

namespace {

// |a - b|_X with precomputed weights
double weighted_distance(const numkit::Matrix& weights, const GammaMatrix& a, const GammaMatrix& b) {
  return (weights.array() * (a.entries - b.entries).array().abs()).maxCoeff();
}

}  // namespace

SearchResult instability_search(const Potential& q0, const BumpFamilySpec& spec, const SearchOptions& options,
                                const numkit::WorkerPool* pool) {
  if (spec.n != 1 || q0.dimension() != 1 || options.params.n != 1)
    throw ParameterError("the instability search runs in dimension one");
  const int bits = spec.bits();
  if (bits > 62) throw BudgetError("too many bumps for a bitmask enumeration");

  auto basis = std::make_shared<const poisson::ExteriorBasis>(
      poisson::ExteriorBasis::build_triangle(options.params, options.cap, pool));
  const dtn::GammaEvaluator evaluator(basis, basis->indices(), options.gamma);
  const double r0 = 0.5 * evaluator.op().lambda_min();
  if (q0.sup_norm() > 0.5 * r0) throw ParameterError("background potential exceeds r0/2");
  if (!(spec.eps < std::min(0.5 * r0, 1.0)))
    throw ParameterError("amplitude eps must stay below min(r0/2, 1)");

  // masks needed: all (exhaustive) or sampled pairs, plus single bumps and the full set
  const bool exhaustive = bits <= options.exhaustive_bits;
  const std::uint64_t full = bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
  std::map<std::uint64_t, std::size_t> slot;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  auto want = [&](std::uint64_t mask) { slot.emplace(mask, 0); };
  if (exhaustive) {
    for (std::uint64_t mask = 0; mask <= full; ++mask) want(mask);
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, full);
    while (static_cast<int>(pairs.size()) < options.sampled_pairs) {
      const auto a = pick(rng), b = pick(rng);
      if (a == b) continue;
      pairs.emplace_back(std::min(a, b), std::max(a, b));
      want(a);
      want(b);
    }
  }
  for (int j = 0; j < bits; ++j) want(std::uint64_t{1} << j);
  want(full);
  if (slot.size() + 1 > options.max_evaluations)
    throw BudgetError("search needs " + std::to_string(slot.size() + 1) + " Gamma evaluations, budget is " +
                      std::to_string(options.max_evaluations));

  std::vector<std::uint64_t> masks;
  for (auto& [mask, index] : slot) {
    index = masks.size();
    masks.push_back(mask);
  }
  std::vector<GammaMatrix> images(masks.size());
  numkit::parallel_for(pool, masks.size(),
                       [&](std::size_t i) { images[i] = evaluator.evaluate(q0 + spec.member(masks[i])); });
  const GammaMatrix base = evaluator.evaluate(q0);

  const auto& idx = evaluator.indices();
  const auto size = static_cast<Eigen::Index>(idx.size());
  numkit::Matrix weights(size, size);
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = 0; j < size; ++j) weights(i, j) = GammaMatrix::weight(1, idx[i], idx[j]);

  SearchReport report;
  report.eps = spec.eps;
  report.r0 = r0;
  report.bits = bits;
  report.log_z = spec.log_cardinality();
  report.exhaustive = exhaustive;
  report.x_distance = std::numeric_limits<double>::infinity();
  auto consider = [&](std::size_t a, std::size_t b) {
    const double d = weighted_distance(weights, images[a], images[b]);
    ++report.pairs_examined;
    if (d < report.x_distance) {
      report.x_distance = d;
      report.mask1 = masks[a];
      report.mask2 = masks[b];
    }
  };
  if (exhaustive) {
    for (std::size_t a = 0; a < masks.size(); ++a)
      for (std::size_t b = a + 1; b < masks.size(); ++b) consider(a, b);
  } else {
    for (const auto& [a, b] : pairs) consider(slot.at(a), slot.at(b));
  }

  Potential q1 = q0 + spec.member(report.mask1);
  Potential q2 = q0 + spec.member(report.mask2);
  report.linf_distance = (q1 + q2.scaled(-1.0)).sup_norm();
  report.max_offset = std::max(spec.member(report.mask1).sup_norm(), spec.member(report.mask2).sup_norm());
  const GammaMatrix gap = images[slot.at(report.mask1)] - images[slot.at(report.mask2)];
  report.op_distance = gap.op_norm();
  report.op_bound = 4.0 * report.x_distance;
  report.contraction_ratio = report.x_distance / report.linf_distance;
  for (int j = 0; j < bits; ++j)
    report.response_scale = std::max(
        report.response_scale, weighted_distance(weights, images[slot.at(std::uint64_t{1} << j)], base) / spec.eps);
  report.normalized_ratio = report.x_distance / (spec.eps * report.response_scale);

  // decay constants for the net from the strongest perturbation
  report.fit = dtn::fit_diagonal_decay(images[slot.at(full)]);
  double C = 0.0, R0 = 0.0;
  for (const auto& image : images) {
    R0 = std::max(R0, image.x_norm());
    const double top = image.entries.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < size; ++i)
      for (Eigen::Index j = 0; j < size; ++j) {
        const double a = std::abs(image.entries(i, j));
        if (a <= 1e-12 * top) continue;
        C = std::max(C, a * std::exp(report.fit.rate * std::max(idx[i].level(), idx[j].level())));
      }
  }
  const double exponent = 1.0 / ((2.0 * spec.n + 3.0) * spec.m);
  report.delta = std::exp(-std::pow(spec.eps, -spec.n * exponent));
  report.target = 8.0 * report.delta;
  report.net = net_parameters(report.delta, C, report.fit.rate, 1, R0);
  report.hypothesis_met = report.log_z > report.net.log_net_size;
  return {std::move(q1), std::move(q2), report};
}

}  // namespace calderon::mandache
