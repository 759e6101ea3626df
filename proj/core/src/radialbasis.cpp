#include "calderon/radialbasis.hpp"

#include <cmath>
#include <string>

#include "calderon/numkit/errors.hpp"

namespace calderon::radial {

using numkit::Interval;
using numkit::QuadRule;

double WeightedSpaceSpec::weight(double r) const {
  return std::pow(r, -(n + 1)) * std::pow(r * r - 1.0, -2.0 * s);
}

int generator_start(int m) { return m == 0 ? 1 : m; }

int hidden_generators(int m) { return m == 0 ? 0 : 1; }

Wide RadialProfile::eval_wide(const Wide& r) const {
  Wide inv = Wide(1) / r;
  Wide power = Wide(1);
  for (int e = 0; e < generator_start(m); ++e) power *= inv;
  Wide sum = coeffs.empty() ? Wide(0) : coeffs[0];
  for (std::size_t j = 1; j < coeffs.size(); ++j) {
    sum += coeffs[j] * power;
    power *= inv;
  }
  return sum;
}

double RadialProfile::eval_exact(double r) const { return numkit::to_double(eval_wide(Wide(r))); }

namespace {

struct BuildOutput {
  std::vector<RadialProfile> profiles;
  BasisDiagnostics diagnostics;
};

void check_spec(const ProblemParams& params) {
  params.validate();
}

// Modified Gram-Schmidt with one reorthogonalization pass on the generators
// sampled at Gauss nodes and scaled by the square-root weights.
template <class Real>
BuildOutput build_impl(int m, int k_max, const ProblemParams& params, int bits) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  std::vector<Real> x, w;
  numkit::gauss_legendre<Real>(params.quad_nodes, x, w);
  const std::size_t N = x.size();
  const Real s = Real(params.s);
  std::vector<Real> r(N), sw(N), wt(N);
  for (std::size_t i = 0; i < N; ++i) {
    r[i] = Real(5) / Real(2) + x[i] / Real(2);
    const Real weight = pow(r[i], Real(-(params.n + 1))) * pow(r[i] * r[i] - Real(1), Real(-2) * s);
    wt[i] = w[i] / Real(2) * weight;
    sw[i] = sqrt(wt[i]);
  }
  const int start = generator_start(m);
  const int hidden = hidden_generators(m);
  const int K = k_max + 1 + hidden;  // generators processed
  auto generator = [&](int j, std::size_t i) -> Real {
    if (j == 0) return Real(1);
    return pow(r[i], Real(-(start + j - 1)));
  };
  auto dot = [N](const std::vector<Real>& a, const std::vector<Real>& b) {
    Real sum = Real(0);
    for (std::size_t i = 0; i < N; ++i) sum += a[i] * b[i];
    return sum;
  };

  const double budget = std::pow(10.0, numkit::decimal_digits(bits) - 12);
  std::vector<std::vector<Real>> q;      // weighted samples of orthonormal profiles
  std::vector<std::vector<Real>> coef;   // generator coefficients of each profile
  BuildOutput out;
  double estimate = 1.0;
  for (int k = 0; k < K; ++k) {
    std::vector<Real> v(N);
    for (std::size_t i = 0; i < N; ++i) v[i] = sw[i] * generator(k, i);
    const Real gnorm = sqrt(dot(v, v));
    for (auto& vi : v) vi /= gnorm;
    std::vector<Real> c(K, Real(0));
    c[k] = Real(1) / gnorm;
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        const Real h = dot(q[j], v);
        for (std::size_t i = 0; i < N; ++i) v[i] -= h * q[j][i];
        for (int t = 0; t < K; ++t) c[t] -= h * coef[j][t];
      }
    }
    const Real rnorm = sqrt(dot(v, v));
    estimate = std::max(estimate, 1.0 / numkit::to_double(rnorm));
    const int profile_k = k == 0 ? 0 : std::max(1, k - hidden);
    if (k == 0 || k > hidden) out.diagnostics.condition_estimates.push_back(estimate);
    if (!(estimate <= budget)) throw ConditioningError(profile_k, estimate, budget);
    const Real sign = c[k] < Real(0) ? Real(-1) : Real(1);
    for (auto& vi : v) vi *= sign / rnorm;
    for (auto& ct : c) ct *= sign / rnorm;
    q.push_back(std::move(v));
    coef.push_back(std::move(c));
  }

  // generator index of profile k
  auto source = [hidden](int k) { return k == 0 ? 0 : k + hidden; };
  double gram = 0.0;
  for (int a = 0; a <= k_max; ++a)
    for (int b = 0; b <= a; ++b) {
      const Real g = dot(q[source(a)], q[source(b)]) - Real(a == b ? 1 : 0);
      gram = std::max(gram, std::abs(numkit::to_double(g)));
    }
  double moment_res = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    for (int j = 0; j <= vanishing_order(k); ++j) {
      Real sum = Real(0);
      for (std::size_t i = 0; i < N; ++i) sum += sw[i] * q[source(k)][i] * pow(r[i], Real(-(m + 2 * j)));
      moment_res = std::max(moment_res, std::abs(numkit::to_double(sum)));
    }
  }
  out.diagnostics.gram_residual = gram;
  out.diagnostics.moment_residual = moment_res;
  out.diagnostics.precision_bits = bits;
  for (int k = 0; k <= k_max; ++k) {
    RadialProfile p;
    p.m = m;
    p.k = k;
    const int g = source(k);
    for (int t = 0; t <= g; ++t) {
      if constexpr (std::is_same_v<Real, double>) {
        p.coeffs.emplace_back(coef[g][t]);
      } else {
        p.coeffs.push_back(static_cast<Wide>(coef[g][t]));
      }
    }
    out.profiles.push_back(std::move(p));
  }
  return out;
}

}  // namespace

RadialBasis::RadialBasis(WeightedSpaceSpec spec, int m, std::vector<RadialProfile> profiles,
                         BasisDiagnostics diagnostics, int quad_nodes)
    : spec_(spec),
      m_(m),
      profiles_(std::move(profiles)),
      diagnostics_(std::move(diagnostics)),
      rule_(numkit::gauss_rule(Interval{2.0, 3.0}, quad_nodes)) {
  if (profiles_.empty()) throw ParameterError("radial basis needs at least one profile");
  const std::size_t N = rule_.size();
  bary_weights_.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double x = 2.0 * (rule_.nodes[i] - 2.5);
    const double w = 2.0 * rule_.weights[i];
    bary_weights_[i] = ((i % 2 == 0) ? 1.0 : -1.0) * std::sqrt((1.0 - x * x) * w);
  }
  values_.resize(profiles_.size());
  for (std::size_t k = 0; k < profiles_.size(); ++k) {
    if (profiles_[k].k != static_cast<int>(k) || profiles_[k].m != m_)
      throw ParameterError("radial profiles must be ordered by k with a common m");
    values_[k].resize(N);
    for (std::size_t i = 0; i < N; ++i) values_[k][i] = profiles_[k].eval_exact(rule_.nodes[i]);
  }
}

const RadialProfile& RadialBasis::profile(int k) const {
  if (k < 0 || k > k_max()) throw IndexError("radial index k=" + std::to_string(k) + " not built");
  return profiles_[k];
}

std::span<const double> RadialBasis::node_values(int k) const {
  if (k < 0 || k > k_max()) throw IndexError("radial index k=" + std::to_string(k) + " not built");
  return values_[k];
}

double RadialBasis::eval(int k, double r) const {
  const auto vals = node_values(k);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double d = r - rule_.nodes[i];
    if (d == 0.0) return vals[i];
    const double t = bary_weights_[i] / d;
    num += t * vals[i];
    den += t;
  }
  return num / den;
}

double inner_product_s(const std::function<double(double)>& f, const std::function<double(double)>& g,
                       const ProblemParams& params) {
  params.validate();
  const WeightedSpaceSpec spec = WeightedSpaceSpec::from(params);
  const QuadRule rule = numkit::gauss_rule(Interval{2.0, 3.0}, params.quad_nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    const double v = f(r) * g(r);
    if (!std::isfinite(v)) throw NumericError("inner_product_s: non-finite integrand at r=" + std::to_string(r));
    sum += rule.weights[i] * spec.weight(r) * v;
  }
  return sum;
}

RadialBasis build_radial_basis(int m, int k_max, const ProblemParams& params) {
  check_spec(params);
  if (m < 0) throw ParameterError("degree m must be nonnegative");
  if (k_max < 0) throw ParameterError("k_max must be nonnegative");
  const int bits = numkit::precision_bucket(params.precision_bits);
  BuildOutput out = numkit::dispatch_precision(bits, [&]<class Real>() {
    return build_impl<Real>(m, k_max, params, bits);
  });
  return RadialBasis(WeightedSpaceSpec::from(params), m, std::move(out.profiles), std::move(out.diagnostics),
                     params.quad_nodes);
}

int max_resolvable_k(int m, int k_limit, const ProblemParams& params) {
  try {
    build_radial_basis(m, k_limit, params);
    return k_limit;
  } catch (const ConditioningError& e) {
    return e.failing_k() - 1;
  }
}

int vanishing_order(int k) {
  if (k <= 0) return -1;
  return (k % 2 == 1) ? (k - 1) / 2 : k / 2 - 1;
}

double moment(const RadialBasis& basis, int k, int j) {
  if (j < 0) throw ParameterError("moment order must be nonnegative");
  const auto vals = basis.node_values(k);
  const auto& rule = basis.rule();
  const int e = basis.m() + 2 * j;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    sum += rule.weights[i] * basis.spec().weight(r) * vals[i] * std::pow(r, -e);
  }
  return sum;
}

double eval_F(const RadialBasis& basis, int k, double rt) {
  if (!(rt >= 0.0 && rt < 1.0)) throw ParameterError("eval_F needs 0 <= r < 1");
  const auto vals = basis.node_values(k);
  const auto& rule = basis.rule();
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    sum += rule.weights[i] * basis.spec().weight(r) * vals[i] * std::pow(r, -basis.m()) /
           (1.0 - rt * rt / (r * r));
  }
  return sum;
}

double eval_F_series(const RadialBasis& basis, int k, double rt, int terms) {
  if (!(rt >= 0.0 && rt < 1.0)) throw ParameterError("eval_F_series needs 0 <= r < 1");
  double sum = 0.0;
  double power = 1.0;
  for (int j = 0; j < terms; ++j) {
    sum += power * moment(basis, k, j);
    power *= rt * rt;
  }
  return sum;
}

}  // namespace calderon::radial
