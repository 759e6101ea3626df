#include "calderon/fracpoisson.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "calderon/numkit/errors.hpp"

namespace calderon::poisson {

using numkit::SphericalHarmonicIndex;

double poisson_constant(int n, double s) {
  if (n < 1 || n > 3) throw ParameterError("dimension n must be 1, 2 or 3");
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("fractional order s must lie in (0,1)");
  const double pi = std::numbers::pi;
  return std::tgamma(0.5 * n) * std::sin(pi * s) / std::pow(pi, 0.5 * n + 1.0);
}

double decomposition_constant(int n, double s) { return poisson_constant(n, s) * numkit::sphere_area(n); }

std::string BasisIndex::str() const {
  std::ostringstream os;
  os << '(' << m << ',' << k << ',' << l << ')';
  return os.str();
}

namespace {

int degree_limit(int n, int wanted) { return n == 1 ? std::min(wanted, 1) : wanted; }

}  // namespace

std::vector<BasisIndex> triangle_indices(int n, int cap) {
  if (cap < 0) throw ParameterError("cap must be nonnegative");
  std::vector<BasisIndex> out;
  for (int m = 0; m <= degree_limit(n, cap); ++m)
    for (int k = 0; k <= cap - m; ++k)
      for (int l = 0; l < numkit::harmonic_multiplicity(n, m); ++l) out.push_back({m, k, l});
  return out;
}

std::vector<BasisIndex> rectangle_indices(int n, int m_max, int k_max) {
  if (m_max < 0 || k_max < 0) throw ParameterError("caps must be nonnegative");
  std::vector<BasisIndex> out;
  for (int m = 0; m <= degree_limit(n, m_max); ++m)
    for (int k = 0; k <= k_max; ++k)
      for (int l = 0; l < numkit::harmonic_multiplicity(n, m); ++l) out.push_back({m, k, l});
  return out;
}

ExteriorBasis::ExteriorBasis(ProblemParams params, std::vector<radial::RadialBasis> by_degree)
    : params_(params), by_degree_(std::move(by_degree)) {
  params_.validate();
  for (std::size_t m = 0; m < by_degree_.size(); ++m) {
    if (by_degree_[m].m() != static_cast<int>(m)) throw ParameterError("radial bases must be ordered by degree");
    if (by_degree_[m].spec().n != params_.n || by_degree_[m].spec().s != params_.s)
      throw ParameterError("radial basis built for different (n,s)");
  }
}

namespace {

ExteriorBasis build_with(const ProblemParams& params, int m_max, const std::function<int(int)>& k_max_of,
                         const numkit::WorkerPool* pool) {
  params.validate();
  const int top = degree_limit(params.n, m_max);
  std::vector<std::optional<radial::RadialBasis>> slots(top + 1);
  numkit::parallel_for(pool, slots.size(), [&](std::size_t m) {
    slots[m].emplace(radial::build_radial_basis(static_cast<int>(m), k_max_of(static_cast<int>(m)), params));
  });
  std::vector<radial::RadialBasis> bases;
  bases.reserve(slots.size());
  for (auto& slot : slots) bases.push_back(std::move(*slot));
  return ExteriorBasis(params, std::move(bases));
}

}  // namespace

ExteriorBasis ExteriorBasis::build_triangle(const ProblemParams& params, int cap, const numkit::WorkerPool* pool) {
  if (cap < 0) throw ParameterError("cap must be nonnegative");
  return build_with(params, cap, [cap](int m) { return cap - m; }, pool);
}

ExteriorBasis ExteriorBasis::build_rectangle(const ProblemParams& params, int m_max, int k_max,
                                             const numkit::WorkerPool* pool) {
  if (m_max < 0 || k_max < 0) throw ParameterError("caps must be nonnegative");
  return build_with(params, m_max, [k_max](int) { return k_max; }, pool);
}

bool ExteriorBasis::contains(BasisIndex idx) const {
  if (idx.m < 0 || idx.m > m_max() || idx.k < 0) return false;
  if (idx.k > by_degree_[idx.m].k_max()) return false;
  return idx.l >= 0 && idx.l <= numkit::max_order(params_.n, idx.m);
}

void ExteriorBasis::require(BasisIndex idx) const {
  if (!contains(idx)) throw DependencyError("exterior basis function " + idx.str() + " was not built");
}

const radial::RadialBasis& ExteriorBasis::radial(int m) const {
  if (m < 0 || m > m_max()) throw DependencyError("radial basis of degree " + std::to_string(m) + " was not built");
  return by_degree_[m];
}

std::vector<BasisIndex> ExteriorBasis::indices() const {
  std::vector<BasisIndex> out;
  for (int m = 0; m <= m_max(); ++m)
    for (int k = 0; k <= by_degree_[m].k_max(); ++k)
      for (int l = 0; l < numkit::harmonic_multiplicity(params_.n, m); ++l) out.push_back({m, k, l});
  return out;
}

double ExteriorBasis::radial_factor(int m, int k, double r) const {
  const auto& rb = radial(m);
  return std::pow(r, -params_.n) * std::pow(r * r - 1.0, -params_.s) * rb.eval(k, r);
}

double ExteriorBasis::value(BasisIndex idx, std::span<const double> y) const {
  require(idx);
  const int n = params_.n;
  if (static_cast<int>(y.size()) < n) throw ParameterError("point has too few components");
  double r2 = 0.0;
  for (int i = 0; i < n; ++i) r2 += y[i] * y[i];
  const double r = std::sqrt(r2);
  if (r < 2.0 || r > 3.0) return 0.0;
  std::array<double, 3> w{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) w[i] = y[i] / r;
  return radial_factor(idx.m, idx.k, r) *
         numkit::spherical_harmonic(n, {idx.m, idx.l}, std::span<const double>(w.data(), n));
}

InteriorGrid::InteriorGrid(int n, double s, int radial_nodes, int max_degree)
    : n_(n), s_(s), max_degree_(max_degree), sphere_(numkit::sphere_rule(n, 2 * std::max(max_degree, 0))) {
  if (n < 1 || n > 3) throw ParameterError("dimension n must be 1, 2 or 3");
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("fractional order s must lie in (0,1)");
  if (radial_nodes < 2) throw ParameterError("interior grid needs at least two radial nodes");
  if (max_degree < 0) throw ParameterError("harmonic degree must be nonnegative");
  const numkit::QuadRule rule = numkit::gauss_jacobi_rule({0.0, 1.0}, radial_nodes, 2.0 * s, 0.0);
  radial_nodes_ = rule.nodes;
  radial_weights_.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    radial_weights_[i] = rule.weights[i] / std::pow(1.0 - r, 2.0 * s) * std::pow(r, n - 1);
  }
}

std::array<double, 3> InteriorGrid::point(std::size_t flat) const {
  const std::size_t i = flat / sphere_size();
  const std::size_t j = flat % sphere_size();
  const auto& d = sphere_.directions[j];
  const double r = radial_nodes_[i];
  return {r * d[0], r * d[1], r * d[2]};
}

double InteriorGrid::weight(std::size_t flat) const {
  return radial_weights_[flat / sphere_size()] * sphere_.weights[flat % sphere_size()];
}

std::shared_ptr<const InteriorGrid> make_interior_grid(int n, double s, int radial_nodes, int max_degree) {
  return std::make_shared<const InteriorGrid>(n, s, radial_nodes, max_degree);
}

InteriorField::InteriorField(std::shared_ptr<const InteriorGrid> grid)
    : grid_(std::move(grid)), values_(grid_ ? grid_->size() : 0, 0.0) {
  if (!grid_) throw ParameterError("interior field needs a grid");
}

InteriorField::InteriorField(std::shared_ptr<const InteriorGrid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ParameterError("interior field needs a grid");
  if (values_.size() != grid_->size()) throw ParameterError("sample count does not match the grid");
}

double InteriorField::dot(const InteriorField& other) const {
  check_same_grid(other);
  double sum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) sum += grid_->weight(i) * values_[i] * other.values_[i];
  return sum;
}

double InteriorField::norm() const { return std::sqrt(std::max(0.0, dot(*this))); }

void InteriorField::check_same_grid(const InteriorField& other) const {
  if (grid_ != other.grid_) throw ParameterError("interior fields live on different grids");
}

InteriorField& InteriorField::operator+=(const InteriorField& other) {
  check_same_grid(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

InteriorField& InteriorField::operator-=(const InteriorField& other) {
  check_same_grid(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

InteriorField& InteriorField::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

InteriorField operator+(InteriorField a, const InteriorField& b) { return a += b; }
InteriorField operator-(InteriorField a, const InteriorField& b) { return a -= b; }
InteriorField operator*(double a, InteriorField f) { return f *= a; }

double interior_radial_factor(const ExteriorBasis& basis, int m, int k, double rt) {
  const auto& p = basis.params();
  return decomposition_constant(p.n, p.s) * std::pow(1.0 - rt * rt, p.s) * std::pow(rt, m) *
         radial::eval_F(basis.radial(m), k, rt);
}

InteriorField apply_A0_basis(const ExteriorBasis& basis, BasisIndex idx, std::shared_ptr<const InteriorGrid> grid) {
  if (!basis.contains(idx)) throw DependencyError("exterior basis function " + idx.str() + " was not built");
  if (!grid) throw ParameterError("apply_A0_basis needs a grid");
  if (grid->n() != basis.params().n || grid->s() != basis.params().s)
    throw ParameterError("grid and basis disagree on (n,s)");
  InteriorField field(grid);
  auto values = field.values();
  const auto& sphere = grid->sphere();
  std::vector<double> harmonic(sphere.size());
  for (std::size_t j = 0; j < sphere.size(); ++j)
    harmonic[j] = numkit::spherical_harmonic(grid->n(), {idx.m, idx.l}, sphere.direction(j));
  for (std::size_t i = 0; i < grid->radial_size(); ++i) {
    const double q = interior_radial_factor(basis, idx.m, idx.k, grid->radius(i));
    for (std::size_t j = 0; j < sphere.size(); ++j) values[grid->index(i, j)] = q * harmonic[j];
  }
  return field;
}

std::vector<double> apply_A0_at(const ExteriorFunction& f, const ProblemParams& params,
                                std::span<const std::array<double, 3>> points, const AnnulusOptions& options) {
  params.validate();
  const int n = params.n;
  const numkit::QuadRule radial = numkit::gauss_rule({2.0, 3.0}, options.radial_nodes);
  const numkit::SphereRule sphere = numkit::sphere_rule(n, options.angular_degree);
  struct Source {
    std::array<double, 3> y;
    double mass;
  };
  std::vector<Source> sources;
  sources.reserve(radial.size() * sphere.size());
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double r = radial.nodes[i];
    for (std::size_t j = 0; j < sphere.size(); ++j) {
      const auto& d = sphere.directions[j];
      const std::array<double, 3> y{r * d[0], r * d[1], r * d[2]};
      const double fy = f(std::span<const double>(y.data(), n));
      if (!std::isfinite(fy)) throw NumericError("exterior function is not finite on the annulus");
      const double mass = radial.weights[i] * sphere.weights[j] * std::pow(r, n - 1) *
                          std::pow(r * r - 1.0, -params.s) * fy;
      if (mass != 0.0) sources.push_back({y, mass});
    }
  }
  const double c = poisson_constant(n, params.s);
  std::vector<double> out(points.size(), 0.0);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto& x = points[p];
    double x2 = 0.0;
    for (int i = 0; i < n; ++i) x2 += x[i] * x[i];
    if (!(x2 < 1.0)) throw ParameterError("A0 is evaluated only at interior points |x| < 1");
    double sum = 0.0;
    for (const auto& src : sources) {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) d2 += (x[i] - src.y[i]) * (x[i] - src.y[i]);
      sum += src.mass * std::pow(d2, -0.5 * n);
    }
    out[p] = c * std::pow(1.0 - x2, params.s) * sum;
  }
  return out;
}

InteriorField apply_A0_general(const ExteriorFunction& f, const ProblemParams& params,
                               std::shared_ptr<const InteriorGrid> grid, const AnnulusOptions& options) {
  if (!grid) throw ParameterError("apply_A0_general needs a grid");
  if (grid->n() != params.n) throw ParameterError("grid dimension differs from params");
  std::vector<std::array<double, 3>> points(grid->size());
  for (std::size_t i = 0; i < points.size(); ++i) points[i] = grid->point(i);
  return InteriorField(grid, apply_A0_at(f, params, points, options));
}

DecayReport decay_report(int cap, const ProblemParams& params, const DecayOptions& options,
                         const numkit::WorkerPool* pool) {
  params.validate();
  const ExteriorBasis basis = ExteriorBasis::build_triangle(params, cap, pool);
  const auto grid = make_interior_grid(params.n, params.s, options.radial_nodes, std::max(cap, 1));
  const auto indices = triangle_indices(params.n, cap);
  DecayReport report;
  report.n = params.n;
  report.s = params.s;
  report.cap = cap;
  report.c_ns = decomposition_constant(params.n, params.s);
  report.rows.resize(indices.size());
  numkit::parallel_for(pool, indices.size(), [&](std::size_t i) {
    const BasisIndex idx = indices[i];
    report.rows[i] = {idx, apply_A0_basis(basis, idx, grid).norm(), report.c_ns * std::ldexp(1.0, -idx.level())};
  });
  std::vector<double> x, y;
  for (const auto& row : report.rows) {
    report.max_ratio = std::max(report.max_ratio, row.norm / row.bound);
    if (row.norm > row.bound) report.all_within_bound = false;
    if (row.norm > 0.0) {
      x.push_back(row.idx.level());
      y.push_back(std::log(row.norm));
    }
  }
  if (x.size() >= 2 && cap >= 1) report.fit = numkit::fit_line(x, y);
  return report;
}

VpResult make_vp(int p, const ExteriorBasis& basis, std::shared_ptr<const InteriorGrid> grid) {
  if (basis.params().n == 1)
    throw ParameterError("v_p needs harmonics of degree p >= 2, which do not exist for n = 1; "
                         "use the one-dimensional control experiment of the Hilbert-transform module");
  if (p < 2) throw ParameterError("v_p is defined for p >= 2");
  InteriorField u = apply_A0_basis(basis, {p, 0, 0}, std::move(grid));
  const double norm = u.norm();
  if (!(norm > 0.0)) throw NumericError("u_{p,0,0} vanishes on the grid");
  u *= 1.0 / norm;
  return {std::move(u), 1.0 / norm};
}

}  // namespace calderon::poisson
