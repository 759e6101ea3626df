#include <cmath>
#include <numbers>
#include <sstream>

#include "calderon/dtn.hpp"
#include "calderon/numkit/errors.hpp"
#include "calderon/numkit/harmonics.hpp"
#include "calderon/numkit/quadrature.hpp"

namespace calderon::dtn {

double standard_bump(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  if (r2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r2));
}

Potential::Potential(int n, Evaluator eval, std::string descriptor, std::vector<std::array<double, 3>> peaks)
    : n_(n), eval_(std::move(eval)), descriptor_(std::move(descriptor)), peaks_(std::move(peaks)) {
  if (n < 1 || n > 3) throw ParameterError("potential dimension must be 1, 2 or 3");
  if (!eval_) throw ParameterError("potential needs an evaluator");
  sup_ = sampled_sup(n_, eval_, peaks_);
}

Potential Potential::zero(int n) {
  return Potential(n, [](std::span<const double>) { return 0.0; }, "zero");
}

Potential Potential::bump(int n, double amplitude, std::array<double, 3> center, double radius) {
  if (!(radius > 0.0)) throw ParameterError("bump radius must be positive");
  std::ostringstream os;
  os << "bump(amplitude=" << amplitude << ", center=(" << center[0];
  for (int i = 1; i < n; ++i) os << ',' << center[i];
  os << "), radius=" << radius << ')';
  auto eval = [n, amplitude, center, radius](std::span<const double> x) {
    std::array<double, 3> y{0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) y[i] = (x[i] - center[i]) / radius;
    return amplitude * standard_bump(std::span<const double>(y.data(), n));
  };
  return Potential(n, eval, os.str(), {center});
}

double Potential::operator()(double x) const {
  if (n_ != 1) throw ParameterError("scalar evaluation needs a one-dimensional potential");
  return eval_(std::span<const double>(&x, 1));
}

Potential Potential::operator+(const Potential& other) const {
  if (other.n_ != n_) throw ParameterError("potentials of different dimension");
  auto a = eval_;
  auto b = other.eval_;
  auto peaks = peaks_;
  peaks.insert(peaks.end(), other.peaks_.begin(), other.peaks_.end());
  return Potential(n_, [a, b](std::span<const double> x) { return a(x) + b(x); },
                   descriptor_ + " + " + other.descriptor_, std::move(peaks));
}

Potential Potential::scaled(double a) const {
  auto f = eval_;
  std::ostringstream os;
  os << a << " * (" << descriptor_ << ')';
  return Potential(n_, [f, a](std::span<const double> x) { return a * f(x); }, os.str(), peaks_);
}

double sampled_sup(int n, const Potential::Evaluator& f, std::span<const std::array<double, 3>> extra) {
  const int per_axis = n == 1 ? 20001 : (n == 2 ? 401 : 81);
  double sup = 0.0;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::array<int, 3> i{0, 0, 0};
  const int total = static_cast<int>(std::pow(per_axis, n));
  for (int flat = 0; flat < total; ++flat) {
    int rest = flat;
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) {
      i[d] = rest % per_axis;
      rest /= per_axis;
      x[d] = -1.0 + 2.0 * i[d] / (per_axis - 1);
      r2 += x[d] * x[d];
    }
    if (r2 >= 1.0) continue;
    sup = std::max(sup, std::abs(f(std::span<const double>(x.data(), n))));
  }
  for (const auto& p : extra) sup = std::max(sup, std::abs(f(std::span<const double>(p.data(), n))));
  return sup;
}

double frac_laplacian_constant(double s) {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("fractional order s must lie in (0,1)");
  return s * std::pow(4.0, s) * std::tgamma(0.5 + s) / (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - s));
}

namespace {

// Toeplitz symbol of the P1 stiffness matrix on a uniform mesh: closed form of
// (1/2pi) int |xi|^{2s} |hat phi|^2 cos(xi k h) through the Riesz potential of |x|^{3-2s}.
std::vector<double> stiffness_symbol(double s, double h, int count) {
  std::vector<double> a(count);
  auto fourth_difference = [](const auto& g, int k) {
    return g(k - 2) - 4.0 * g(k - 1) + 6.0 * g(k) - 4.0 * g(k + 1) + g(k + 2);
  };
  if (std::abs(s - 0.5) < 1e-7) {
    auto g = [](int x) {
      const double ax = std::abs(static_cast<double>(x));
      return ax > 0.0 ? ax * ax * std::log(ax) : 0.0;
    };
    for (int k = 0; k < count; ++k) a[k] = fourth_difference(g, k) / (2.0 * std::numbers::pi);
    return a;
  }
  const double q = 3.0 - 2.0 * s;
  const double t = 1.0 - s;
  const double riesz = std::tgamma(0.5 - t) / (std::pow(2.0, 2.0 * t) * std::sqrt(std::numbers::pi) * std::tgamma(t));
  const double scale = -riesz * std::pow(h, 1.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s));
  auto g = [q](int x) { return std::pow(std::abs(static_cast<double>(x)), q); };
  for (int k = 0; k < count; ++k) a[k] = scale * fourth_difference(g, k);
  return a;
}

}  // namespace

DiscreteFracOp::DiscreteFracOp(Mesh1D mesh, double s) : mesh_(mesh), s_(s) {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("fractional order s must lie in (0,1)");
  if (mesh.elements < 4) throw ParameterError("mesh needs at least 4 elements");
  const int N = mesh.unknowns();
  const double h = mesh.h();
  const auto symbol = stiffness_symbol(s, h, N);
  stiffness_.resize(N, N);
  mass_ = Matrix::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) stiffness_(i, j) = symbol[std::abs(i - j)];
    mass_(i, i) = 2.0 * h / 3.0;
    if (i + 1 < N) mass_(i, i + 1) = mass_(i + 1, i) = h / 6.0;
  }
  // inverse iteration for the smallest generalized eigenvalue
  Eigen::LLT<Matrix> llt(stiffness_);
  if (llt.info() != Eigen::Success) throw NumericError("fractional stiffness matrix is not positive definite");
  Vector x = Vector::Ones(N);
  double lambda = 0.0;
  for (int iter = 0; iter < 1000; ++iter) {
    Vector y = llt.solve(mass_ * x);
    y /= std::sqrt(y.dot(mass_ * y));
    const double next = y.dot(stiffness_ * y);
    x = y;
    if (std::abs(next - lambda) <= 1e-15 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  if (x.sum() < 0.0) x = -x;
  lambda_min_ = lambda;
  ground_state_ = x;
}

DiscreteFracOp assemble_frac_op(int elements, double s) { return DiscreteFracOp(Mesh1D{elements}, s); }

Vector load_vector(const Mesh1D& mesh, const std::function<double(double)>& f, int gauss_points) {
  const numkit::QuadRule ref = numkit::gauss_rule({0.0, 1.0}, gauss_points);
  const double h = mesh.h();
  Vector b = Vector::Zero(mesh.unknowns());
  for (int e = 0; e < mesh.elements; ++e) {
    const double x0 = mesh.node(e);
    for (std::size_t g = 0; g < ref.size(); ++g) {
      const double t = ref.nodes[g];
      const double fw = f(x0 + t * h) * ref.weights[g] * h;
      if (e >= 1) b(e - 1) += fw * (1.0 - t);        // left node e
      if (e + 1 <= mesh.unknowns()) b(e) += fw * t;  // right node e+1
    }
  }
  return b;
}

Matrix potential_mass(const Mesh1D& mesh, const Potential& q, int gauss_points) {
  const numkit::QuadRule ref = numkit::gauss_rule({0.0, 1.0}, gauss_points);
  const double h = mesh.h();
  const int N = mesh.unknowns();
  Matrix m = Matrix::Zero(N, N);
  for (int e = 0; e < mesh.elements; ++e) {
    const double x0 = mesh.node(e);
    const int left = e - 1;  // unknown index of node e
    const int right = e;     // unknown index of node e+1
    for (std::size_t g = 0; g < ref.size(); ++g) {
      const double t = ref.nodes[g];
      const double w = q(x0 + t * h) * ref.weights[g] * h;
      if (w == 0.0) continue;
      const double pl = 1.0 - t, pr = t;
      if (left >= 0) m(left, left) += w * pl * pl;
      if (right < N) m(right, right) += w * pr * pr;
      if (left >= 0 && right < N) {
        m(left, right) += w * pl * pr;
        m(right, left) += w * pl * pr;
      }
    }
  }
  return m;
}

double getoor_residual(const DiscreteFracOp& op, double interior_radius) {
  const double s = op.s();
  const double value = std::tgamma(1.0 + 2.0 * s);
  const Vector b = load_vector(op.mesh(), [value](double) { return value; });
  const Vector u = op.stiffness().llt().solve(b);
  double err = 0.0;
  for (int i = 0; i < op.mesh().unknowns(); ++i) {
    const double x = op.mesh().node(i + 1);
    if (std::abs(x) > interior_radius) continue;
    err = std::max(err, std::abs(u(i) - std::pow(1.0 - x * x, s)));
  }
  return err;  // max of (1-x^2)^s is 1
}

double FemFunction::eval(double x) const {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  const double h = mesh.h();
  const double pos = (x + 1.0) / h;
  const int e = std::min(static_cast<int>(pos), mesh.elements - 1);
  const double t = pos - e;
  const double left = e >= 1 ? coeffs(e - 1) : 0.0;
  const double right = e + 1 <= mesh.unknowns() ? coeffs(e) : 0.0;
  return (1.0 - t) * left + t * right;
}

double FemFunction::l2_norm() const {
  const double h = mesh.h();
  double sum = 0.0;
  for (int i = 0; i < coeffs.size(); ++i) {
    sum += 2.0 * h / 3.0 * coeffs(i) * coeffs(i);
    if (i + 1 < coeffs.size()) sum += 2.0 * h / 6.0 * coeffs(i) * coeffs(i + 1);
  }
  return std::sqrt(std::max(0.0, sum));
}

DirichletSolver::DirichletSolver(const DiscreteFracOp& op, const Potential& q, int gauss_points)
    : op_(&op), gauss_points_(gauss_points) {
  if (q.dimension() != 1) throw ParameterError("the fractional solver is one-dimensional");
  if (!(q.sup_norm() < op.lambda_min()))
    throw SolvabilityError("coercivity margin violated: |q|_inf = " + std::to_string(q.sup_norm()) +
                           " is not below lambda_min = " + std::to_string(op.lambda_min()));
  mq_ = calderon::dtn::potential_mass(op.mesh(), q, gauss_points);
  factor_.compute(op.stiffness() + mq_);
  if (factor_.info() != Eigen::Success) throw SolvabilityError("stiffness + potential is not positive definite");
}

FemFunction DirichletSolver::solve_load(const Vector& load) const {
  if (load.size() != op_->mesh().unknowns()) throw ParameterError("load vector has the wrong size");
  return {op_->mesh(), factor_.solve(load)};
}

FemFunction DirichletSolver::solve(const std::function<double(double)>& rhs) const {
  return solve_load(load_vector(op_->mesh(), rhs, gauss_points_));
}

FemFunction solve_dirichlet(const DiscreteFracOp& op, const Potential& q, const std::function<double(double)>& rhs) {
  return DirichletSolver(op, q).solve(rhs);
}

namespace {

// number of (m,k,l) with m+k <= p, weighting degree m by d(m)
template <class D>
double cumulative(int p, D&& d) {
  double total = 0.0;
  for (int m = 0; m <= p; ++m) total += d(m) * (p - m + 1);
  return total;
}

}  // namespace

std::int64_t count_tuples(int p, int n) {
  if (p < 0) throw ParameterError("p must be nonnegative");
  if (n < 1 || n > 3) throw ParameterError("dimension n must be 1, 2 or 3");
  auto d = [n](int m) { return static_cast<double>(numkit::harmonic_multiplicity(n, m)); };
  const auto s_p = static_cast<std::int64_t>(std::llround(cumulative(p, d)));
  const auto s_prev = p == 0 ? 0 : static_cast<std::int64_t>(std::llround(cumulative(p - 1, d)));
  return s_p * s_p - s_prev * s_prev;
}

double count_tuples_dimension_bound(int p, int n) {
  if (p < 0) throw ParameterError("p must be nonnegative");
  auto d = [n](int m) { return 2.0 * std::pow(m + 1.0, n - 2); };
  const double s_p = cumulative(p, d);
  const double s_prev = p == 0 ? 0.0 : cumulative(p - 1, d);
  return s_p * s_p - s_prev * s_prev;
}

double tuple_count_bound(int p, int n) { return 8.0 * std::pow(p + 1.0, 2 * n + 1); }

}  // namespace calderon::dtn
