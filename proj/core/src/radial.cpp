#include "kslab/radial.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace kslab {

namespace {

double sinh_pow(double tau, int n) { return std::pow(std::sinh(tau), n - 1); }

// 2-point Gauss integral of sinh^{n-1} over [a, b].
double cell_integral(double a, double b, int n) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double x = half / std::numbers::sqrt3;
  return half * (sinh_pow(mid - x, n) + sinh_pow(mid + x, n));
}

// Flux coefficients of the conservative Laplacian:
//   (L u)_i = [J_{i+1/2}(u_{i+1}-u_i) - J_{i-1/2}(u_i-u_{i-1})] / (h^2 I_i/h)
// with J = sinh^{n-1}, I_i the (clipped) cell integral of J. Row i carries
// lower_i u_{i-1} + diag_i u_i + upper_i u_{i+1}; ghost values are zero
// beyond tau_max and the axis has no inward flux (J(0) = 0).
struct LaplacianRows {
  std::vector<double> lower, diag, upper;
};

LaplacianRows laplacian_rows(const RadialGrid& g) {
  const int m = g.nodes;
  const double h = g.spacing();
  const double area = sphere_area(g.dim);
  LaplacianRows rows;
  rows.lower.assign(m, 0.0);
  rows.diag.assign(m, 0.0);
  rows.upper.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const double cell = g.weight[static_cast<std::size_t>(i)] / area;  // I_i
    const double jr = sinh_pow(g.node[static_cast<std::size_t>(i)] + 0.5 * h, g.dim);
    const double jl = i == 0 ? 0.0 : sinh_pow(g.node[static_cast<std::size_t>(i)] - 0.5 * h, g.dim);
    const double cr = jr / (h * cell);
    const double cl = jl / (h * cell);
    rows.diag[static_cast<std::size_t>(i)] = -(cr + cl);
    if (i + 1 < m) rows.upper[static_cast<std::size_t>(i)] = cr;
    if (i > 0) rows.lower[static_cast<std::size_t>(i)] = cl;
  }
  return rows;
}

// Thomas algorithm; diagonally dominant systems only.
void tridiag_solve(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<double> rhs) {
  const std::size_t m = diag.size();
  std::vector<double> cp(m);
  double beta = diag[0];
  if (beta == 0.0) throw std::runtime_error("radial solve: singular tridiagonal system");
  cp[0] = upper[0] / beta;
  rhs[0] /= beta;
  for (std::size_t i = 1; i < m; ++i) {
    beta = diag[i] - lower[i] * cp[i - 1];
    if (beta == 0.0) throw std::runtime_error("radial solve: singular tridiagonal system");
    cp[i] = upper[i] / beta;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
  }
  for (std::size_t i = m - 1; i-- > 0;) rhs[i] -= cp[i] * rhs[i + 1];
}

}  // namespace

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

RadialGrid make_radial_grid(int dim, int nodes, double tau_max) {
  if (dim < 2) throw std::domain_error("radial grid: dim must be >= 2");
  if (nodes < 16) throw std::domain_error("radial grid: needs at least 16 nodes");
  if (!(tau_max >= 10.0)) throw std::domain_error("radial grid: tau_max must be >= 10");
  RadialGrid g;
  g.dim = dim;
  g.nodes = nodes;
  g.tau_max = tau_max;
  g.node.resize(static_cast<std::size_t>(nodes));
  g.weight.resize(static_cast<std::size_t>(nodes));
  const double h = g.spacing();
  const double area = sphere_area(dim);
  for (int i = 0; i < nodes; ++i) {
    const double tau = i * h;
    g.node[static_cast<std::size_t>(i)] = tau;
    const double a = std::max(0.0, tau - 0.5 * h);
    const double b = std::min(tau_max, tau + 0.5 * h);
    g.weight[static_cast<std::size_t>(i)] = area * cell_integral(a, b, dim);
  }
  return g;
}

RadialField::RadialField(const RadialGrid& grid, double fill)
    : grid_(std::make_shared<RadialGrid>(grid)),
      values_(static_cast<std::size_t>(grid.nodes), fill) {}

RadialField::RadialField(const RadialGrid& grid, std::vector<double> values)
    : grid_(std::make_shared<RadialGrid>(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid.nodes)
    throw std::domain_error("radial field: value count does not match grid");
}

RadialField& RadialField::operator+=(const RadialField& rhs) {
  if (!grid().same_shape(rhs.grid())) throw std::domain_error("radial field: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& rhs) {
  if (!grid().same_shape(rhs.grid())) throw std::domain_error("radial field: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
  return *this;
}

RadialField& RadialField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void RadialField::axpy(double s, const RadialField& rhs) {
  if (!grid().same_shape(rhs.grid())) throw std::domain_error("radial field: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * rhs.values_[i];
}

double RadialField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool RadialField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
RadialField operator*(double s, RadialField a) { return a *= s; }

RadialField radial_laplacian(const RadialField& f) {
  const RadialGrid& g = f.grid();
  if (g.nodes < 16) throw std::domain_error("radial_laplacian: grid too small");
  const LaplacianRows rows = laplacian_rows(g);
  RadialField out(g);
  const int m = g.nodes;
  for (int i = 0; i < m; ++i) {
    double v = rows.diag[static_cast<std::size_t>(i)] * f[i];
    if (i > 0) v += rows.lower[static_cast<std::size_t>(i)] * f[i - 1];
    if (i + 1 < m) v += rows.upper[static_cast<std::size_t>(i)] * f[i + 1];
    out[i] = v;
  }
  return out;
}

CrankNicolsonStepper::CrankNicolsonStepper(const RadialGrid& grid, double dt)
    : grid_(grid), dt_(dt) {
  if (!(dt > 0.0)) throw std::domain_error("heat_step: dt must be positive");
  if (dt > 0.5 * grid.spacing())
    throw std::domain_error("heat_step: dt exceeds the 0.5 h accuracy budget");
  const LaplacianRows rows = laplacian_rows(grid);
  const std::size_t m = static_cast<std::size_t>(grid.nodes);
  lower_.resize(m);
  diag_.resize(m);
  upper_.resize(m);
  elower_.resize(m);
  ediag_.resize(m);
  eupper_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    lower_[i] = -0.5 * dt * rows.lower[i];
    diag_[i] = 1.0 - 0.5 * dt * rows.diag[i];
    upper_[i] = -0.5 * dt * rows.upper[i];
    elower_[i] = 0.5 * dt * rows.lower[i];
    ediag_[i] = 1.0 + 0.5 * dt * rows.diag[i];
    eupper_[i] = 0.5 * dt * rows.upper[i];
  }
}

RadialField CrankNicolsonStepper::step(const RadialField& f) const {
  if (!f.grid().same_shape(grid_)) throw std::domain_error("heat_step: grid mismatch");
  const int m = grid_.nodes;
  RadialField out(f.grid());
  for (int i = 0; i < m; ++i) {
    double v = ediag_[static_cast<std::size_t>(i)] * f[i];
    if (i > 0) v += elower_[static_cast<std::size_t>(i)] * f[i - 1];
    if (i + 1 < m) v += eupper_[static_cast<std::size_t>(i)] * f[i + 1];
    out[i] = v;
  }
  tridiag_solve(lower_, diag_, upper_, out.values());
  return out;
}

RadialField heat_step(const RadialField& f, double dt) {
  return CrankNicolsonStepper(f.grid(), dt).step(f);
}

RadialField heat_evolve(const RadialField& f, double t, double dt_max) {
  if (t < 0.0) throw std::domain_error("heat_evolve: t must be >= 0");
  if (t == 0.0) return f;
  const double budget = std::min(dt_max, 0.5 * f.grid().spacing());
  const int steps = static_cast<int>(std::ceil(t / budget));
  const CrankNicolsonStepper stepper(f.grid(), t / steps);
  RadialField u = f;
  for (int s = 0; s < steps; ++s) u = stepper.step(u);
  return u;
}

RadialField elliptic_inverse(const RadialField& f, double gamma, double kappa) {
  if (gamma < 0.0) throw std::domain_error("elliptic_inverse: gamma must be >= 0");
  if (!(kappa > 0.0)) throw std::domain_error("elliptic_inverse: kappa must be > 0");
  const RadialGrid& g = f.grid();
  const LaplacianRows rows = laplacian_rows(g);
  const std::size_t m = static_cast<std::size_t>(g.nodes);
  std::vector<double> lower(m), diag(m), upper(m);
  for (std::size_t i = 0; i < m; ++i) {
    lower[i] = -rows.lower[i];
    diag[i] = -rows.diag[i] + gamma;
    upper[i] = -rows.upper[i];
  }
  RadialField v(g);
  for (int i = 0; i < g.nodes; ++i) v[i] = kappa * f[i];
  tridiag_solve(lower, diag, upper, v.values());

  // forward-apply residual check
  RadialField residual = radial_laplacian(v);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < g.nodes; ++i) {
    const double r = -residual[i] + gamma * v[i] - kappa * f[i];
    num += r * r;
    den += kappa * f[i] * kappa * f[i];
  }
  if (den > 0.0 && !(num <= 1e-18 * den))
    throw std::runtime_error("elliptic_inverse: forward residual check failed");
  return v;
}

RadialField radial_derivative(const RadialField& f) {
  const RadialGrid& g = f.grid();
  const double h = g.spacing();
  const int m = g.nodes;
  RadialField out(g);
  out[0] = 0.0;  // even symmetry at the axis
  for (int i = 1; i + 1 < m; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  out[m - 1] = (0.0 - f[m - 2]) / (2.0 * h);
  return out;
}

RadialField elliptic_inverse_grad(const RadialField& f, double gamma, double kappa) {
  return radial_derivative(elliptic_inverse(f, gamma, kappa));
}

RadialField radial_divergence(const RadialField& F) {
  const RadialGrid& g = F.grid();
  if (std::abs(F[0]) > 1e-8 * F.max_abs())
    throw std::domain_error("radial_divergence: radial vector field must vanish at the pole");
  const double h = g.spacing();
  const double area = sphere_area(g.dim);
  const int m = g.nodes;
  RadialField out(g);
  for (int i = 0; i < m; ++i) {
    const double cell = g.weight[static_cast<std::size_t>(i)] / area;
    const double jr = sinh_pow(g.node[static_cast<std::size_t>(i)] + 0.5 * h, g.dim);
    const double fr = 0.5 * (F[i] + (i + 1 < m ? F[i + 1] : 0.0));
    double flux = jr * fr;
    if (i > 0) {
      const double jl = sinh_pow(g.node[static_cast<std::size_t>(i)] - 0.5 * h, g.dim);
      const double fl = 0.5 * (F[i - 1] + F[i]);
      flux -= jl * fl;
    }
    out[i] = flux / cell;
  }
  return out;
}

double lp_norm(const RadialField& f, double p) {
  if (std::isinf(p)) return f.max_abs();
  if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1");
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i)
    s += f.grid().weight[static_cast<std::size_t>(i)] * std::pow(std::abs(f[i]), p);
  return std::pow(s, 1.0 / p);
}

double volume_integral(const RadialField& f) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) s += f.grid().weight[static_cast<std::size_t>(i)] * f[i];
  return s;
}

}  // namespace kslab
