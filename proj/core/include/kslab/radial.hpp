#pragma once

#include <memory>
#include <span>
#include <vector>

namespace kslab {

/// Radial grid on H^n: nodes tau_i = i*h on [0, tau_max], volume weights
/// w_i = omega_{n-1} * integral of sinh^{n-1} over the node's cell (cells
/// clipped to [0, tau_max]). The Dirichlet condition lives beyond tau_max.
struct RadialGrid {
  int dim = 3;        // n >= 2
  int nodes = 401;    // M
  double tau_max = 20.0;
  std::vector<double> node;
  std::vector<double> weight;

  double spacing() const { return tau_max / (nodes - 1); }
  bool same_shape(const RadialGrid& o) const {
    return dim == o.dim && nodes == o.nodes && tau_max == o.tau_max;
  }
};

RadialGrid make_radial_grid(int dim, int nodes, double tau_max);

/// Surface measure of the unit sphere S^{n-1}.
double sphere_area(int n);

class RadialField {
 public:
  RadialField() = default;
  explicit RadialField(const RadialGrid& grid, double fill = 0.0);
  RadialField(const RadialGrid& grid, std::vector<double> values);

  const RadialGrid& grid() const { return *grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(values_.size()); }

  RadialField& operator+=(const RadialField& rhs);
  RadialField& operator-=(const RadialField& rhs);
  RadialField& operator*=(double s);
  void axpy(double s, const RadialField& rhs);

  double max_abs() const;
  bool all_finite() const;

 private:
  // grids are shared; fields copy cheaply
  std::shared_ptr<const RadialGrid> grid_;
  std::vector<double> values_;
};

RadialField operator+(RadialField a, const RadialField& b);
RadialField operator-(RadialField a, const RadialField& b);
RadialField operator*(double s, RadialField a);

/// Laplace-Beltrami on radial functions, conservative flux form
/// (d^2/dtau^2 + (n-1) coth tau d/dtau away from the axis, n f''(0) at it).
RadialField radial_laplacian(const RadialField& f);

/// One Crank-Nicolson step of the radial heat flow. Requires 0 < dt <= 0.5 h.
RadialField heat_step(const RadialField& f, double dt);

/// e^{t Laplace} via CN substeps no larger than min(dt_max, 0.5 h).
RadialField heat_evolve(const RadialField& f, double t, double dt_max);

/// Prefactored CN propagator for repeated equal-dt stepping.
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const RadialGrid& grid, double dt);
  RadialField step(const RadialField& f) const;
  double dt() const { return dt_; }

 private:
  RadialGrid grid_;
  double dt_;
  std::vector<double> lower_, diag_, upper_;  // I - dt/2 L
  std::vector<double> elower_, ediag_, eupper_;  // I + dt/2 L
};

/// kappa (-Laplace + gamma I)^{-1} with Dirichlet beyond tau_max; the H^n
/// spectral gap makes gamma = 0 regular (no mean restriction).
RadialField elliptic_inverse(const RadialField& f, double gamma, double kappa);

/// d/dtau of elliptic_inverse (radial component of the gradient).
RadialField elliptic_inverse_grad(const RadialField& f, double gamma, double kappa = 1.0);

/// Centered d/dtau for an even (scalar) radial function: f'(0) = 0.
RadialField radial_derivative(const RadialField& f);

/// Divergence of the radial vector field F e_tau; F must vanish at the pole.
RadialField radial_divergence(const RadialField& F);

/// (sum w_i |f_i|^p)^{1/p}; p = inf gives max |f|.
double lp_norm(const RadialField& f, double p);

/// Volume integral of f.
double volume_integral(const RadialField& f);

}  // namespace kslab
