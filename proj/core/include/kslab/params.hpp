#pragma once

#include <array>

#include "kslab/radial.hpp"
#include "kslab/torus.hpp"

namespace kslab {

enum class DomainKind { torus, hyperbolic_radial };

/// Coefficients of the parabolic-elliptic chemotaxis system
///   u_t = Lap u - chi div(u grad v) + F(t),   -Lap v + gamma v = kappa u.
struct KSParams {
  double chi = 1.0;
  double kappa = 1.0;   // > 0
  double gamma = 0.0;   // >= 0
  int dim = 2;
  DomainKind domain = DomainKind::torus;
};

void validate(const KSParams& p);

/// Elliptic-inverse bookkeeping factor: 1 at gamma = 0, gamma^{-(n-1)} else.
double coupling_g(double gamma, int dim);

/// T-periodic vector forcing f(t,x) = A sin(2 pi t/T + phi) * profile(x);
/// the system sees F = div f. On the torus the profile is a Gaussian bump
/// times a coordinate direction; on H^n it is an odd radial magnitude
/// (tau/width) exp(-tau^2/(2 width^2)) vanishing at the pole.
struct ForcingSpec {
  double period = 1.0;
  double amplitude = 0.0;
  double phase = 0.0;
  int axis = 0;
  double width = 1.0;

  double time_factor(double t) const;
};

void validate(const ForcingSpec& f);

TorusVectorField forcing_profile(const TorusGrid& grid, const ForcingSpec& f);
TorusField forcing_divergence_profile(const TorusGrid& grid, const ForcingSpec& f);
RadialField forcing_profile(const RadialGrid& grid, const ForcingSpec& f);
RadialField forcing_divergence_profile(const RadialGrid& grid, const ForcingSpec& f);

/// Centered Gaussian exp(-|x-c|^2 / (2 width^2)) with minimum-image distance.
TorusField gaussian_bump(const TorusGrid& grid, double width, double amplitude = 1.0,
                         std::array<double, 4> center = {0.0, 0.0, 0.0, 0.0});

/// Mean-zero axis-derivative of a Gaussian (dipole); the natural perturbation
/// class on the torus where the mean is a conserved quantity.
TorusField dipole_bump(const TorusGrid& grid, double width, int axis,
                       double amplitude = 1.0,
                       std::array<double, 4> center = {0.0, 0.0, 0.0, 0.0});

RadialField radial_bump(const RadialGrid& grid, double center, double width,
                        double amplitude = 1.0);

}  // namespace kslab
