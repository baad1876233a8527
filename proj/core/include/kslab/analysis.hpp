#pragma once

#include <utility>
#include <vector>

#include "kslab/periodic.hpp"

namespace kslab {

using Series = std::vector<std::pair<double, double>>;  // (t, value)

struct DecayFit {
  enum class Kind { power, exponential };
  Kind kind = Kind::power;
  // power: fitted exponent of t (negative for decay);
  // exponential: fitted e-folding rate (positive for decay).
  double rate = 0.0;
  double r2 = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  int points = 0;
  double log_prefactor = 0.0;
};

/// Least-squares fit of log(value) against log(t) over [t_lo, t_hi].
/// Requires >= 8 points in the window, all values positive.
DecayFit fit_power(const Series& series, double t_lo, double t_hi);

/// Least-squares fit of log(value) against t over [t_lo, t_hi].
DecayFit fit_exponential(const Series& series, double t_lo, double t_hi);

/// gamma_{p,q} = (delta_n/2) [ (1/p - 1/q) + (8/q)(1 - 1/p) ].
double dispersive_gamma(double p, double q, double delta_n);

struct SigmaComponents {
  double candidates[3] = {0.0, 0.0, 0.0};
  double sigma = 0.0;
};

/// Decay rate of the periodic orbit on H^n:
/// sigma = min{ g1, (g1+g2)/2, (g1+g3)/2 } with g1 = gamma_{p/2,p/2},
/// g2 = gamma_{pn/(4n-p),p/2}, g3 = gamma_{p/3,p/2}. Requires n < p < 2n.
SigmaComponents compute_sigma(double p, int n, double delta_n);

template <class FieldT>
struct StabilityResult {
  Series series;  // t -> ||u(t) - orbit(t)|| in the comparison norm
  DecayFit fit;
  bool failed = false;   // perturbed run blew up
  bool fitted = false;   // false when the series is at rounding level
  FieldT perturbation;
};

/// Perturbs the periodic orbit's initial state by a mean-zero dipole of
/// comparison-norm size epsilon and fits the power-law decay of the
/// L^{r,inf} difference.
StabilityResult<TorusField> stability_experiment(const TorusCalculus& calc,
                                                 const PeriodicOrbit<TorusField>& orbit,
                                                 double epsilon, double horizon, double r,
                                                 const SolveOptions& opts, double fit_lo,
                                                 double fit_hi);

/// Hyperbolic variant: radial bump perturbation, exponential fit of the
/// L^{p/2} difference.
StabilityResult<RadialField> stability_experiment(const RadialCalculus& calc,
                                                  const PeriodicOrbit<RadialField>& orbit,
                                                  double epsilon, double horizon,
                                                  const SolveOptions& opts, double fit_lo,
                                                  double fit_hi);

struct UniquenessResult {
  double max_divergence = 0.0;  // relative, in the working norm
  Series divergence;
};

/// Runs the stepped solver and the Picard-on-quadrature solver from the same
/// initial state and reports their maximal relative disagreement.
UniquenessResult uniqueness_experiment(const RadialCalculus& calc, const RadialField& u0,
                                       double horizon, const SolveOptions& opts,
                                       int max_picard = 40);

}  // namespace kslab
