#pragma once

#include <utility>

#include "kslab/duhamel.hpp"

namespace kslab {

/// Empirically measured constants feeding the reported a-priori bound
/// (c_hat+1)(kappa k_hat g(gamma) |omega|^2 + c_tilde |f|). The defaults are
/// conservative values from this build's estimate harness; experiments may
/// override them with freshly measured ones.
struct EmpiricalConstants {
  double c_hat = 1.0;
  double k_hat = 1.0;
  double c_tilde = 2.0;
};

struct PeriodicOptions {
  int steps_per_period = 600;
  Scheme scheme = Scheme::etd2rk;
  double tol_cesaro = 1e-9;  // residual ||P(avg)-avg|| in the working norm
  // tol_cesaro is absolute by default; with tol_relative it is scaled by the
  // one-period Duhamel norm (the linear response scale).
  bool tol_relative = false;
  long max_cesaro = 5000000;
  // Plain P-iterations run before the averaging starts (they converge
  // geometrically through the spectral gap); 0 keeps the cold-start
  // construction. The averaging and its stopping rule always run.
  int bootstrap_plain = 0;
  double tol_outer = 1e-7;  // relative sup-over-period change between outer iterates
  int max_outer = 60;
  double rho = 1.0;                // small-data ball radius in the working norm
  bool plain_fixed_point = false;  // iterate P directly instead of Cesàro averaging
  EmpiricalConstants constants;
};

struct CesaroReport {
  long iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
  bool converged = false;
};

struct PeriodicSolveReport {
  double residual = 0.0;  // ||P(xi)-xi|| in the working norm
  long cesaro_iters = 0;  // total across outer iterations
  int outer_iters = 0;
  std::vector<double> norm_history;       // sup-over-period norm per outer iterate
  std::vector<double> outer_differences;  // sup-over-period change per outer iterate
  std::vector<double> outer_ratios;
  double xi_norm = 0.0;
  double omega_norm = 0.0;    // sup-over-period norm of the frozen coefficient
  double forcing_norm = 0.0;  // sup-over-time norm of the forcing profile
  double bound_check = 0.0;   // RHS of the periodic a-priori bound
  bool converged = false;
};

template <class FieldT>
struct PeriodicOrbit {
  FieldT xi;
  Trajectory<FieldT> orbit;
  PeriodicSolveReport report;
};

/// Torus: subtract the mean (the heat flow fixes it, so the contraction never
/// determines it; divergence-form forcing keeps the zero-mean class
/// invariant). Hyperbolic: identity (spectral gap).
TorusField apply_zero_mode_policy(const TorusField& f);
RadialField apply_zero_mode_policy(const RadialField& f);

/// Poincare map of the linear system with frozen coefficient trajectory
/// `omega` (nullptr freezes zero): u(T) of the stepped linear solve from xi.
TorusField poincare_map(const TorusCalculus& calc, const TorusField& xi,
                        const Trajectory<TorusField>* omega, double period,
                        const PeriodicOptions& opt);
RadialField poincare_map(const RadialCalculus& calc, const RadialField& xi,
                         const Trajectory<RadialField>* omega, double period,
                         const PeriodicOptions& opt);

/// Cesaro-averaged fixed point of the Poincare map: iterates P^k(start),
/// averages, and stops when ||P(avg_n) - avg_n|| < tol_cesaro.
std::pair<TorusField, CesaroReport> cesaro_fixed_point(
    const TorusCalculus& calc, const Trajectory<TorusField>* omega, double period,
    const PeriodicOptions& opt, const TorusField* warm_start = nullptr);
std::pair<RadialField, CesaroReport> cesaro_fixed_point(
    const RadialCalculus& calc, const Trajectory<RadialField>* omega, double period,
    const PeriodicOptions& opt, const RadialField* warm_start = nullptr);

/// Linear periodic solve: fixed point plus the trajectory launched from it.
PeriodicOrbit<TorusField> linear_periodic_orbit(const TorusCalculus& calc,
                                                const Trajectory<TorusField>* omega,
                                                double period, const PeriodicOptions& opt);
PeriodicOrbit<RadialField> linear_periodic_orbit(const RadialCalculus& calc,
                                                 const Trajectory<RadialField>* omega,
                                                 double period, const PeriodicOptions& opt);

/// Outer fixed-point iteration freezing the previous periodic trajectory as
/// the coefficient of a linear periodic solve; converges to the small
/// periodic orbit of the full system. Throws "outside small-data regime"
/// after three non-contracting outer steps or a ball violation.
PeriodicOrbit<TorusField> find_periodic_orbit(const TorusCalculus& calc, double period,
                                              const PeriodicOptions& opt);
PeriodicOrbit<RadialField> find_periodic_orbit(const RadialCalculus& calc, double period,
                                               const PeriodicOptions& opt);

}  // namespace kslab
