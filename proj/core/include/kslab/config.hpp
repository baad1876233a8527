#pragma once

#include <string>

#include "kslab/duhamel.hpp"
#include "kslab/periodic.hpp"

namespace kslab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment configuration, parsed from a sectioned key = value file.
/// Unknown sections or keys are rejected outright.
struct ExperimentConfig {
  // [domain]
  DomainKind kind = DomainKind::torus;
  int dim = 2;
  int points = 64;        // torus N
  double length = 2.0 * 3.14159265358979323846;
  int nodes = 401;        // radial M
  double tau_max = 20.0;

  // [params]
  double chi = 1.0;
  double kappa = 1.0;
  double gamma = 1.0;
  double delta_n = 1.0;   // dispersive-rate scale for sigma tables
  double norm_p = 4.0;    // hyperbolic working exponent p

  // [forcing]
  double period = 6.0;
  double amplitude = 0.0;
  double phase = 0.0;
  int axis = 0;
  double width = 1.0;
  double window_rate = 0.0;

  // [solver]
  double dt = 0.01;
  Scheme scheme = Scheme::etd2rk;
  double tol_outer = 1e-7;
  double tol_inner = 1e-9;
  double rho = 1.0;
  int max_outer = 60;
  long max_cesaro = 5000000;
  int snapshot_stride = 1;
  int quad_cells = 48;
  bool plain_fixed_point = false;

  // [experiment]
  std::string name = "experiment";
  double horizon = 1.0;
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  unsigned long seed = 1;
  double perturbation = 1e-3;
  int periods = 1;
  double stability_r = 2.0;
  std::string input;      // snapshot or csv consumed by replay / fit-decay
  std::string fit_kind = "power";
  std::string sigma_p_values = "3.5,4,5";

  TorusGrid torus_grid() const;
  RadialGrid radial_grid() const;
  KSParams ks_params() const;
  ForcingSpec forcing_spec() const;
  SolveOptions solve_options() const;
  PeriodicOptions periodic_options() const;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace kslab
