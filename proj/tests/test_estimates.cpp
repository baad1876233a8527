#include <cmath>

#include "doctest.h"
#include "kslab/estimates.hpp"
#include "kslab/periodic.hpp"
#include "support/oracles.hpp"

using namespace kslab;

namespace {

TorusCalculus harness_system() {
  auto grid = make_torus_grid(2, 64, 10.0);
  KSParams params;
  params.kappa = 1.0;
  params.gamma = 1.0;
  params.dim = 2;
  ForcingSpec forcing;
  forcing.period = 6.0;
  forcing.amplitude = 0.05;
  forcing.width = 1.5;
  return TorusCalculus(grid, params, forcing);
}

}  // namespace

TEST_SUITE_BEGIN("estimates");

TEST_CASE("bilinear bound is symmetric within corpus noise") {
  auto calc = harness_system();
  const double times[3] = {0.1, 0.5, 1.5};
  std::mt19937_64 rng(31);
  double sup_uw = 0.0, sup_wu = 0.0;
  const double g = coupling_g(calc.params().gamma, calc.params().dim);
  for (int k = 0; k < 8; ++k) {
    TorusField u = apply_zero_mode_policy(random_bump_field(calc.grid(), rng));
    TorusField w = apply_zero_mode_policy(random_bump_field(calc.grid(), rng));
    Trajectory<TorusField> tu, tw;
    tu.dt = tw.dt = 2.0;
    tu.times = tw.times = {0.0, 2.0};
    tu.snapshots = {u, u};
    tw.snapshots = {w, w};
    const double denom = g * calc.working_norm(u) * calc.working_norm(w);
    for (double t : times) {
      sup_uw = std::max(sup_uw,
                        calc.working_norm(bilinear_duhamel(calc, tu, tw, t, 48)) / denom);
      sup_wu = std::max(sup_wu,
                        calc.working_norm(bilinear_duhamel(calc, tw, tu, t, 48)) / denom);
    }
  }
  CHECK(sup_uw > 0.0);
  CHECK(sup_wu > 0.0);
  CHECK(sup_uw / sup_wu < 4.0);
  CHECK(sup_wu / sup_uw < 4.0);
}

TEST_CASE("a priori bound of the linear solve with measured constants") {
  auto calc = harness_system();
  const double period = calc.forcing().period;
  const double times[5] = {0.05, 0.2, 0.8, 2.0, 6.0};

  // measure the three constants with this build's own harnesses
  const double c_hat = semigroup_bound_harness(calc.grid(), calc.params().dim, 6, 5, times);
  const double k_hat = bilinear_bound_harness(calc, 6, 6, times);
  ForcingSpec base = calc.forcing();
  base.amplitude = 1.0;
  const double widths[3] = {0.8, 1.5, 2.5};
  const double p_clamped = std::max(1.0, calc.params().dim / 3.0);
  const double c_tilde =
      linear_bound_harness(calc.grid(), calc.params(), base, p_clamped,
                           std::max(1.0, 0.5 * calc.params().dim), widths, times);

  // frozen coefficient: a constant-in-time bump trajectory
  PeriodicOptions opt;
  opt.steps_per_period = 600;
  TorusField omega_field =
      apply_zero_mode_policy(gaussian_bump(calc.grid(), 1.2, 0.3));
  Trajectory<TorusField> omega;
  omega.dt = period / opt.steps_per_period;
  for (int j = 0; j <= opt.steps_per_period; ++j) {
    omega.times.push_back(j * omega.dt);
    omega.snapshots.push_back(omega_field);
    omega.norms.push_back(
        NormSample{j * omega.dt, calc.working_norm(omega_field), 0.0, 0.0});
  }

  PeriodicOptions solve_opt = opt;
  solve_opt.tol_cesaro = 1e-8;
  solve_opt.tol_relative = true;
  solve_opt.bootstrap_plain = 100;
  auto orbit = linear_periodic_orbit(calc, &omega, period, solve_opt);
  // the orbit trajectory is a linear-system solution with initial data xi
  const double sup_norm = orbit.orbit.sup_working_norm();

  const double g = coupling_g(calc.params().gamma, calc.params().dim);
  TorusVectorField prof = forcing_profile(calc.grid(), calc.forcing());
  TorusField mag(calc.grid());
  for (std::int64_t i = 0; i < mag.size(); ++i)
    mag[i] = std::abs(prof.component[0][i]);
  const double f_norm =
      std::abs(calc.forcing().amplitude) * lorentz_norm(mag, {p_clamped, kInf});
  const double omega_norm = calc.working_norm(omega_field);

  const double rhs = c_hat * calc.working_norm(orbit.xi) +
                     calc.params().kappa * k_hat * g * omega_norm * omega_norm +
                     c_tilde * f_norm;
  CHECK(sup_norm <= rhs * 1.0001);
}

TEST_CASE("harness smoke: all measured constants are finite and positive") {
  auto calc = harness_system();
  const double times[3] = {0.1, 0.5, 2.0};
  auto scan = dispersive_harness(calc.grid(), 4.0 / 3.0, 4.0, 1, 3, 77);
  CHECK(std::isfinite(scan.supremum));
  CHECK(scan.supremum > 0.0);
  auto yz = yamazaki_harness(make_torus_grid(2, 32, 40.0), 4.0 / 3.0, 4.0, 3, 77);
  CHECK(yz.spread() >= 1.0);
  CHECK(yz.spread() < 10.0);
  const double s = semigroup_bound_harness(calc.grid(), 2, 3, 77, times);
  CHECK(s > 0.0);
  CHECK(s < 2.0);  // the heat flow should not amplify the working norm much
}

TEST_SUITE_END();
