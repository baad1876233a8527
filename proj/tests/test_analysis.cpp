#include <cmath>

#include "doctest.h"
#include "kslab/analysis.hpp"
#include "support/oracles.hpp"

using namespace kslab;

namespace {

Series sample(double t_lo, double t_hi, int n, double (*fn)(double)) {
  Series s;
  for (int i = 0; i < n; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (n - 1);
    s.emplace_back(t, fn(t));
  }
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("power fit recovers exact power laws") {
  auto s = sample(0.5, 10.0, 40, +[](double t) { return std::pow(t, -0.5); });
  auto fit = fit_power(s, 0.5, 10.0);
  CHECK(fit.rate == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(fit.r2 > 1.0 - 1e-9);

  auto flat = sample(1.0, 5.0, 20, +[](double) { return 3.333; });
  auto fit2 = fit_power(flat, 1.0, 5.0);
  CHECK(std::abs(fit2.rate) < 1e-9);
}

TEST_CASE("free heat of normalized data decays at the closed-form L2 power") {
  // n = 2 Gaussian with unit mass: |u(t)|_2 = (4 pi (s + 2t))^(-1/2)
  const int dim = 2;
  const double s0 = 0.02;
  Series series;
  for (double t = 1.0; t <= 10.0; t += 0.25)
    series.emplace_back(t, oracle::l2_of_unit_gaussian(s0 + 2.0 * t, dim));
  auto fit = fit_power(series, 1.0, 10.0);
  CHECK(fit.rate == doctest::Approx(-0.5).epsilon(0.02));
}

TEST_CASE("exponential fit recovers exact rates and flags model mismatch") {
  auto s = sample(0.0, 5.0, 30, +[](double t) { return std::exp(-2.0 * t); });
  auto fit = fit_exponential(s, 0.0, 5.0);
  CHECK(fit.rate == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fit.r2 > 1.0 - 1e-9);

  // a power law is a bad exponential: r2 clearly below the periodic-orbit gate
  auto p = sample(0.5, 20.0, 60, +[](double t) { return std::pow(t, -1.5); });
  auto fit2 = fit_exponential(p, 0.5, 20.0);
  CHECK(fit2.r2 < 0.99);
}

TEST_CASE("fit preconditions: window size and positivity") {
  Series tiny = {{1.0, 1.0}, {2.0, 0.5}};
  CHECK_THROWS_AS(fit_power(tiny, 0.5, 3.0), std::domain_error);
  Series negative = sample(1.0, 5.0, 20, +[](double t) { return 1.0 - t; });
  CHECK_THROWS_AS(fit_exponential(negative, 1.0, 5.0), std::domain_error);
}

TEST_CASE("sigma formula: hand-checked value and homogeneity") {
  auto r = compute_sigma(4.0, 3, 1.0);
  CHECK(r.candidates[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.candidates[1] == doctest::Approx(7.0 / 8.0).epsilon(1e-15));
  CHECK(r.candidates[2] == doctest::Approx(13.0 / 16.0).epsilon(1e-15));
  CHECK(r.sigma == doctest::Approx(13.0 / 16.0).epsilon(1e-15));

  auto zero = compute_sigma(4.0, 3, 0.0);
  CHECK(zero.sigma == 0.0);

  auto doubled = compute_sigma(4.5, 3, 2.0);
  auto base = compute_sigma(4.5, 3, 1.0);
  CHECK(doubled.sigma == doctest::Approx(2.0 * base.sigma).epsilon(1e-14));
  for (int i = 0; i < 3; ++i) CHECK(r.sigma <= r.candidates[i] + 1e-15);

  CHECK_THROWS_AS(compute_sigma(3.0, 3, 1.0), std::domain_error);
  CHECK_THROWS_AS(compute_sigma(6.0, 3, 1.0), std::domain_error);
}

TEST_CASE("stability experiment: zero perturbation stays at rounding level") {
  auto grid = make_torus_grid(2, 32, 2.0 * std::numbers::pi);
  KSParams params;
  params.kappa = 1.0;
  params.gamma = 1.0;
  params.dim = 2;
  ForcingSpec forcing;
  forcing.period = 6.0;
  forcing.amplitude = 0.02;
  forcing.width = 0.35;
  TorusCalculus calc(grid, params, forcing);
  PeriodicOptions popt;
  popt.steps_per_period = 300;
  popt.tol_cesaro = 1e-10;
  popt.tol_outer = 1e-7;
  auto orbit = find_periodic_orbit(calc, forcing.period, popt);

  SolveOptions sopt;
  sopt.dt = 0.02;
  auto result = stability_experiment(calc, orbit, 0.0, 1.0, 2.0, sopt, 0.2, 1.0);
  REQUIRE(!result.failed);
  for (const auto& [t, v] : result.series) CHECK(v < 1e-10);
  CHECK(!result.fitted);
}

TEST_CASE("torus perturbations decay at the dipole power rate") {
  auto grid = make_torus_grid(2, 256, 80.0);
  KSParams params;
  params.kappa = 1.0;
  params.gamma = 1.0;
  params.dim = 2;
  ForcingSpec forcing;
  forcing.period = 6.0;
  forcing.amplitude = 0.0;  // perturbation of the zero orbit
  forcing.width = 2.0;
  TorusCalculus calc(grid, params, forcing);
  PeriodicOrbit<TorusField> orbit;
  orbit.xi = calc.zero();

  SolveOptions sopt;
  sopt.dt = 0.05;
  auto result = stability_experiment(calc, orbit, 1e-3, 10.0, 2.0, sopt, 2.0, 10.0);
  REQUIRE(!result.failed);
  REQUIRE(result.fitted);
  CHECK(result.fit.rate <= -0.4);
  CHECK(result.fit.r2 > 0.99);
}

TEST_CASE("uniqueness surrogate: two pathways agree and tighten with refinement") {
  auto grid = make_radial_grid(3, 301, 15.0);
  KSParams params;
  params.kappa = 1.0;
  params.gamma = 1.0;
  params.dim = 3;
  params.domain = DomainKind::hyperbolic_radial;
  ForcingSpec forcing;
  forcing.period = 2.0;
  forcing.amplitude = 0.01;
  forcing.width = 1.5;
  RadialCalculus calc(grid, params, forcing, 4.0);
  RadialField u0 = radial_bump(grid, 1.0, 1.0, 0.02);

  SolveOptions coarse;
  coarse.dt = 0.02;
  coarse.quad_cells = 40;
  auto d_coarse = uniqueness_experiment(calc, u0, 0.4, coarse);
  CHECK(d_coarse.max_divergence < 1e-4);

  SolveOptions fine = coarse;
  fine.dt = 0.01;
  fine.quad_cells = 80;
  auto d_fine = uniqueness_experiment(calc, u0, 0.4, fine);
  CHECK(oracle::measured_order(d_coarse.max_divergence, d_fine.max_divergence) > 1.5);
}

TEST_CASE("gamma = 0 scaling symmetry maps solutions across boxes") {
  // u -> lambda^2 u(lambda^2 t, lambda x) with lambda = 2: solving on the
  // rescaled box from rescaled data reproduces the rescaled solution exactly
  // (matched grids, matched mode indices).
  const double lambda = 2.0;
  auto grid_a = make_torus_grid(2, 64, 2.0 * std::numbers::pi);
  auto grid_b = make_torus_grid(2, 64, 2.0 * std::numbers::pi / lambda);
  KSParams params;
  params.kappa = 1.0;
  params.gamma = 0.0;
  params.dim = 2;
  ForcingSpec off;
  off.period = 1.0;
  off.amplitude = 0.0;
  off.width = 0.3;
  TorusCalculus calc_a(grid_a, params, off);
  TorusCalculus calc_b(grid_b, params, off);

  TorusField u0_a = apply_zero_mode_policy(gaussian_bump(grid_a, 0.5, 0.05));
  // pointwise rescaled data on matched indices: u_b[i] = lambda^2 u_a[i]
  TorusField u0_b(grid_b);
  for (std::int64_t i = 0; i < u0_a.size(); ++i) u0_b[i] = lambda * lambda * u0_a[i];

  SolveOptions opts_a;
  opts_a.dt = 0.01;
  SolveOptions opts_b = opts_a;
  opts_b.dt = opts_a.dt / (lambda * lambda);

  auto traj_a = solve_mild(calc_a, u0_a, 0.2, opts_a);
  auto traj_b = solve_mild(calc_b, u0_b, 0.2 / (lambda * lambda), opts_b);

  double err = 0.0, scale = 0.0;
  for (std::int64_t i = 0; i < u0_a.size(); ++i) {
    err = std::max(err,
                   std::abs(traj_b.final_state()[i] - lambda * lambda * traj_a.final_state()[i]));
    scale = std::max(scale, std::abs(traj_a.final_state()[i]));
  }
  CHECK(err < 1e-6 * lambda * lambda * scale);
}


TEST_CASE("fitted perturbation rates are stable under epsilon halving") {
  auto grid = make_torus_grid(2, 128, 60.0);
  KSParams params;
  params.kappa = 1.0;
  params.gamma = 1.0;
  params.dim = 2;
  ForcingSpec forcing;
  forcing.period = 6.0;
  forcing.amplitude = 0.0;
  forcing.width = 2.0;
  TorusCalculus calc(grid, params, forcing);
  PeriodicOrbit<TorusField> orbit;
  orbit.xi = calc.zero();
  SolveOptions sopt;
  sopt.dt = 0.05;
  auto full = stability_experiment(calc, orbit, 1e-3, 8.0, 2.0, sopt, 2.0, 8.0);
  auto half = stability_experiment(calc, orbit, 5e-4, 8.0, 2.0, sopt, 2.0, 8.0);
  REQUIRE(full.fitted);
  REQUIRE(half.fitted);
  CHECK(std::abs(full.fit.rate - half.fit.rate) <= 0.10 * std::abs(full.fit.rate));
}

TEST_CASE("hyperbolic perturbations decay at least half as fast as pure heat") {
  auto grid = make_radial_grid(3, 301, 15.0);
  KSParams params;
  params.kappa = 1.0;
  params.gamma = 1.0;
  params.dim = 3;
  params.domain = DomainKind::hyperbolic_radial;
  ForcingSpec forcing;
  forcing.period = 2.0;
  forcing.amplitude = 0.02;
  forcing.width = 1.5;
  RadialCalculus calc(grid, params, forcing, 4.0);
  PeriodicOptions popt;
  popt.steps_per_period = 100;
  popt.tol_cesaro = 1e-9;
  popt.tol_outer = 1e-7;
  auto orbit = find_periodic_orbit(calc, forcing.period, popt);

  SolveOptions sopt;
  sopt.dt = 0.02;
  auto result = stability_experiment(calc, orbit, 1e-3, 8.0, sopt, 2.0, 8.0);
  REQUIRE(!result.failed);
  REQUIRE(result.fitted);
  CHECK(result.fit.rate > 0.0);

  // linear-rate comparison oracle: the same perturbation under pure heat flow
  Series linear;
  RadialField u = result.perturbation;
  CrankNicolsonStepper stepper(grid, sopt.dt);
  double t = 0.0;
  while (t < 8.0 - 1e-9) {
    u = stepper.step(u);
    t += sopt.dt;
    if (t >= 2.0) linear.emplace_back(t, calc.working_norm(u));
  }
  auto linear_fit = fit_exponential(linear, 2.0, 8.0);
  CHECK(result.fit.rate >= 0.5 * linear_fit.rate);
}

TEST_CASE("uniqueness pathways coincide in the trivial regimes") {
  auto grid = make_radial_grid(3, 201, 12.0);
  KSParams params;
  params.kappa = 1.0;
  params.gamma = 1.0;
  params.dim = 3;
  params.domain = DomainKind::hyperbolic_radial;
  ForcingSpec off;
  off.period = 2.0;
  off.amplitude = 0.0;
  off.width = 1.5;
  RadialCalculus calc(grid, params, off, 4.0);
  SolveOptions opts;
  opts.dt = 0.02;
  opts.quad_cells = 40;

  auto zero = uniqueness_experiment(calc, calc.zero(), 0.2, opts);
  CHECK(zero.max_divergence == 0.0);

  KSParams lin = params;
  lin.kappa = 0.0;
  RadialCalculus lin_calc(grid, lin, off, 4.0);
  RadialField u0 = radial_bump(grid, 1.0, 1.0, 0.1);
  auto linear = uniqueness_experiment(lin_calc, u0, 0.2, opts);
  CHECK(linear.max_divergence < 1e-8);
}

TEST_SUITE_END();
