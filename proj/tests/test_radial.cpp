#include <cmath>

#include "doctest.h"
#include "kslab/analysis.hpp"
#include "kslab/norms.hpp"
#include "kslab/params.hpp"
#include "kslab/radial.hpp"
#include "support/oracles.hpp"

using namespace kslab;

namespace {

double rel_l2w(const RadialField& a, const RadialField& b) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    const double w = a.grid().weight[static_cast<std::size_t>(i)];
    num += w * (a[i] - b[i]) * (a[i] - b[i]);
    den += w * b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

TEST_SUITE_BEGIN("radial");

TEST_CASE("cell weights sum to the ball volume") {
  for (int n : {2, 3, 4, 5}) {
    auto grid = make_radial_grid(n, 801, 12.0);
    double total = 0.0;
    for (double w : grid.weight) total += w;
    const double vol = oracle::hn_ball_volume(n, 12.0);
    CHECK(std::abs(total - vol) < 1e-6 * vol);
  }
}

TEST_CASE("laplacian of a constant vanishes away from the truncation boundary") {
  auto grid = make_radial_grid(3, 601, 15.0);
  RadialField c(grid, 2.0);
  RadialField lap = radial_laplacian(c);
  for (int i = 0; i < c.size() - 1; ++i) CHECK(std::abs(lap[i]) < 1e-10);
}

TEST_CASE("laplacian of cosh on H3 is 3 cosh (symbolic oracle)") {
  auto grid = make_radial_grid(3, 1201, 12.0);
  RadialField f(grid);
  for (int i = 0; i < f.size(); ++i) f[i] = std::cosh(grid.node[static_cast<std::size_t>(i)]);
  RadialField lap = radial_laplacian(f);
  const double h = grid.spacing();
  // interior only; Dirichlet ghost pollutes the last node
  for (int i = 0; i < f.size() - 2; ++i) {
    const double expected = 3.0 * std::cosh(grid.node[static_cast<std::size_t>(i)]);
    CHECK(std::abs(lap[i] - expected) < 20.0 * h * h * expected);
  }
}

TEST_CASE("Rayleigh quotient of a wide bump sits above the spectral bottom") {
  for (int n : {2, 3, 4}) {
    auto grid = make_radial_grid(n, 801, 20.0);
    RadialField f = radial_bump(grid, 5.0, 3.0);
    RadialField lap = radial_laplacian(f);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < f.size(); ++i) {
      const double w = grid.weight[static_cast<std::size_t>(i)];
      num -= w * f[i] * lap[i];
      den += w * f[i] * f[i];
    }
    const double bottom = 0.25 * (n - 1) * (n - 1);
    CHECK(num / den >= bottom * 0.98);
  }
}

TEST_CASE("CN step leaves constants unchanged in the interior") {
  auto grid = make_radial_grid(3, 801, 20.0);
  RadialField c(grid, 1.0);
  RadialField stepped = heat_step(c, 0.01);
  for (int i = 0; i < c.size(); ++i) {
    if (grid.node[static_cast<std::size_t>(i)] > 10.0) break;
    CHECK(std::abs(stepped[i] - 1.0) < 1e-10);
  }
}

TEST_CASE("CN step enforces the dt budget") {
  auto grid = make_radial_grid(3, 101, 10.0);  // h = 0.1
  RadialField f(grid, 1.0);
  CHECK_THROWS_AS(heat_step(f, 0.06), std::domain_error);
  CHECK_THROWS_AS(heat_step(f, 0.0), std::domain_error);
}

TEST_CASE("H3 point source matches the closed-form kernel at t = 1") {
  auto grid = make_radial_grid(3, 2401, 20.0);
  const double t0 = 0.1;
  RadialField u(grid);
  for (int i = 0; i < u.size(); ++i)
    u[i] = oracle::h3_heat_kernel(grid.node[static_cast<std::size_t>(i)], t0);
  u = heat_evolve(u, 1.0 - t0, 0.003);
  RadialField expected(grid);
  for (int i = 0; i < u.size(); ++i)
    expected[i] = oracle::h3_heat_kernel(grid.node[static_cast<std::size_t>(i)], 1.0);
  CHECK(rel_l2w(u, expected) < 1e-4);
}

TEST_CASE("H3 heat flow decays at the spectral-gap rate") {
  // exponential L2 rate 1.00 within 5 percent; the fit window sits late
  // enough that the t^{-3/4} prefactor bias is inside the tolerance
  auto grid = make_radial_grid(3, 501, 25.0);
  RadialField u = radial_bump(grid, 0.0, 1.0);
  Series series;
  const double dt = 0.02;
  double t = 0.0;
  CrankNicolsonStepper stepper(grid, dt);
  while (t < 30.0 - 1e-9) {
    u = stepper.step(u);
    t += dt;
    if (t >= 15.0) series.emplace_back(t, lp_norm(u, 2.0));
  }
  auto fit = fit_exponential(series, 15.0, 30.0);
  CHECK(fit.rate == doctest::Approx(1.0).epsilon(0.05));
  CHECK(fit.r2 > 0.99);
}

TEST_CASE("elliptic inverse: zero input, forward recovery on a bump corpus") {
  auto grid = make_radial_grid(3, 601, 15.0);
  CHECK(elliptic_inverse(RadialField(grid), 1.0, 2.0).max_abs() == 0.0);

  for (double center : {0.0, 2.0, 5.0}) {
    for (double gamma : {0.0, 0.5, 2.0}) {
      RadialField f = radial_bump(grid, center, 1.0);
      RadialField v = elliptic_inverse(f, gamma, 1.3);
      RadialField forward = radial_laplacian(v);
      forward *= -1.0;
      forward.axpy(gamma, v);
      RadialField target = f;
      target *= 1.3;
      CHECK(rel_l2w(forward, target) < 1e-9);
    }
  }
}

TEST_CASE("gradient-of-inverse ratio stays bounded on a corpus") {
  auto grid = make_radial_grid(3, 601, 15.0);
  const double p = 4.0;
  double worst = 0.0;
  for (double center : {0.0, 1.0, 3.0, 6.0}) {
    RadialField f = radial_bump(grid, center, 1.2);
    RadialField grad_v = elliptic_inverse_grad(f, 1.0, 1.0);
    const double num = lp_norm(grad_v, p * grid.dim / (2.0 * grid.dim - p));
    const double den = lp_norm(f, 0.5 * p);
    worst = std::max(worst, num / den);
  }
  CHECK(std::isfinite(worst));
  CHECK(worst > 0.0);
  CHECK(worst < 50.0);
}

TEST_CASE("radial divergence identities") {
  auto grid = make_radial_grid(4, 801, 14.0);
  CHECK(radial_divergence(RadialField(grid)).max_abs() == 0.0);

  // F = sinh tau gives div = n cosh tau
  RadialField f(grid);
  for (int i = 0; i < f.size(); ++i) f[i] = std::sinh(grid.node[static_cast<std::size_t>(i)]);
  RadialField div = radial_divergence(f);
  const double h = grid.spacing();
  for (int i = 0; i + 2 < f.size(); ++i) {
    const double expected = grid.dim * std::cosh(grid.node[static_cast<std::size_t>(i)]);
    CHECK(std::abs(div[i] - expected) < 30.0 * h * h * expected);
  }

  // divergence theorem: compactly supported field integrates to zero
  RadialField g(grid);
  for (int i = 0; i < g.size(); ++i) {
    const double tau = grid.node[static_cast<std::size_t>(i)];
    g[i] = tau * std::exp(-(tau - 3.0) * (tau - 3.0));
  }
  const double total = volume_integral(radial_divergence(g));
  CHECK(std::abs(total) < 1e-10 * lp_norm(g, 1.0));

  RadialField bad(grid, 1.0);
  CHECK_THROWS_AS(radial_divergence(bad), std::domain_error);
}

TEST_CASE("lp norm of a ball indicator matches the analytic volume") {
  // grid chosen so the ball boundary tau = 1 falls on a cell edge
  auto grid = make_radial_grid(3, 491, 20.0);  // h = 2/49
  RadialField ind(grid);
  for (int i = 0; i < ind.size(); ++i)
    ind[i] = grid.node[static_cast<std::size_t>(i)] < 1.0 + 1e-12 ? 1.0 : 0.0;
  // analytic volume integral oracle: 4 pi int_0^1 sinh^2 = pi (sinh 2 - 2)
  const double vol = std::numbers::pi * (std::sinh(2.0) - 2.0);
  CHECK(vol == doctest::Approx(5.1109327057).epsilon(1e-9));
  CHECK(lp_norm(ind, 1.0) == doctest::Approx(vol).epsilon(1e-4));
}

TEST_CASE("lp norm scales and agrees with the rearrangement route at p = 2") {
  auto grid = make_radial_grid(3, 501, 12.0);
  RadialField f = radial_bump(grid, 2.0, 1.5);
  RadialField g = f;
  g *= -2.5;
  CHECK(lp_norm(g, 3.0) == doctest::Approx(2.5 * lp_norm(f, 3.0)).epsilon(1e-14));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(lorentz_norm(f, {2.0, 2.0})).epsilon(1e-6));
}

TEST_CASE("CN time stepping is second order (Richardson oracle)") {
  auto grid = make_radial_grid(3, 801, 16.0);
  RadialField u0 = radial_bump(grid, 1.0, 0.8);
  const double t = 0.8;
  RadialField fine = heat_evolve(u0, t, 0.0025);
  RadialField mid = heat_evolve(u0, t, 0.005);
  RadialField coarse = heat_evolve(u0, t, 0.01);
  const double e_coarse = rel_l2w(coarse, fine);
  const double e_mid = rel_l2w(mid, fine);
  CHECK(oracle::measured_order(e_coarse, e_mid) > 1.9);
}


TEST_CASE("heat quotients decay exponentially for every tested (p,q) pair") {
  // dispersive-shape surrogate: |e^{t Lap} u0|_q / |u0|_p decays with a
  // positive fitted rate for 1 <= p <= q <= inf on H^3
  auto grid = make_radial_grid(3, 401, 22.0);
  RadialField u0 = radial_bump(grid, 0.5, 0.8);
  const double pairs[5][2] = {{1.0, 2.0}, {2.0, 2.0}, {2.0, kInf}, {1.0, kInf}, {2.0, 4.0}};
  for (const auto& pq : pairs) {
    const double denom = lp_norm(u0, pq[0]);
    Series series;
    RadialField u = u0;
    CrankNicolsonStepper stepper(grid, 0.025);
    double t = 0.0;
    while (t < 15.0 - 1e-9) {
      u = stepper.step(u);
      t += 0.025;
      if (t >= 5.0) series.emplace_back(t, lp_norm(u, pq[1]) / denom);
    }
    auto fit = fit_exponential(series, 5.0, 15.0);
    CHECK(fit.rate > 0.0);
  }
}

TEST_CASE("boundary leakage stays below the support-control threshold") {
  auto grid = make_radial_grid(3, 401, 20.0);
  RadialField u = radial_bump(grid, 0.0, 1.0);
  const double peak0 = u.max_abs();
  RadialField evolved = heat_evolve(u, 10.0, 0.025);
  CHECK(std::abs(evolved[evolved.size() - 1]) < 1e-8 * peak0);
  CHECK(std::abs(evolved[evolved.size() - 2]) < 1e-8 * peak0);
}

TEST_SUITE_END();
