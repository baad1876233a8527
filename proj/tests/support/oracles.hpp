// Independent oracles used by the test suites. Everything here is computed
// without touching the solver paths it checks: closed forms, symbolic
// identities, brute-force quadrature.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <complex>

#include "kslab/spectral.hpp"
#include "kslab/torus.hpp"

namespace oracle {

// Free-space heat evolution of A exp(-|x|^2/(2 s)): amplitude and variance.
struct GaussianEvolution {
  double amplitude;
  double variance;
};

inline GaussianEvolution heat_of_gaussian(double amplitude, double variance, double t, int dim) {
  const double v = variance + 2.0 * t;
  return {amplitude * std::pow(variance / v, 0.5 * dim), v};
}

// L^2(R^n) norm of the mass-1 Gaussian density of variance v.
inline double l2_of_unit_gaussian(double variance, int dim) {
  return std::pow(4.0 * std::numbers::pi * variance, -0.25 * dim);
}

// Closed-form heat kernel on H^3.
inline double h3_heat_kernel(double tau, double t) {
  const double ratio = tau == 0.0 ? 1.0 : tau / std::sinh(tau);
  return std::pow(4.0 * std::numbers::pi * t, -1.5) * std::exp(-t) * ratio *
         std::exp(-tau * tau / (4.0 * t));
}

// Volume of the geodesic ball of radius r in H^n by composite Simpson
// quadrature of omega_{n-1} sinh^{n-1}.
inline double hn_ball_volume(int n, double r, int panels = 20000) {
  const double area = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
  const double h = r / panels;
  double sum = 0.0;
  auto f = [&](double tau) { return std::pow(std::sinh(tau), n - 1); };
  for (int i = 0; i < panels; ++i) {
    const double a = i * h;
    sum += (h / 6.0) * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h));
  }
  return area * sum;
}

// Richardson order estimate from errors at resolution h and h/2.
inline double measured_order(double err_coarse, double err_fine) {
  return std::log2(err_coarse / err_fine);
}

// Fixed-seed corpus of smooth random fields: sums of a few Gaussian bumps
// with random centers/widths/signs.
inline kslab::TorusField random_bump_field(const kslab::TorusGrid& grid, std::mt19937_64& rng,
                                           int bumps = 3) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  kslab::TorusField f(grid);
  const double L = grid.length;
  for (int b = 0; b < bumps; ++b) {
    const double w = (0.05 + 0.1 * unit(rng)) * L;
    const double amp = 2.0 * unit(rng) - 1.0;
    double c[4] = {0, 0, 0, 0};
    for (int d = 0; d < grid.dim; ++d) c[d] = (unit(rng) - 0.5) * 0.5 * L;
    std::int64_t stride[4] = {0, 0, 0, 0};
    stride[grid.dim - 1] = 1;
    for (int d = grid.dim - 2; d >= 0; --d) stride[d] = stride[d + 1] * grid.points;
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      double d2 = 0.0;
      std::int64_t rem = i;
      for (int d = 0; d < grid.dim; ++d) {
        double dx = grid.coord(static_cast<int>(rem / stride[d])) - c[d];
        rem %= stride[d];
        while (dx >= 0.5 * L) dx -= L;
        while (dx < -0.5 * L) dx += L;
        d2 += dx * dx;
      }
      f[i] += amp * std::exp(-d2 / (2.0 * w * w));
    }
  }
  return f;
}

// Direct (rearrangement-free) grid L^p integral of |f|^p.
inline double direct_lp_integral(std::span<const double> values, double cell, double p) {
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), p);
  return s * cell;
}

// Per-mode closed form for the T-periodic state of u' = -k^2 u + s(t) D(x)
// with s(t) = A sin(2 pi t/T + phase):
//   xi_k = D_k A Im[e^{i phase} (1 - e^{-T k^2}) / (k^2 + i 2pi/T)] / (1 - e^{-T k^2}).
// The zero mode is projected out (divergence-form source).
inline kslab::TorusField per_mode_periodic_state(const kslab::TorusField& source_profile,
                                                 double period, double amplitude,
                                                 double phase) {
  using namespace kslab;
  const TorusGrid& grid = source_profile.grid();
  TorusSpectrum s = forward_fft(source_profile);
  const double omega = 2.0 * std::numbers::pi / period;
  const double kf = 2.0 * std::numbers::pi / grid.length;
  auto coef = s.coef();
  int freq[4];
  for (std::int64_t i = 0; i < s.size(); ++i) {
    decode_mode(grid, i, freq);
    double k2 = 0.0;
    for (int d = 0; d < grid.dim; ++d) k2 += (kf * freq[d]) * (kf * freq[d]);
    if (k2 == 0.0) {
      coef[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    const std::complex<double> ratio =
        std::exp(std::complex<double>(0.0, phase)) * (1.0 - std::exp(-period * k2)) /
        std::complex<double>(k2, omega);
    coef[static_cast<std::size_t>(i)] *=
        amplitude * ratio.imag() / (1.0 - std::exp(-period * k2));
  }
  return inverse_fft(s);
}

}  // namespace oracle
