#include "kslab/estimates.hpp"

#include <cmath>

namespace kslab {

TorusField random_bump_field(const TorusGrid& grid, std::mt19937_64& rng, int bumps) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TorusField f(grid);
  for (int b = 0; b < bumps; ++b) {
    const double w = (0.05 + 0.1 * unit(rng)) * grid.length;
    const double amp = 2.0 * unit(rng) - 1.0;
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
    for (int d = 0; d < grid.dim; ++d) c[static_cast<std::size_t>(d)] =
        (unit(rng) - 0.5) * 0.5 * grid.length;
    f += gaussian_bump(grid, w, amp, c);
  }
  return f;
}

double impulse_l2_decay_exponent(int dim, int points, double length, double t_lo,
                                 double t_hi, int samples) {
  const TorusGrid grid = make_torus_grid(dim, points, length);
  TorusField impulse(grid);
  // unit-mass single cell
  impulse[grid.size() / 2] = 1.0 / grid.cell_measure();
  Series series;
  for (int k = 0; k < samples; ++k) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(k) / (samples - 1));
    series.emplace_back(t, lp_norm(heat_apply(impulse, t), 2.0));
  }
  return fit_power(series, t_lo, t_hi).rate;
}

DispersiveScan dispersive_harness(const TorusGrid& grid, double r, double p, int deriv,
                                  int corpus, unsigned seed) {
  DispersiveScan scan{r, p, deriv, 0.0};
  std::mt19937_64 rng(seed);
  const double weight_pow = 0.5 * deriv + 0.5 * grid.dim * (1.0 / r - 1.0 / p);
  for (int k = 0; k < corpus; ++k) {
    TorusField phi = random_bump_field(grid, rng);
    const double denom = lorentz_norm(phi, {r, kInf});
    if (denom == 0.0) continue;
    for (double t : {0.01, 0.05, 0.2, 1.0, 3.0, 10.0}) {
      const TorusField evolved = heat_apply(phi, t, deriv, 0);
      const double value =
          std::pow(t, weight_pow) * lorentz_norm(evolved, {p, kInf}) / denom;
      scan.supremum = std::max(scan.supremum, value);
    }
  }
  return scan;
}

double YamazakiScan::spread() const {
  double lo = ratios.empty() ? 0.0 : ratios.front();
  double hi = lo;
  for (double v : ratios) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return lo > 0.0 ? hi / lo : 0.0;
}

YamazakiScan yamazaki_harness(const TorusGrid& grid, double r, double p, int corpus,
                              unsigned seed) {
  YamazakiScan scan;
  std::mt19937_64 rng(seed);
  const double alpha = 0.5 * grid.dim * (1.0 / r - 1.0 / p) - 0.5;
  const double k1sq = std::pow(2.0 * std::numbers::pi / grid.length, 2);

  for (int c = 0; c < corpus; ++c) {
    TorusVectorField phi(grid);
    for (auto& comp : phi.component) comp = random_bump_field(grid, rng);
    // |phi| magnitude for the corpus norm
    TorusField mag(grid);
    for (std::int64_t i = 0; i < mag.size(); ++i) {
      double s = 0.0;
      for (const auto& comp : phi.component) s += comp[i] * comp[i];
      mag[i] = std::sqrt(s);
    }
    const double denom = lorentz_norm(mag, {r, 1.0});

    auto integrand = [&](double s) {
      TorusSpectrum acc(grid);
      for (int d = 0; d < grid.dim; ++d) {
        TorusSpectrum comp = forward_fft(phi.component[static_cast<std::size_t>(d)]);
        apply_heat_multiplier(comp, s);
        apply_derivative_multiplier(comp, d);
        acc.axpy(1.0, comp);
      }
      return std::pow(s, alpha) * lorentz_norm(inverse_fft(acc), {p, 1.0});
    };

    // graded mesh in s = tau^2, doubling S until the exponential tail bound
    // (integrand decays at least like e^{-s k1^2}) is below one percent
    double total = 0.0;
    double s_max = 4.0;
    for (;;) {
      total = 0.0;
      const int cells = 96;
      const double dtau = std::sqrt(s_max) / cells;
      for (int q = 0; q < cells; ++q) {
        const double tau = (q + 0.5) * dtau;
        total += 2.0 * tau * dtau * integrand(tau * tau);
      }
      const double tail = integrand(s_max) / k1sq;
      if (tail < 0.01 * total || s_max > 1e4) break;
      s_max *= 2.0;
    }
    scan.truncation_time = s_max;
    scan.ratios.push_back(total / denom);
  }
  return scan;
}

double bilinear_bound_harness(const TorusCalculus& calc, int pairs, unsigned seed,
                              std::span<const double> sample_times) {
  std::mt19937_64 rng(seed);
  const double g = coupling_g(calc.params().gamma, calc.params().dim);
  double worst = 0.0;
  double horizon = 0.0;
  for (double t : sample_times) horizon = std::max(horizon, t);

  for (int k = 0; k < pairs; ++k) {
    TorusField u = apply_zero_mode_policy(random_bump_field(calc.grid(), rng));
    TorusField w = apply_zero_mode_policy(random_bump_field(calc.grid(), rng));
    Trajectory<TorusField> tu;
    tu.dt = horizon;
    tu.times = {0.0, horizon};
    tu.snapshots = {u, u};
    Trajectory<TorusField> tw = tu;
    tw.snapshots = {w, w};
    const double denom = calc.working_norm(u) * calc.working_norm(w) * g;
    if (denom == 0.0) continue;
    for (double t : sample_times) {
      const TorusField b = bilinear_duhamel(calc, tu, tw, t, 64);
      worst = std::max(worst, calc.working_norm(b) / denom);
    }
  }
  return worst;
}

double linear_bound_harness(const TorusGrid& grid, const KSParams& params,
                            const ForcingSpec& base, double r, double p,
                            std::span<const double> widths,
                            std::span<const double> sample_times) {
  double worst = 0.0;
  for (double w : widths) {
    ForcingSpec f = base;
    f.width = w;
    TorusCalculus calc(grid, params, f);
    // sup_t |f(t,.)|_{L^{r,inf}} = |A| |profile|_{L^{r,inf}}
    TorusVectorField prof = forcing_profile(grid, f);
    TorusField mag(grid);
    for (std::int64_t i = 0; i < mag.size(); ++i) {
      double s = 0.0;
      for (const auto& comp : prof.component) s += comp[i] * comp[i];
      mag[i] = std::sqrt(s);
    }
    const double denom = std::abs(f.amplitude) * lorentz_norm(mag, {r, kInf});
    if (denom == 0.0) continue;
    for (double t : sample_times) {
      const TorusField lf = forcing_duhamel(calc, t, 96);
      worst = std::max(worst, lorentz_norm(lf, {p, kInf}) / denom);
    }
  }
  return worst;
}

double semigroup_bound_harness(const TorusGrid& grid, int dim_norm, int corpus,
                               unsigned seed, std::span<const double> sample_times) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < corpus; ++k) {
    TorusField phi = random_bump_field(grid, rng);
    const double denom = working_norm(phi, dim_norm);
    if (denom == 0.0) continue;
    for (double t : sample_times)
      worst = std::max(worst, working_norm(heat_apply(phi, t), dim_norm) / denom);
  }
  return worst;
}

}  // namespace kslab
