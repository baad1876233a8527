#include "kslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kslab {

namespace {

DecayFit fit_log(const Series& series, double t_lo, double t_hi, DecayFit::Kind kind) {
  std::vector<double> xs, ys;
  for (const auto& [t, v] : series) {
    if (t < t_lo || t > t_hi) continue;
    if (!(v > 0.0))
      throw std::domain_error("decay fit: values in the window must be positive");
    if (kind == DecayFit::Kind::power) {
      if (!(t > 0.0)) throw std::domain_error("decay fit: power law needs t > 0");
      xs.push_back(std::log(t));
    } else {
      xs.push_back(t);
    }
    ys.push_back(std::log(v));
  }
  if (xs.size() < 8) throw std::domain_error("decay fit: needs at least 8 points in window");

  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::domain_error("decay fit: degenerate time window");
  const double slope = sxy / sxx;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + slope * (xs[i] - mx));
    ss_res += e * e;
  }

  DecayFit fit;
  fit.kind = kind;
  fit.rate = kind == DecayFit::Kind::power ? slope : -slope;
  fit.r2 = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.points = static_cast<int>(xs.size());
  fit.log_prefactor = my - slope * mx;
  return fit;
}

}  // namespace

DecayFit fit_power(const Series& series, double t_lo, double t_hi) {
  return fit_log(series, t_lo, t_hi, DecayFit::Kind::power);
}

DecayFit fit_exponential(const Series& series, double t_lo, double t_hi) {
  return fit_log(series, t_lo, t_hi, DecayFit::Kind::exponential);
}

double dispersive_gamma(double p, double q, double delta_n) {
  return 0.5 * delta_n * ((1.0 / p - 1.0 / q) + (8.0 / q) * (1.0 - 1.0 / p));
}

SigmaComponents compute_sigma(double p, int n, double delta_n) {
  if (!(p > n && p < 2.0 * n))
    throw std::domain_error("compute_sigma: requires n < p < 2n");
  const double g1 = dispersive_gamma(0.5 * p, 0.5 * p, delta_n);
  const double g2 = dispersive_gamma(p * n / (4.0 * n - p), 0.5 * p, delta_n);
  const double g3 = dispersive_gamma(p / 3.0, 0.5 * p, delta_n);
  SigmaComponents out;
  out.candidates[0] = g1;
  out.candidates[1] = 0.5 * (g1 + g2);
  out.candidates[2] = 0.5 * (g1 + g3);
  out.sigma = std::min({out.candidates[0], out.candidates[1], out.candidates[2]});
  return out;
}

namespace {

// Steps the perturbed and reference states in lockstep, recording the norm of
// the difference under `diff_norm` at every step.
template <class Calc, class FieldT, class NormFn>
StabilityResult<FieldT> run_perturbed(const Calc& calc, const FieldT& xi,
                                      const FieldT& perturbation, double horizon,
                                      const SolveOptions& opts, NormFn&& diff_norm,
                                      DecayFit::Kind kind, double fit_lo, double fit_hi) {
  StabilityResult<FieldT> result;
  result.perturbation = perturbation;
  const long steps = std::lround(horizon / opts.dt);

  FieldT ref = xi;
  FieldT pert = xi;
  pert.axpy(1.0, perturbation);

  auto record = [&](double t) {
    FieldT d = pert;
    d.axpy(-1.0, ref);
    result.series.emplace_back(t, diff_norm(d));
  };
  record(0.0);
  try {
    for (long k = 0; k < steps; ++k) {
      const double t = static_cast<double>(k) * opts.dt;
      ref = etd_step(calc, ref, t, opts.dt, opts.scheme);
      pert = etd_step(calc, pert, t, opts.dt, opts.scheme);
      if (!pert.all_finite() || !ref.all_finite()) throw BlowUpError(t + opts.dt);
      record(t + opts.dt);
    }
  } catch (const BlowUpError&) {
    result.failed = true;
    return result;
  }

  double peak = 0.0;
  for (const auto& [t, v] : result.series)
    if (t >= fit_lo && t <= fit_hi) peak = std::max(peak, v);
  if (peak > 1e-14) {
    result.fit = fit_log(result.series, fit_lo, fit_hi, kind);
    result.fitted = true;
  }
  return result;
}

}  // namespace

StabilityResult<TorusField> stability_experiment(const TorusCalculus& calc,
                                                 const PeriodicOrbit<TorusField>& orbit,
                                                 double epsilon, double horizon, double r,
                                                 const SolveOptions& opts, double fit_lo,
                                                 double fit_hi) {
  const LorentzParams comparison{r, kInf};
  // narrow enough for a clean power-law window, wide enough to resolve
  const double width = std::max(calc.grid().length / 32.0, 4.0 * calc.grid().spacing());
  TorusField delta = dipole_bump(calc.grid(), width, 0);
  const double base = lorentz_norm(delta, comparison);
  delta *= epsilon == 0.0 ? 0.0 : epsilon / base;
  auto norm = [&](const TorusField& d) { return lorentz_norm(d, comparison); };
  return run_perturbed(calc, orbit.xi, delta, horizon, opts, norm, DecayFit::Kind::power,
                       fit_lo, fit_hi);
}

StabilityResult<RadialField> stability_experiment(const RadialCalculus& calc,
                                                  const PeriodicOrbit<RadialField>& orbit,
                                                  double epsilon, double horizon,
                                                  const SolveOptions& opts, double fit_lo,
                                                  double fit_hi) {
  RadialField delta = radial_bump(calc.grid(), 1.0, 1.0);
  const double base = calc.working_norm(delta);
  delta *= epsilon == 0.0 ? 0.0 : epsilon / base;
  auto norm = [&](const RadialField& d) { return calc.working_norm(d); };
  return run_perturbed(calc, orbit.xi, delta, horizon, opts, norm,
                       DecayFit::Kind::exponential, fit_lo, fit_hi);
}

UniquenessResult uniqueness_experiment(const RadialCalculus& calc, const RadialField& u0,
                                       double horizon, const SolveOptions& opts,
                                       int max_picard) {
  SolveOptions dense = opts;
  dense.snapshot_stride = 1;  // pathways compared snapshot-by-snapshot
  Trajectory<RadialField> stepped = solve_mild(calc, u0, horizon, dense);
  PicardResult<RadialField> picard = picard_iterate(calc, u0, horizon, max_picard, dense);

  UniquenessResult out;
  double scale = 0.0;
  for (const auto& s : stepped.norms) scale = std::max(scale, s.working);
  scale = std::max(scale, 1e-14);
  for (std::size_t j = 0; j < stepped.snapshots.size(); ++j) {
    RadialField d = stepped.snapshots[j];
    d.axpy(-1.0, picard.trajectory.snapshots[j]);
    const double rel = calc.working_norm(d) / scale;
    out.divergence.emplace_back(stepped.times[j], rel);
    out.max_divergence = std::max(out.max_divergence, rel);
  }
  return out;
}

}  // namespace kslab
