#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "kslab/norms.hpp"
#include "kslab/params.hpp"
#include "kslab/spectral.hpp"

namespace kslab {

enum class Scheme { etd1, etd2rk };

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double t)
      : std::runtime_error("blow-up or instability at t = " + std::to_string(t)),
        time(t) {}
  double time;
};

struct NormSample {
  double t = 0.0;
  double working = 0.0;
  double l2 = 0.0;
  double mass = 0.0;
};

template <class FieldT>
struct Trajectory {
  double dt = 0.0;  // step size of the generating solve
  std::vector<double> times;
  std::vector<FieldT> snapshots;
  std::vector<NormSample> norms;  // one per snapshot

  const FieldT& initial() const { return snapshots.front(); }
  const FieldT& final_state() const { return snapshots.back(); }
  double t_begin() const { return times.front(); }
  double t_end() const { return times.back(); }
  bool covers(double t) const { return t >= t_begin() - 1e-12 && t <= t_end() + 1e-12; }

  /// Linear interpolation between snapshots; exact at snapshot times.
  FieldT at(double t) const {
    if (!covers(t)) throw std::domain_error("trajectory: time outside recorded range");
    if (t <= times.front()) return snapshots.front();
    if (t >= times.back()) return snapshots.back();
    std::size_t hi = 1;
    while (times[hi] < t) ++hi;
    const double w = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
    FieldT out = snapshots[hi - 1];
    out *= (1.0 - w);
    out.axpy(w, snapshots[hi]);
    return out;
  }

  double sup_working_norm() const {
    double m = 0.0;
    for (const auto& s : norms) m = std::max(m, s.working);
    return m;
  }
};

struct SolveOptions {
  double dt = 0.01;
  Scheme scheme = Scheme::etd2rk;
  int snapshot_stride = 1;
  double forcing_window_rate = 0.0;  // multiplies the forcing by e^{-rate t}
  int quad_cells = 48;               // graded-quadrature cells for integral operators
};

/// Torus-side calculus: exact spectral semigroup, dealiased quadratic term,
/// L^{n/2,inf} working norm.
class TorusCalculus {
 public:
  using Field = TorusField;

  TorusCalculus(const TorusGrid& grid, const KSParams& params, const ForcingSpec& forcing,
                double forcing_window_rate = 0.0);

  const TorusGrid& grid() const { return grid_; }
  const KSParams& params() const { return params_; }
  const ForcingSpec& forcing() const { return forcing_; }
  double window_rate() const { return window_rate_; }

  Field zero() const { return Field(grid_); }
  Field semigroup(const Field& u, double t) const;
  /// div(-chi kappa u grad K_gamma u + f(t)) with 2/3-rule dealiasing of the product.
  Field nonlinear_term(const Field& u, double t) const;
  /// div(u grad K_gamma w), dealiased, without the chi/kappa scaling.
  Field bilinear_divergence(const Field& u, const Field& w) const;
  Field forcing_divergence(double t) const;
  double forcing_scalar(double t) const;  // time factor including the window
  const Field& forcing_divergence_profile_field() const { return forcing_div_profile_; }
  const TorusSpectrum& forcing_divergence_profile_spectrum() const {
    return forcing_div_spectrum_;
  }

  double working_norm(const Field& u) const { return kslab::working_norm(u, params_.dim); }
  double l2(const Field& u) const { return lp_norm(u, 2.0); }
  double mass(const Field& u) const { return u.mean(); }

 private:
  TorusGrid grid_;
  KSParams params_;
  ForcingSpec forcing_;
  double window_rate_ = 0.0;
  Field forcing_div_profile_;
  TorusSpectrum forcing_div_spectrum_;
};

/// H^n radial calculus: Crank-Nicolson semigroup, L^{p/2} working norm.
class RadialCalculus {
 public:
  using Field = RadialField;

  RadialCalculus(const RadialGrid& grid, const KSParams& params, const ForcingSpec& forcing,
                 double norm_p, double forcing_window_rate = 0.0);

  const RadialGrid& grid() const { return grid_; }
  const KSParams& params() const { return params_; }
  const ForcingSpec& forcing() const { return forcing_; }
  double norm_p() const { return norm_p_; }
  double window_rate() const { return window_rate_; }

  Field zero() const { return Field(grid_); }
  Field semigroup(const Field& u, double t) const;
  Field nonlinear_term(const Field& u, double t) const;
  Field bilinear_divergence(const Field& u, const Field& w) const;
  Field forcing_divergence(double t) const;
  double forcing_scalar(double t) const;
  const Field& forcing_divergence_profile_field() const { return forcing_div_profile_; }

  double working_norm(const Field& u) const { return kslab::working_norm(u, norm_p_); }
  double l2(const Field& u) const { return lp_norm(u, 2.0); }
  double mass(const Field& u) const { return volume_integral(u); }

  const CrankNicolsonStepper& stepper(double dt) const;

 private:
  RadialGrid grid_;
  KSParams params_;
  ForcingSpec forcing_;
  double norm_p_ = 4.0;
  double window_rate_ = 0.0;
  Field forcing_div_profile_;
  mutable std::mutex cache_mutex_;
  mutable std::map<double, std::unique_ptr<CrankNicolsonStepper>> steppers_;
};

template <class FieldT>
struct PicardResult {
  Trajectory<FieldT> trajectory;
  std::vector<double> differences;  // sup-over-time working norm per iteration
  std::vector<double> ratios;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

template <class Calc>
NormSample norm_sample(const Calc& calc, const typename Calc::Field& u, double t) {
  return NormSample{t, calc.working_norm(u), calc.l2(u), calc.mass(u)};
}

}  // namespace detail

/// One exponential-integrator step from (u, t) to t + dt.
/// etd1:    u+ = S(dt)(u + dt N(u,t))
/// etd2rk:  predictor a = S(dt)(u + dt N(u,t)),
///          u+ = S(dt)u + dt/2 (S(dt)N(u,t) + N(a, t+dt))
template <class Calc>
typename Calc::Field etd_step(const Calc& calc, const typename Calc::Field& u, double t,
                              double dt, Scheme scheme) {
  using Field = typename Calc::Field;
  const Field n1 = calc.nonlinear_term(u, t);
  Field su = calc.semigroup(u, dt);
  Field sn = calc.semigroup(n1, dt);
  if (scheme == Scheme::etd1) {
    su.axpy(dt, sn);
    return su;
  }
  Field predictor = su;
  predictor.axpy(dt, sn);
  const Field n2 = calc.nonlinear_term(predictor, t + dt);
  su.axpy(0.5 * dt, sn);
  su.axpy(0.5 * dt, n2);
  return su;
}

template <class Calc>
Trajectory<typename Calc::Field> solve_mild(const Calc& calc, const typename Calc::Field& u0,
                                            double t_final, const SolveOptions& opts) {
  using Field = typename Calc::Field;
  if (!(opts.dt > 0.0)) throw std::domain_error("solve_mild: dt must be positive");
  const double steps_exact = t_final / opts.dt;
  const long steps = std::lround(steps_exact);
  if (steps < 1 || std::abs(steps_exact - static_cast<double>(steps)) > 1e-9)
    throw std::domain_error("solve_mild: horizon must be an integer multiple of dt");

  Trajectory<Field> traj;
  traj.dt = opts.dt;
  traj.times.push_back(0.0);
  traj.snapshots.push_back(u0);
  traj.norms.push_back(detail::norm_sample(calc, u0, 0.0));

  Field u = u0;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * opts.dt;
    u = etd_step(calc, u, t, opts.dt, opts.scheme);
    if (!u.all_finite()) throw BlowUpError(t + opts.dt);
    const bool record = ((k + 1) % opts.snapshot_stride == 0) || (k + 1 == steps);
    if (record) {
      const double tk = static_cast<double>(k + 1) * opts.dt;
      traj.times.push_back(tk);
      traj.snapshots.push_back(u);
      traj.norms.push_back(detail::norm_sample(calc, u, tk));
    }
  }
  return traj;
}

/// B(u,w)(t) = integral_0^t e^{(t-s)Lap} div[u grad K_gamma w](s) ds.
/// Graded midpoint quadrature after s = t - tau^2; the bracket is sampled at
/// trajectory snapshots and interpolated in time.
TorusField bilinear_duhamel(const TorusCalculus& calc, const Trajectory<TorusField>& u,
                            const Trajectory<TorusField>& w, double t, int quad_cells = 48);
RadialField bilinear_duhamel(const RadialCalculus& calc, const Trajectory<RadialField>& u,
                             const Trajectory<RadialField>& w, double t, int quad_cells = 48);

/// L(f)(t) = integral_0^t e^{s Lap} div f(s,.) ds (graded near s = 0).
TorusField forcing_duhamel(const TorusCalculus& calc, double t, int quad_cells = 48);
RadialField forcing_duhamel(const RadialCalculus& calc, double t, int quad_cells = 48);

/// One Picard sweep of the full Duhamel right-hand side evaluated at `times`:
/// out_i = S(t_i)u0 + integral_0^{t_i} e^{(t_i-s)Lap} N(w(s), s) ds.
std::vector<TorusField> duhamel_sweep(const TorusCalculus& calc, const TorusField& u0,
                                      const Trajectory<TorusField>& w,
                                      const std::vector<double>& times, int quad_cells);
std::vector<RadialField> duhamel_sweep(const RadialCalculus& calc, const RadialField& u0,
                                       const Trajectory<RadialField>& w,
                                       const std::vector<double>& times, int quad_cells);

/// Picard iteration on the Duhamel fixed point from u0 over [0, horizon].
/// Throws on three consecutive non-contracting sweeps.
template <class Calc>
PicardResult<typename Calc::Field> picard_iterate(const Calc& calc,
                                                  const typename Calc::Field& u0,
                                                  double horizon, int max_iterations,
                                                  const SolveOptions& opts) {
  using Field = typename Calc::Field;
  const double steps_exact = horizon / opts.dt;
  const long steps = std::lround(steps_exact);
  if (steps < 1 || std::abs(steps_exact - static_cast<double>(steps)) > 1e-9)
    throw std::domain_error("picard_iterate: horizon must be an integer multiple of dt");

  std::vector<double> times(static_cast<std::size_t>(steps) + 1);
  for (long j = 0; j <= steps; ++j) times[static_cast<std::size_t>(j)] = static_cast<double>(j) * opts.dt;

  auto make_traj = [&](std::vector<Field> snaps) {
    Trajectory<Field> tr;
    tr.dt = opts.dt;
    tr.times = times;
    tr.snapshots = std::move(snaps);
    tr.norms.reserve(tr.snapshots.size());
    for (std::size_t j = 0; j < tr.snapshots.size(); ++j)
      tr.norms.push_back(detail::norm_sample(calc, tr.snapshots[j], times[j]));
    return tr;
  };

  // zeroth iterate: pure heat flow of u0
  std::vector<Field> current;
  current.reserve(times.size());
  current.push_back(u0);
  for (std::size_t j = 1; j < times.size(); ++j)
    current.push_back(calc.semigroup(current[j - 1], opts.dt));

  PicardResult<Field> result;
  Trajectory<Field> traj = make_traj(current);
  int stall = 0;
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<Field> next = duhamel_sweep(calc, u0, traj, times, opts.quad_cells);
    double diff = 0.0;
    for (std::size_t j = 0; j < next.size(); ++j) {
      Field d = next[j];
      d.axpy(-1.0, traj.snapshots[j]);
      diff = std::max(diff, calc.working_norm(d));
    }
    result.differences.push_back(diff);
    if (result.differences.size() > 1) {
      const double prev = result.differences[result.differences.size() - 2];
      const double ratio = prev > 0.0 ? diff / prev : 0.0;
      result.ratios.push_back(ratio);
      stall = ratio >= 1.0 ? stall + 1 : 0;
      if (stall >= 3) throw std::runtime_error("contraction failure (data too large)");
    }
    traj = make_traj(std::move(next));
    ++result.iterations;
    const double scale = std::max(traj.sup_working_norm(), 1e-14);
    if (diff <= 1e-13 * std::max(scale, 1.0) || (result.ratios.size() >= 1 && diff == 0.0)) {
      result.converged = true;
      break;
    }
    // geometric-tail stopping: predicted remaining change below floor
    if (result.ratios.size() >= 2) {
      const double r = result.ratios.back();
      if (r < 1.0 && diff * r / (1.0 - r) < 1e-12 * scale) {
        result.converged = true;
        break;
      }
    }
  }
  result.trajectory = std::move(traj);
  return result;
}

}  // namespace kslab
