#include "kslab/periodic.hpp"

#include <cmath>
#include <numbers>

namespace kslab {

namespace {

void check_periodic_inputs(double period, double window_rate) {
  if (!(period > 0.0)) throw std::domain_error("periodic solve: period must be > 0");
  if (window_rate != 0.0)
    throw std::domain_error("periodic solve: forcing window must be off (rate = 0)");
}

template <class FieldT>
void check_frozen(const Trajectory<FieldT>* omega, double period, int steps, double tol_scale) {
  if (omega == nullptr) return;
  if (omega->times.size() != static_cast<std::size_t>(steps) + 1 ||
      std::abs(omega->t_begin()) > 1e-12 || std::abs(omega->t_end() - period) > 1e-9)
    throw std::domain_error(
        "periodic solve: frozen trajectory must hold steps_per_period+1 snapshots on [0, T]");
  // T-periodicity check by sampling the endpoints
  FieldT gap = omega->snapshots.back();
  gap.axpy(-1.0, omega->snapshots.front());
  if (gap.max_abs() > 1e-6 * std::max(tol_scale, 1.0))
    throw std::domain_error("periodic solve: frozen coefficient is not T-periodic");
}

// ---------------------------------------------------------------------------
// Torus engine: everything stays in spectral space, the one-period propagator
// is the diagonal multiplier exp(-T k^2), and P(xi) = HK . xi + c is affine.

class TorusEngine {
 public:
  using Calc = TorusCalculus;
  using Field = TorusField;
  using State = TorusSpectrum;

  TorusEngine(const TorusCalculus& calc, double period, const PeriodicOptions& opt)
      : calc_(calc), period_(period), steps_(opt.steps_per_period), scheme_(opt.scheme) {
    check_periodic_inputs(period, calc.window_rate());
    if (steps_ < 2) throw std::domain_error("periodic solve: needs at least 2 steps");
    dt_ = period_ / steps_;
    const TorusGrid& g = calc.grid();
    const std::int64_t m = spectrum_size(g);
    heat_dt_.resize(static_cast<std::size_t>(m));
    heat_period_.resize(static_cast<std::size_t>(m));
    const double kf = 2.0 * std::numbers::pi / g.length;
    int freq[4];
    for (std::int64_t i = 0; i < m; ++i) {
      decode_mode(g, i, freq);
      double k2 = 0.0;
      for (int d = 0; d < g.dim; ++d) k2 += (kf * freq[d]) * (kf * freq[d]);
      const double h = std::exp(-dt_ * k2);
      heat_dt_[static_cast<std::size_t>(i)] = h;
      heat_period_[static_cast<std::size_t>(i)] = std::pow(h, steps_);
    }
    s1_.resize(static_cast<std::size_t>(steps_));
    s2_.resize(static_cast<std::size_t>(steps_));
    for (int j = 0; j < steps_; ++j) {
      s1_[static_cast<std::size_t>(j)] = calc.forcing_scalar(j * dt_);
      s2_[static_cast<std::size_t>(j)] = calc.forcing_scalar((j + 1) * dt_);
    }
    freeze(nullptr);
  }

  double dt() const { return dt_; }
  int steps() const { return steps_; }

  /// Freezes the coefficient trajectory: bracket spectra at step nodes plus
  /// stage-consistent corrector values (stage = ETD1 predictor of the frozen
  /// snapshot, so the outer fixed point is a discrete orbit of the nonlinear
  /// stepper).
  void freeze(const Trajectory<Field>* omega) {
    bracket1_.clear();
    bracket2_.clear();
    if (omega != nullptr) {
      const double scale = -calc_.params().chi * calc_.params().kappa;
      if (scale != 0.0) {
        bracket1_.reserve(static_cast<std::size_t>(steps_));
        bracket2_.reserve(static_cast<std::size_t>(steps_));
        for (int j = 0; j < steps_; ++j) {
          const Field& wj = omega->snapshots[static_cast<std::size_t>(j)];
          Field bil = calc_.bilinear_divergence(wj, wj);
          bil *= scale;
          TorusSpectrum b1 = forward_fft(bil);
          // stage: one ETD1 predictor from the frozen snapshot
          Field n1 = bil;
          n1.axpy(s1_[static_cast<std::size_t>(j)], calc_.forcing_divergence_profile_field());
          Field stage = wj;
          stage.axpy(dt_, n1);
          stage = heat_apply(stage, dt_);
          Field bil2 = calc_.bilinear_divergence(stage, stage);
          bil2 *= scale;
          bracket1_.push_back(std::move(b1));
          bracket2_.push_back(forward_fft(bil2));
        }
      }
    }
    duhamel_ = run_spectral(State(calc_.grid()), nullptr, 0);
  }

  State to_state(const Field& f) const { return forward_fft(f); }
  Field to_field(const State& s) const { return inverse_fft(s); }
  State zero_state() const { return State(calc_.grid()); }

  State apply_P(const State& xi) const {
    State out = xi;
    apply_P_inplace(out);
    return out;
  }

  void apply_P_inplace(State& xi) const {
    auto c = xi.coef();
    auto d = duhamel_.coef();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = heat_period_[i] * c[i] + d[i];
  }

  double field_norm(const State& s) const { return calc_.working_norm(to_field(s)); }
  double duhamel_norm() const { return field_norm(duhamel_); }

  /// Stepped linear solve from xi; optionally records into a trajectory.
  Trajectory<Field> solve(const Field& xi, int stride) const {
    Trajectory<Field> traj;
    traj.dt = dt_;
    run_spectral(to_state(xi), &traj, stride);
    return traj;
  }

  Field poincare(const Field& xi) const {
    return to_field(run_spectral(to_state(xi), nullptr, 0));
  }

 private:
  // Runs the ETD scheme over one period in spectral space. When traj is
  // given, snapshots/norms are recorded every `stride` steps.
  State run_spectral(State u, Trajectory<Field>* traj, int stride) const {
    auto source1 = [&](int j) {
      State n(calc_.grid());
      n.axpy(s1_[static_cast<std::size_t>(j)], calc_.forcing_divergence_profile_spectrum());
      if (!bracket1_.empty()) n.axpy(1.0, bracket1_[static_cast<std::size_t>(j)]);
      return n;
    };
    auto source2 = [&](int j) {
      State n(calc_.grid());
      n.axpy(s2_[static_cast<std::size_t>(j)], calc_.forcing_divergence_profile_spectrum());
      if (!bracket2_.empty()) n.axpy(1.0, bracket2_[static_cast<std::size_t>(j)]);
      return n;
    };
    auto record = [&](const State& s, double t) {
      if (traj == nullptr) return;
      Field f = to_field(s);
      traj->times.push_back(t);
      traj->norms.push_back(detail::norm_sample(calc_, f, t));
      traj->snapshots.push_back(std::move(f));
    };
    record(u, 0.0);
    for (int j = 0; j < steps_; ++j) {
      const State n1 = source1(j);
      auto uc = u.coef();
      auto n1c = n1.coef();
      if (scheme_ == Scheme::etd1) {
        for (std::size_t i = 0; i < uc.size(); ++i)
          uc[i] = heat_dt_[i] * (uc[i] + dt_ * n1c[i]);
      } else {
        const State n2 = source2(j);
        auto n2c = n2.coef();
        for (std::size_t i = 0; i < uc.size(); ++i)
          uc[i] = heat_dt_[i] * uc[i] + 0.5 * dt_ * (heat_dt_[i] * n1c[i] + n2c[i]);
      }
      if (traj != nullptr && ((j + 1) % stride == 0 || j + 1 == steps_))
        record(u, (j + 1) * dt_);
    }
    return u;
  }

  const TorusCalculus& calc_;
  double period_;
  int steps_;
  Scheme scheme_;
  double dt_ = 0.0;
  std::vector<double> heat_dt_;
  std::vector<double> heat_period_;
  std::vector<double> s1_, s2_;
  std::vector<TorusSpectrum> bracket1_, bracket2_;
  State duhamel_;
};

// ---------------------------------------------------------------------------
// Radial engine: Crank-Nicolson propagator, fields as states.

class RadialEngine {
 public:
  using Calc = RadialCalculus;
  using Field = RadialField;
  using State = RadialField;

  RadialEngine(const RadialCalculus& calc, double period, const PeriodicOptions& opt)
      : calc_(calc),
        period_(period),
        steps_(opt.steps_per_period),
        scheme_(opt.scheme),
        dt_(period / opt.steps_per_period),
        stepper_(calc.grid(), period / opt.steps_per_period) {
    check_periodic_inputs(period, calc.window_rate());
    if (steps_ < 2) throw std::domain_error("periodic solve: needs at least 2 steps");
    s1_.resize(static_cast<std::size_t>(steps_));
    s2_.resize(static_cast<std::size_t>(steps_));
    for (int j = 0; j < steps_; ++j) {
      s1_[static_cast<std::size_t>(j)] = calc.forcing_scalar(j * dt_);
      s2_[static_cast<std::size_t>(j)] = calc.forcing_scalar((j + 1) * dt_);
    }
    freeze(nullptr);
  }

  double dt() const { return dt_; }
  int steps() const { return steps_; }

  void freeze(const Trajectory<Field>* omega) {
    bracket1_.clear();
    bracket2_.clear();
    if (omega != nullptr) {
      const double scale = -calc_.params().chi * calc_.params().kappa;
      if (scale != 0.0) {
        bracket1_.reserve(static_cast<std::size_t>(steps_));
        bracket2_.reserve(static_cast<std::size_t>(steps_));
        for (int j = 0; j < steps_; ++j) {
          const Field& wj = omega->snapshots[static_cast<std::size_t>(j)];
          Field bil = calc_.bilinear_divergence(wj, wj);
          bil *= scale;
          Field n1 = bil;
          n1.axpy(s1_[static_cast<std::size_t>(j)], calc_.forcing_divergence_profile_field());
          Field stage = wj;
          stage.axpy(dt_, n1);
          stage = stepper_.step(stage);
          Field bil2 = calc_.bilinear_divergence(stage, stage);
          bil2 *= scale;
          bracket1_.push_back(std::move(bil));
          bracket2_.push_back(std::move(bil2));
        }
      }
    }
    duhamel_ = run_steps(calc_.zero(), nullptr, 0);
  }

  State to_state(const Field& f) const { return f; }
  Field to_field(const State& s) const { return s; }
  State zero_state() const { return calc_.zero(); }

  State apply_P(const State& xi) const {
    State out = xi;
    apply_P_inplace(out);
    return out;
  }

  void apply_P_inplace(State& xi) const {
    for (int j = 0; j < steps_; ++j) xi = stepper_.step(xi);
    xi.axpy(1.0, duhamel_);
  }

  double field_norm(const State& s) const { return calc_.working_norm(s); }
  double duhamel_norm() const { return calc_.working_norm(duhamel_); }

  Trajectory<Field> solve(const Field& xi, int stride) const {
    Trajectory<Field> traj;
    traj.dt = dt_;
    run_steps(xi, &traj, stride);
    return traj;
  }

  Field poincare(const Field& xi) const { return run_steps(xi, nullptr, 0); }

 private:
  Field source1(int j) const {
    Field n = calc_.zero();
    n.axpy(s1_[static_cast<std::size_t>(j)], calc_.forcing_divergence_profile_field());
    if (!bracket1_.empty()) n.axpy(1.0, bracket1_[static_cast<std::size_t>(j)]);
    return n;
  }
  Field source2(int j) const {
    Field n = calc_.zero();
    n.axpy(s2_[static_cast<std::size_t>(j)], calc_.forcing_divergence_profile_field());
    if (!bracket2_.empty()) n.axpy(1.0, bracket2_[static_cast<std::size_t>(j)]);
    return n;
  }

  Field run_steps(Field u, Trajectory<Field>* traj, int stride) const {
    auto record = [&](const Field& f, double t) {
      if (traj == nullptr) return;
      traj->times.push_back(t);
      traj->norms.push_back(detail::norm_sample(calc_, f, t));
      traj->snapshots.push_back(f);
    };
    record(u, 0.0);
    for (int j = 0; j < steps_; ++j) {
      const Field n1 = source1(j);
      Field su = stepper_.step(u);
      Field sn = stepper_.step(n1);
      if (scheme_ == Scheme::etd1) {
        su.axpy(dt_, sn);
        u = std::move(su);
      } else {
        su.axpy(0.5 * dt_, sn);
        su.axpy(0.5 * dt_, source2(j));
        u = std::move(su);
      }
      if (traj != nullptr && ((j + 1) % stride == 0 || j + 1 == steps_))
        record(u, (j + 1) * dt_);
    }
    return u;
  }

  const RadialCalculus& calc_;
  double period_;
  int steps_;
  Scheme scheme_;
  double dt_;
  CrankNicolsonStepper stepper_;
  std::vector<double> s1_, s2_;
  std::vector<Field> bracket1_, bracket2_;
  State duhamel_;
};

// ---------------------------------------------------------------------------
// Shared Cesaro iteration: q_{k+1} = P(q_k), averaged; stopping rule uses the
// exact identity P(avg_n) - avg_n = (q_{n+1} - q_1)/n for affine P.

template <class Engine>
std::pair<typename Engine::Field, CesaroReport> run_cesaro(
    const Engine& engine, const PeriodicOptions& opt,
    const typename Engine::Field* warm_start) {
  using State = typename Engine::State;
  CesaroReport report;

  const double tol = opt.tol_relative
                         ? std::max(opt.tol_cesaro * engine.duhamel_norm(), 1e-15)
                         : opt.tol_cesaro;

  State q = warm_start != nullptr ? engine.to_state(*warm_start) : engine.zero_state();

  if (opt.plain_fixed_point) {
    for (long n = 1; n <= opt.max_cesaro; ++n) {
      State next = engine.apply_P(q);
      State diff = next;
      diff.axpy(-1.0, q);
      const double r = engine.field_norm(diff);
      report.iterations = n;
      q = std::move(next);
      if (r <= tol) {
        report.converged = true;
        report.residual = r;
        break;
      }
    }
    if (!report.converged)
      throw std::runtime_error("Cesaro non-convergence (plain fixed-point mode)");
    return {engine.to_field(q), report};
  }

  // optional geometric pre-iterations exploiting the spectral gap; the
  // averaging below still runs its own stopping rule from the result
  for (int b = 0; b < opt.bootstrap_plain; ++b) {
    State next = engine.apply_P(q);
    State diff = next;
    diff.axpy(-1.0, q);
    q = std::move(next);
    if (engine.field_norm(diff) <= 0.5 * tol) break;
  }

  const State q1 = engine.apply_P(q);  // q_1
  State sum = q1;
  State q_cur = q1;
  long n = 1;
  long next_check = 1;
  State avg = sum;  // avg at n = 1

  while (true) {
    if (n >= next_check || n >= opt.max_cesaro) {
      State q_next = engine.apply_P(q_cur);  // q_{n+1}
      // affine identity: P(avg_n) - avg_n = (q_{n+1} - q_1)/n
      State resid = q_next;
      resid.axpy(-1.0, q1);
      resid *= 1.0 / static_cast<double>(n);
      const double r = engine.field_norm(resid);
      report.residual_history.push_back(r);
      report.iterations = n;
      if (r <= tol) {
        avg = sum;
        avg *= 1.0 / static_cast<double>(n);
        report.converged = true;
        report.residual = r;
        break;
      }
      if (n >= opt.max_cesaro) break;
      // the residual decays like 1/n; jump most of the predicted distance
      const long predicted =
          r > 0.0 ? static_cast<long>(0.95 * static_cast<double>(n) * r / tol) : n + 1;
      next_check = std::min(std::max(n + 1, predicted), (long)opt.max_cesaro);
      q_cur = std::move(q_next);
      sum.axpy(1.0, q_cur);
      ++n;
    } else {
      engine.apply_P_inplace(q_cur);
      sum.axpy(1.0, q_cur);
      ++n;
    }
  }
  if (!report.converged)
    throw std::runtime_error("Cesaro non-convergence: residual " +
                             std::to_string(report.residual_history.empty()
                                                ? -1.0
                                                : report.residual_history.back()) +
                             " after max iterations");
  return {engine.to_field(avg), report};
}

template <class Engine, class Calc>
PeriodicOrbit<typename Engine::Field> run_linear_orbit(
    const Calc& calc, const Engine& engine, const PeriodicOptions& opt,
    const typename Engine::Field* warm) {
  PeriodicOrbit<typename Engine::Field> orbit;
  auto [xi, cesaro] = run_cesaro(engine, opt, warm);
  xi = apply_zero_mode_policy(xi);
  orbit.xi = xi;
  orbit.orbit = engine.solve(xi, 1);
  orbit.report.residual = cesaro.residual;
  orbit.report.cesaro_iters = cesaro.iterations;
  orbit.report.converged = cesaro.converged;
  orbit.report.xi_norm = calc.working_norm(xi);
  orbit.report.norm_history.push_back(orbit.orbit.sup_working_norm());
  return orbit;
}

template <class Engine, class Calc>
PeriodicOrbit<typename Engine::Field> run_outer(const Calc& calc, double period,
                                                const PeriodicOptions& opt_in) {
  using Field = typename Engine::Field;
  // inner solves measure their tolerance against the linear response scale
  // and bootstrap through the spectral gap; the cold-start construction is
  // exercised by the public cesaro_fixed_point entry point
  PeriodicOptions opt = opt_in;
  opt.tol_relative = true;
  if (opt.bootstrap_plain == 0) opt.bootstrap_plain = 400;
  Engine engine(calc, period, opt);

  PeriodicOrbit<Field> result;
  PeriodicSolveReport& rep = result.report;

  Trajectory<Field> current;  // previous outer iterate; empty means zero
  Field xi_prev = calc.zero();
  bool have_prev = false;
  int stall = 0;

  for (int m = 1; m <= opt.max_outer; ++m) {
    auto [xi, cesaro] = run_cesaro(engine, opt, have_prev ? &xi_prev : nullptr);
    xi = apply_zero_mode_policy(xi);
    Trajectory<Field> next = engine.solve(xi, 1);

    const double sup_norm = next.sup_working_norm();
    rep.norm_history.push_back(sup_norm);
    rep.cesaro_iters += cesaro.iterations;
    rep.residual = cesaro.residual;
    rep.xi_norm = calc.working_norm(xi);
    rep.outer_iters = m;

    double diff = 0.0;
    for (std::size_t j = 0; j < next.snapshots.size(); ++j) {
      Field d = next.snapshots[j];
      if (have_prev)
        d.axpy(-1.0, current.snapshots[j]);
      diff = std::max(diff, calc.working_norm(d));
    }
    rep.outer_differences.push_back(diff);
    if (rep.outer_differences.size() > 1) {
      const double prev = rep.outer_differences[rep.outer_differences.size() - 2];
      const double ratio = prev > 0.0 ? diff / prev : 0.0;
      rep.outer_ratios.push_back(ratio);
      stall = ratio >= 1.0 ? stall + 1 : 0;
      if (stall >= 3) throw std::runtime_error("outside small-data regime");
    }
    if (sup_norm > opt.rho) throw std::runtime_error("outside small-data regime");

    current = std::move(next);
    xi_prev = xi;
    have_prev = true;
    result.xi = std::move(xi);

    const double scale = std::max(sup_norm, 1e-14);
    if (diff < opt.tol_outer * scale) {
      rep.converged = true;
      break;
    }
    engine.freeze(&current);
  }
  if (!rep.converged) throw std::runtime_error("outer iteration did not converge");
  result.orbit = std::move(current);
  rep.omega_norm = result.orbit.sup_working_norm();
  return result;
}

double torus_forcing_norm(const TorusCalculus& calc) {
  // |f| magnitude profile in the (clamped) L^{n/3,inf} norm, times sup |A sin|
  TorusVectorField prof = forcing_profile(calc.grid(), calc.forcing());
  TorusField mag(calc.grid());
  for (std::int64_t i = 0; i < mag.size(); ++i) {
    double s = 0.0;
    for (const auto& compo : prof.component) s += compo[i] * compo[i];
    mag[i] = std::sqrt(s);
  }
  const double p = std::max(1.0, calc.params().dim / 3.0);
  return std::abs(calc.forcing().amplitude) * lorentz_norm(mag, LorentzParams{p, kInf});
}

double radial_forcing_norm(const RadialCalculus& calc) {
  RadialField prof = forcing_profile(calc.grid(), calc.forcing());
  const double p = std::max(1.0, calc.norm_p() / 3.0);
  return std::abs(calc.forcing().amplitude) * lp_norm(prof, p);
}

template <class Calc>
void fill_bound_check(const Calc& calc, double forcing_norm, PeriodicSolveReport& rep,
                      const PeriodicOptions& opt) {
  const auto& c = opt.constants;
  const double g = coupling_g(calc.params().gamma, calc.params().dim);
  rep.forcing_norm = forcing_norm;
  rep.bound_check = (c.c_hat + 1.0) * (calc.params().kappa * c.k_hat * g *
                                           rep.omega_norm * rep.omega_norm +
                                       c.c_tilde * forcing_norm);
}

}  // namespace

TorusField apply_zero_mode_policy(const TorusField& f) {
  TorusField out = f;
  const double m = out.mean();
  for (auto& v : out.values()) v -= m;
  return out;
}

RadialField apply_zero_mode_policy(const RadialField& f) { return f; }

TorusField poincare_map(const TorusCalculus& calc, const TorusField& xi,
                        const Trajectory<TorusField>* omega, double period,
                        const PeriodicOptions& opt) {
  TorusEngine engine(calc, period, opt);
  check_frozen(omega, period, engine.steps(), opt.rho);
  if (omega != nullptr) engine.freeze(omega);
  return engine.poincare(xi);
}

RadialField poincare_map(const RadialCalculus& calc, const RadialField& xi,
                         const Trajectory<RadialField>* omega, double period,
                         const PeriodicOptions& opt) {
  RadialEngine engine(calc, period, opt);
  check_frozen(omega, period, engine.steps(), opt.rho);
  if (omega != nullptr) engine.freeze(omega);
  return engine.poincare(xi);
}

std::pair<TorusField, CesaroReport> cesaro_fixed_point(
    const TorusCalculus& calc, const Trajectory<TorusField>* omega, double period,
    const PeriodicOptions& opt, const TorusField* warm_start) {
  TorusEngine engine(calc, period, opt);
  check_frozen(omega, period, engine.steps(), opt.rho);
  if (omega != nullptr) engine.freeze(omega);
  return run_cesaro(engine, opt, warm_start);
}

std::pair<RadialField, CesaroReport> cesaro_fixed_point(
    const RadialCalculus& calc, const Trajectory<RadialField>* omega, double period,
    const PeriodicOptions& opt, const RadialField* warm_start) {
  RadialEngine engine(calc, period, opt);
  check_frozen(omega, period, engine.steps(), opt.rho);
  if (omega != nullptr) engine.freeze(omega);
  return run_cesaro(engine, opt, warm_start);
}

PeriodicOrbit<TorusField> linear_periodic_orbit(const TorusCalculus& calc,
                                                const Trajectory<TorusField>* omega,
                                                double period, const PeriodicOptions& opt) {
  TorusEngine engine(calc, period, opt);
  check_frozen(omega, period, engine.steps(), opt.rho);
  if (omega != nullptr) engine.freeze(omega);
  auto orbit = run_linear_orbit(calc, engine, opt, static_cast<const TorusField*>(nullptr));
  orbit.report.omega_norm = omega != nullptr ? omega->sup_working_norm() : 0.0;
  fill_bound_check(calc, torus_forcing_norm(calc), orbit.report, opt);
  return orbit;
}

PeriodicOrbit<RadialField> linear_periodic_orbit(const RadialCalculus& calc,
                                                 const Trajectory<RadialField>* omega,
                                                 double period, const PeriodicOptions& opt) {
  RadialEngine engine(calc, period, opt);
  check_frozen(omega, period, engine.steps(), opt.rho);
  if (omega != nullptr) engine.freeze(omega);
  auto orbit = run_linear_orbit(calc, engine, opt, static_cast<const RadialField*>(nullptr));
  orbit.report.omega_norm = omega != nullptr ? omega->sup_working_norm() : 0.0;
  fill_bound_check(calc, radial_forcing_norm(calc), orbit.report, opt);
  return orbit;
}

PeriodicOrbit<TorusField> find_periodic_orbit(const TorusCalculus& calc, double period,
                                              const PeriodicOptions& opt) {
  auto orbit = run_outer<TorusEngine>(calc, period, opt);
  fill_bound_check(calc, torus_forcing_norm(calc), orbit.report, opt);
  return orbit;
}

PeriodicOrbit<RadialField> find_periodic_orbit(const RadialCalculus& calc, double period,
                                               const PeriodicOptions& opt) {
  auto orbit = run_outer<RadialEngine>(calc, period, opt);
  fill_bound_check(calc, radial_forcing_norm(calc), orbit.report, opt);
  return orbit;
}

}  // namespace kslab
