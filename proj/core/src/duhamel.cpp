#include "kslab/duhamel.hpp"

#include <cmath>

namespace kslab {

TorusCalculus::TorusCalculus(const TorusGrid& grid, const KSParams& params,
                             const ForcingSpec& forcing, double forcing_window_rate)
    : grid_(grid), params_(params), forcing_(forcing), window_rate_(forcing_window_rate) {
  validate(params_);
  validate(forcing_);
  forcing_div_profile_ = forcing_divergence_profile(grid_, forcing_);
  forcing_div_spectrum_ = forward_fft(forcing_div_profile_);
}

TorusField TorusCalculus::semigroup(const Field& u, double t) const {
  return heat_apply(u, t);
}

double TorusCalculus::forcing_scalar(double t) const {
  double s = forcing_.time_factor(t);
  if (window_rate_ != 0.0) s *= std::exp(-window_rate_ * t);
  return s;
}

TorusField TorusCalculus::forcing_divergence(double t) const {
  Field out = forcing_div_profile_;
  out *= forcing_scalar(t);
  return out;
}

TorusField TorusCalculus::bilinear_divergence(const Field& u, const Field& w) const {
  if (params_.gamma == 0.0 && std::abs(w.mean()) > 1e-10 * w.max_abs())
    throw std::domain_error("elliptic inverse undefined on nonzero-mean input at gamma=0");
  const int dim = grid_.dim;

  TorusSpectrum w_hat = forward_fft(w);
  apply_helmholtz_inverse_multiplier(w_hat, params_.gamma, 1.0);

  TorusSpectrum u_hat = forward_fft(u);
  apply_dealias_mask(u_hat);
  const Field u_smooth = inverse_fft(u_hat);

  TorusSpectrum acc(grid_);
  for (int a = 0; a < dim; ++a) {
    TorusSpectrum grad_a = w_hat;
    apply_derivative_multiplier(grad_a, a);
    apply_dealias_mask(grad_a);
    Field prod = inverse_fft(grad_a);
    auto pv = prod.values();
    auto uv = u_smooth.values();
    for (std::size_t i = 0; i < pv.size(); ++i) pv[i] *= uv[i];
    TorusSpectrum p_hat = forward_fft(prod);
    apply_derivative_multiplier(p_hat, a);
    acc.axpy(1.0, p_hat);
  }
  apply_dealias_mask(acc);
  return inverse_fft(acc);
}

TorusField TorusCalculus::nonlinear_term(const Field& u, double t) const {
  Field out(grid_);
  if (params_.chi * params_.kappa != 0.0) {
    out = bilinear_divergence(u, u);
    out *= -params_.chi * params_.kappa;
  }
  out.axpy(forcing_scalar(t), forcing_div_profile_);
  return out;
}

RadialCalculus::RadialCalculus(const RadialGrid& grid, const KSParams& params,
                               const ForcingSpec& forcing, double norm_p,
                               double forcing_window_rate)
    : grid_(grid),
      params_(params),
      forcing_(forcing),
      norm_p_(norm_p),
      window_rate_(forcing_window_rate) {
  validate(params_);
  validate(forcing_);
  if (!(norm_p_ > grid.dim && norm_p_ < 2.0 * grid.dim))
    throw std::domain_error("radial calculus: working exponent p must satisfy n < p < 2n");
  forcing_div_profile_ = forcing_divergence_profile(grid_, forcing_);
}

const CrankNicolsonStepper& RadialCalculus::stepper(double dt) const {
  std::scoped_lock lock(cache_mutex_);
  auto& slot = steppers_[dt];
  if (!slot) slot = std::make_unique<CrankNicolsonStepper>(grid_, dt);
  return *slot;
}

RadialField RadialCalculus::semigroup(const Field& u, double t) const {
  if (t < 0.0) throw std::domain_error("semigroup: t must be >= 0");
  if (t == 0.0) return u;
  const double budget = 0.5 * grid_.spacing();
  const int steps = std::max(1, static_cast<int>(std::ceil(t / budget)));
  const CrankNicolsonStepper& s = stepper(t / steps);
  Field out = u;
  for (int k = 0; k < steps; ++k) out = s.step(out);
  return out;
}

double RadialCalculus::forcing_scalar(double t) const {
  double s = forcing_.time_factor(t);
  if (window_rate_ != 0.0) s *= std::exp(-window_rate_ * t);
  return s;
}

RadialField RadialCalculus::forcing_divergence(double t) const {
  Field out = forcing_div_profile_;
  out *= forcing_scalar(t);
  return out;
}

RadialField RadialCalculus::bilinear_divergence(const Field& u, const Field& w) const {
  const Field grad_v = elliptic_inverse_grad(w, params_.gamma, 1.0);
  Field flux(grid_);
  for (int i = 0; i < flux.size(); ++i) flux[i] = u[i] * grad_v[i];
  return radial_divergence(flux);
}

RadialField RadialCalculus::nonlinear_term(const Field& u, double t) const {
  Field out(grid_);
  if (params_.chi * params_.kappa != 0.0) {
    out = bilinear_divergence(u, u);
    out *= -params_.chi * params_.kappa;
  }
  out.axpy(forcing_scalar(t), forcing_div_profile_);
  return out;
}

namespace {

// Midpoint nodes of the graded substitution s = t - tau^2 (torus/radial
// bilinear term) or s = tau^2 (forcing term); weight per node is 2 tau dtau.
struct GradedNode {
  double s;
  double weight;
  double heat_time;  // semigroup time applied to the integrand
};

std::vector<GradedNode> graded_nodes(double t, int cells, bool singular_at_end) {
  std::vector<GradedNode> nodes;
  if (t <= 0.0 || cells < 1) return nodes;
  const double dtau = std::sqrt(t) / cells;
  nodes.reserve(static_cast<std::size_t>(cells));
  for (int q = 0; q < cells; ++q) {
    const double tau = (q + 0.5) * dtau;
    const double w = 2.0 * tau * dtau;
    if (singular_at_end) {
      nodes.push_back({t - tau * tau, w, tau * tau});
    } else {
      nodes.push_back({tau * tau, w, tau * tau});
    }
  }
  return nodes;
}

// Spectrum of the bilinear bracket divergence at trajectory snapshot times,
// linearly interpolated at s.
class TorusBracketTable {
 public:
  TorusBracketTable(const TorusCalculus& calc, const Trajectory<TorusField>& u,
                    const Trajectory<TorusField>& w)
      : times_(u.times) {
    table_.reserve(times_.size());
    for (std::size_t j = 0; j < times_.size(); ++j)
      table_.push_back(forward_fft(calc.bilinear_divergence(u.snapshots[j], w.snapshots[j])));
  }

  TorusSpectrum at(double s) const {
    if (s <= times_.front()) return table_.front();
    if (s >= times_.back()) return table_.back();
    std::size_t hi = 1;
    while (times_[hi] < s) ++hi;
    const double w = (s - times_[hi - 1]) / (times_[hi] - times_[hi - 1]);
    TorusSpectrum out = table_[hi - 1];
    out *= (1.0 - w);
    out.axpy(w, table_[hi]);
    return out;
  }

 private:
  std::vector<double> times_;
  std::vector<TorusSpectrum> table_;
};

void check_coverage(const Trajectory<TorusField>& u, const Trajectory<TorusField>& w,
                    double t) {
  if (!u.covers(0.0) || !u.covers(t) || !w.covers(0.0) || !w.covers(t))
    throw std::domain_error("bilinear_duhamel: insufficient trajectory coverage");
}

}  // namespace

TorusField bilinear_duhamel(const TorusCalculus& calc, const Trajectory<TorusField>& u,
                            const Trajectory<TorusField>& w, double t, int quad_cells) {
  check_coverage(u, w, t);
  if (t == 0.0) return calc.zero();
  const TorusBracketTable table(calc, u, w);
  TorusSpectrum acc(calc.grid());
  for (const GradedNode& node : graded_nodes(t, quad_cells, true)) {
    TorusSpectrum b = table.at(node.s);
    apply_heat_multiplier(b, node.heat_time);
    acc.axpy(node.weight, b);
  }
  return inverse_fft(acc);
}

RadialField bilinear_duhamel(const RadialCalculus& calc, const Trajectory<RadialField>& u,
                             const Trajectory<RadialField>& w, double t, int quad_cells) {
  if (!u.covers(0.0) || !u.covers(t) || !w.covers(0.0) || !w.covers(t))
    throw std::domain_error("bilinear_duhamel: insufficient trajectory coverage");
  if (t == 0.0) return calc.zero();

  // bracket divergence at snapshot times, interpolated in s
  std::vector<RadialField> table;
  table.reserve(u.times.size());
  for (std::size_t j = 0; j < u.times.size(); ++j)
    table.push_back(calc.bilinear_divergence(u.snapshots[j], w.snapshots[j]));

  auto bracket_at = [&](double s) {
    if (s <= u.times.front()) return table.front();
    if (s >= u.times.back()) return table.back();
    std::size_t hi = 1;
    while (u.times[hi] < s) ++hi;
    const double lam = (s - u.times[hi - 1]) / (u.times[hi] - u.times[hi - 1]);
    RadialField out = table[hi - 1];
    out *= (1.0 - lam);
    out.axpy(lam, table[hi]);
    return out;
  };

  RadialField acc = calc.zero();
  for (const GradedNode& node : graded_nodes(t, quad_cells, true)) {
    RadialField b = calc.semigroup(bracket_at(node.s), node.heat_time);
    acc.axpy(node.weight, b);
  }
  return acc;
}

TorusField forcing_duhamel(const TorusCalculus& calc, double t, int quad_cells) {
  if (t < 0.0) throw std::domain_error("forcing_duhamel: t must be >= 0");
  if (t == 0.0) return calc.zero();
  TorusSpectrum acc(calc.grid());
  for (const GradedNode& node : graded_nodes(t, quad_cells, false)) {
    TorusSpectrum b = calc.forcing_divergence_profile_spectrum();
    b *= calc.forcing_scalar(node.s);
    apply_heat_multiplier(b, node.heat_time);
    acc.axpy(node.weight, b);
  }
  return inverse_fft(acc);
}

RadialField forcing_duhamel(const RadialCalculus& calc, double t, int quad_cells) {
  if (t < 0.0) throw std::domain_error("forcing_duhamel: t must be >= 0");
  if (t == 0.0) return calc.zero();
  RadialField acc = calc.zero();
  for (const GradedNode& node : graded_nodes(t, quad_cells, false)) {
    RadialField b = calc.semigroup(calc.forcing_divergence_profile_field(), node.heat_time);
    acc.axpy(node.weight * calc.forcing_scalar(node.s), b);
  }
  return acc;
}

std::vector<TorusField> duhamel_sweep(const TorusCalculus& calc, const TorusField& u0,
                                      const Trajectory<TorusField>& w,
                                      const std::vector<double>& times, int quad_cells) {
  const double scale = -calc.params().chi * calc.params().kappa;
  std::unique_ptr<TorusBracketTable> table;
  if (scale != 0.0) table = std::make_unique<TorusBracketTable>(calc, w, w);
  const TorusSpectrum u0_hat = forward_fft(u0);

  std::vector<TorusField> out;
  out.reserve(times.size());
  for (double t : times) {
    TorusSpectrum acc = u0_hat;
    apply_heat_multiplier(acc, t);
    for (const GradedNode& node : graded_nodes(t, quad_cells, true)) {
      TorusSpectrum b = calc.forcing_divergence_profile_spectrum();
      b *= calc.forcing_scalar(node.s);
      if (table) b.axpy(scale, table->at(node.s));
      apply_heat_multiplier(b, node.heat_time);
      acc.axpy(node.weight, b);
    }
    out.push_back(inverse_fft(acc));
  }
  return out;
}

std::vector<RadialField> duhamel_sweep(const RadialCalculus& calc, const RadialField& u0,
                                       const Trajectory<RadialField>& w,
                                       const std::vector<double>& times, int quad_cells) {
  std::vector<RadialField> table;
  table.reserve(w.times.size());
  const double scale = -calc.params().chi * calc.params().kappa;
  for (std::size_t j = 0; j < w.times.size(); ++j) {
    RadialField b = calc.zero();
    if (scale != 0.0) {
      b = calc.bilinear_divergence(w.snapshots[j], w.snapshots[j]);
      b *= scale;
    }
    b.axpy(calc.forcing_scalar(w.times[j]), calc.forcing_divergence_profile_field());
    table.push_back(std::move(b));
  }
  auto rhs_at = [&](double s) {
    if (s <= w.times.front()) return table.front();
    if (s >= w.times.back()) return table.back();
    std::size_t hi = 1;
    while (w.times[hi] < s) ++hi;
    const double lam = (s - w.times[hi - 1]) / (w.times[hi] - w.times[hi - 1]);
    RadialField out = table[hi - 1];
    out *= (1.0 - lam);
    out.axpy(lam, table[hi]);
    return out;
  };

  std::vector<RadialField> out;
  out.reserve(times.size());
  RadialField heat_state = u0;
  double heat_time = 0.0;
  for (double t : times) {
    if (t > heat_time) {
      heat_state = calc.semigroup(heat_state, t - heat_time);
      heat_time = t;
    }
    RadialField acc = heat_state;
    for (const GradedNode& node : graded_nodes(t, quad_cells, true))
      acc.axpy(node.weight, calc.semigroup(rhs_at(node.s), node.heat_time));
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace kslab
