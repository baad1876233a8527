#include "kslab/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kslab {

namespace {

void validate(const LorentzParams& params) {
  if (std::isfinite(params.q)) {
    if (params.q < 1.0) throw std::domain_error("lorentz_norm: q must be >= 1");
    if (!(params.p > 1.0) || !std::isfinite(params.p))
      throw std::domain_error("lorentz_norm: finite-q branch requires 1 < p < inf");
  } else {
    if (!(params.p >= 1.0)) throw std::domain_error("lorentz_norm: p must be >= 1");
  }
}

}  // namespace

double RearrangementProfile::integral_to(double t) const {
  if (t <= 0.0 || values.empty()) return 0.0;
  if (t >= total_measure) return running.back();
  // locate interval containing t
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  std::size_t j = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
  if (j >= values.size()) return running.back();
  return running[j] + values[j] * (t - breakpoints[j]);
}

double RearrangementProfile::star(double t) const {
  if (t < 0.0) throw std::domain_error("rearrangement: t < 0");
  if (values.empty() || t >= total_measure) return 0.0;
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  std::size_t j = static_cast<std::size_t>(it - breakpoints.begin());
  if (j == 0) return values.front();
  return j - 1 < values.size() ? values[j - 1] : 0.0;
}

double RearrangementProfile::star_star(double t) const {
  if (t <= 0.0) return values.empty() ? 0.0 : values.front();
  return integral_to(t) / t;
}

RearrangementProfile decreasing_rearrangement(std::span<const double> values,
                                              std::span<const double> weights) {
  if (values.empty()) throw std::domain_error("rearrangement: empty field");
  if (values.size() != weights.size())
    throw std::domain_error("rearrangement: values/weights size mismatch");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Stable sort on |value| descending; ties keep cell-index order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(values[a]) > std::abs(values[b]);
  });

  RearrangementProfile profile;
  profile.breakpoints.reserve(values.size() + 1);
  profile.values.reserve(values.size());
  profile.breakpoints.push_back(0.0);

  double cum = 0.0;
  for (std::size_t idx : order) {
    const double w = weights[idx];
    if (!(w > 0.0)) throw std::domain_error("rearrangement: nonpositive cell measure");
    const double v = std::abs(values[idx]);
    cum += w;
    if (!profile.values.empty() && profile.values.back() == v) {
      profile.breakpoints.back() = cum;  // merge equal-value run
    } else {
      profile.values.push_back(v);
      profile.breakpoints.push_back(cum);
    }
  }
  profile.total_measure = cum;

  profile.running.resize(profile.values.size() + 1);
  profile.running[0] = 0.0;
  for (std::size_t j = 0; j < profile.values.size(); ++j)
    profile.running[j + 1] = profile.running[j] +
                             profile.values[j] * (profile.breakpoints[j + 1] - profile.breakpoints[j]);
  return profile;
}

RearrangementProfile decreasing_rearrangement(std::span<const double> values,
                                              double uniform_weight) {
  std::vector<double> w(values.size(), uniform_weight);
  return decreasing_rearrangement(values, w);
}

double lorentz_norm(const RearrangementProfile& profile, LorentzParams params) {
  validate(params);
  const double p = params.p;
  const std::size_t m = profile.values.size();
  if (m == 0) return 0.0;

  if (!std::isfinite(params.q)) {
    // sup_t t^{1/p} f**(t); on each interval f** = a + b/t so the supremum is
    // attained at a breakpoint; the tail t > total adds the p = 1 limit ||f||_1.
    if (std::isinf(p)) return profile.values.front();
    double best = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
      const double t = profile.breakpoints[j];
      const double val = std::pow(t, 1.0 / p) * (profile.running[j] / t);
      best = std::max(best, val);
    }
    if (p == 1.0) best = std::max(best, profile.running[m]);
    return best;
  }

  const double q = params.q;
  // ((p/q) integral t^{q/p - 1} f*(t)^q dt)^{1/q}, exact per interval.
  const double qp = q / p;
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double v = profile.values[j];
    if (v == 0.0) continue;
    const double t0 = profile.breakpoints[j];
    const double t1 = profile.breakpoints[j + 1];
    sum += std::pow(v, q) * (std::pow(t1, qp) - std::pow(t0, qp));
  }
  const double pref = (p / q) * (p / q);
  return std::pow(pref * sum, 1.0 / q);
}

double lorentz_norm(std::span<const double> values, std::span<const double> weights,
                    LorentzParams params) {
  validate(params);
  return lorentz_norm(decreasing_rearrangement(values, weights), params);
}

double lorentz_norm(std::span<const double> values, double uniform_weight,
                    LorentzParams params) {
  validate(params);
  return lorentz_norm(decreasing_rearrangement(values, uniform_weight), params);
}

HolderCheck holder_ratio(std::span<const double> f, std::span<const double> g,
                         std::span<const double> weights, const HolderExponents& e) {
  auto inv = [](double x) { return std::isinf(x) ? 0.0 : 1.0 / x; };
  if (std::abs(inv(e.p3) - inv(e.p1) - inv(e.p2)) > 1e-12)
    throw std::domain_error("holder_ratio: requires 1/p3 = 1/p1 + 1/p2");
  if (inv(e.r1) + inv(e.r2) < inv(e.r3) - 1e-12)
    throw std::domain_error("holder_ratio: requires 1/r1 + 1/r2 >= 1/r3");
  if (f.size() != g.size() || f.size() != weights.size())
    throw std::domain_error("holder_ratio: size mismatch");

  std::vector<double> fg(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) fg[i] = f[i] * g[i];

  const double nf = lorentz_norm(f, weights, {e.p1, e.r1});
  const double ng = lorentz_norm(g, weights, {e.p2, e.r2});
  const double nfg = lorentz_norm(fg, weights, {e.p3, e.r3});

  HolderCheck out;
  if (nf == 0.0 || ng == 0.0) {
    out.degenerate = true;
    out.ratio = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.ratio = nfg / (nf * ng);
  return out;
}

}  // namespace kslab
