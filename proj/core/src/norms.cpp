#include "kslab/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace kslab {

RearrangementProfile rearrange(const TorusField& f) {
  return decreasing_rearrangement(f.values(), f.grid().cell_measure());
}

RearrangementProfile rearrange(const RadialField& f) {
  return decreasing_rearrangement(f.values(), f.grid().weight);
}

double lorentz_norm(const TorusField& f, LorentzParams params) {
  return lorentz_norm(f.values(), f.grid().cell_measure(), params);
}

double lorentz_norm(const RadialField& f, LorentzParams params) {
  return lorentz_norm(f.values(), f.grid().weight, params);
}

double lp_norm(const TorusField& f, double p) {
  if (std::isinf(p)) return f.max_abs();
  if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1");
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid().cell_measure(), 1.0 / p);
}

double working_norm(const TorusField& f, int dim) {
  const double p = std::max(1.0, 0.5 * dim);
  return lorentz_norm(f, LorentzParams{p, kInf});
}

double working_norm(const RadialField& f, double norm_p) {
  return lp_norm(f, 0.5 * norm_p);
}

HolderCheck holder_ratio(const TorusField& f, const TorusField& g,
                         const HolderExponents& e) {
  if (!(f.grid() == g.grid())) throw std::domain_error("holder_ratio: grid mismatch");
  std::vector<double> w(static_cast<std::size_t>(f.size()), f.grid().cell_measure());
  return holder_ratio(f.values(), g.values(), w, e);
}

HolderCheck holder_ratio(const RadialField& f, const RadialField& g,
                         const HolderExponents& e) {
  if (!f.grid().same_shape(g.grid())) throw std::domain_error("holder_ratio: grid mismatch");
  return holder_ratio(f.values(), g.values(), f.grid().weight, e);
}

}  // namespace kslab
