#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kslab/params.hpp"
#include "kslab/spectral.hpp"

namespace kslab {

void validate(const KSParams& p) {
  // kappa = 0 is admitted as the decoupled (pure heat + forcing) case the
  // linear oracles rely on.
  if (!(p.kappa >= 0.0)) throw std::domain_error("params: kappa must be >= 0");
  if (p.gamma < 0.0) throw std::domain_error("params: gamma must be >= 0");
  if (p.dim < 1 || p.dim > 4) throw std::domain_error("params: dim must be 1..4");
}

double coupling_g(double gamma, int dim) {
  if (gamma < 0.0) throw std::domain_error("coupling_g: gamma must be >= 0");
  return gamma == 0.0 ? 1.0 : std::pow(gamma, -(dim - 1));
}

double ForcingSpec::time_factor(double t) const {
  const double s = std::fmod(t, period);
  return amplitude * std::sin(2.0 * std::numbers::pi * s / period + phase);
}

void validate(const ForcingSpec& f) {
  if (!(f.period > 0.0)) throw std::domain_error("forcing: period must be > 0");
  if (!(f.width > 0.0)) throw std::domain_error("forcing: width must be > 0");
}

namespace {

// minimum-image displacement on [-L/2, L/2)
double wrap(double d, double length) {
  while (d >= 0.5 * length) d -= length;
  while (d < -0.5 * length) d += length;
  return d;
}

template <class Fn>
void for_each_point(const TorusGrid& g, Fn&& fn) {
  std::int64_t stride[4] = {0, 0, 0, 0};
  stride[g.dim - 1] = 1;
  for (int d = g.dim - 2; d >= 0; --d) stride[d] = stride[d + 1] * g.points;
  double x[4] = {0, 0, 0, 0};
  for (std::int64_t i = 0; i < g.size(); ++i) {
    std::int64_t rem = i;
    for (int d = 0; d < g.dim; ++d) {
      x[d] = g.coord(static_cast<int>(rem / stride[d]));
      rem %= stride[d];
    }
    fn(i, x);
  }
}

}  // namespace

TorusField gaussian_bump(const TorusGrid& grid, double width, double amplitude,
                         std::array<double, 4> center) {
  TorusField f(grid);
  const double inv2w2 = 1.0 / (2.0 * width * width);
  for_each_point(grid, [&](std::int64_t i, const double* x) {
    double d2 = 0.0;
    for (int d = 0; d < grid.dim; ++d) {
      const double dx = wrap(x[d] - center[static_cast<std::size_t>(d)], grid.length);
      d2 += dx * dx;
    }
    f[i] = amplitude * std::exp(-d2 * inv2w2);
  });
  return f;
}

TorusField dipole_bump(const TorusGrid& grid, double width, int axis, double amplitude,
                       std::array<double, 4> center) {
  if (axis < 0 || axis >= grid.dim) throw std::domain_error("dipole_bump: bad axis");
  TorusField f(grid);
  const double inv2w2 = 1.0 / (2.0 * width * width);
  for_each_point(grid, [&](std::int64_t i, const double* x) {
    double d2 = 0.0;
    double da = 0.0;
    for (int d = 0; d < grid.dim; ++d) {
      const double dx = wrap(x[d] - center[static_cast<std::size_t>(d)], grid.length);
      d2 += dx * dx;
      if (d == axis) da = dx;
    }
    // d/dx_axis of the Gaussian, normalized to unit peak slope scale
    f[i] = -amplitude * da * std::exp(-d2 * inv2w2) / width;
  });
  return f;
}

TorusVectorField forcing_profile(const TorusGrid& grid, const ForcingSpec& f) {
  validate(f);
  if (f.axis < 0 || f.axis >= grid.dim) throw std::domain_error("forcing: bad axis");
  TorusVectorField vf(grid);
  vf.component[static_cast<std::size_t>(f.axis)] = gaussian_bump(grid, f.width);
  return vf;
}

TorusField forcing_divergence_profile(const TorusGrid& grid, const ForcingSpec& f) {
  return divergence(forcing_profile(grid, f));
}

RadialField radial_bump(const RadialGrid& grid, double center, double width,
                        double amplitude) {
  RadialField f(grid);
  for (int i = 0; i < f.size(); ++i) {
    const double d = grid.node[static_cast<std::size_t>(i)] - center;
    f[i] = amplitude * std::exp(-d * d / (2.0 * width * width));
  }
  return f;
}

RadialField forcing_profile(const RadialGrid& grid, const ForcingSpec& f) {
  validate(f);
  RadialField v(grid);
  for (int i = 0; i < v.size(); ++i) {
    const double tau = grid.node[static_cast<std::size_t>(i)];
    v[i] = (tau / f.width) * std::exp(-tau * tau / (2.0 * f.width * f.width));
  }
  return v;
}

RadialField forcing_divergence_profile(const RadialGrid& grid, const ForcingSpec& f) {
  return radial_divergence(forcing_profile(grid, f));
}

}  // namespace kslab
