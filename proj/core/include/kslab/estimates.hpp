#pragma once

#include <random>
#include <vector>

#include "kslab/analysis.hpp"
#include "kslab/duhamel.hpp"

namespace kslab {

/// Smooth random field: a few Gaussian bumps with seeded centers, widths and
/// signs. The corpus generator behind every estimate harness.
TorusField random_bump_field(const TorusGrid& grid, std::mt19937_64& rng, int bumps = 3);

/// Fitted L2 power-law exponent of the heat flow started from a normalized
/// single-cell impulse (expected: -dim/4).
double impulse_l2_decay_exponent(int dim, int points, double length, double t_lo,
                                 double t_hi, int samples);

/// Measured supremum over a bump corpus and a time grid of
///   t^{m/2 + (dim/2)(1/r - 1/p)} |grad^m e^{t Lap} phi|_{L^{p,inf}} / |phi|_{L^{r,inf}}.
struct DispersiveScan {
  double r = 0.0, p = 0.0;
  int deriv = 0;
  double supremum = 0.0;
};
DispersiveScan dispersive_harness(const TorusGrid& grid, double r, double p, int deriv,
                                  int corpus, unsigned seed);

/// Truncated-integral-to-norm ratios
///   integral_0^S s^{(dim/2)(1/r-1/p) - 1/2} |div e^{s Lap} phi|_{L^{p,1}} ds
///     / |phi|_{L^{r,1}}
/// over a corpus of random vector bumps; S grows until the exponential tail
/// estimate drops below one percent of the accumulated integral.
struct YamazakiScan {
  std::vector<double> ratios;
  double truncation_time = 0.0;
  double spread() const;
};
YamazakiScan yamazaki_harness(const TorusGrid& grid, double r, double p, int corpus,
                              unsigned seed);

/// Empirical constant of |B(u,w)|_{inf,working} <= K g(gamma) |u| |w| over a
/// corpus of constant-in-time bump pairs.
double bilinear_bound_harness(const TorusCalculus& calc, int pairs, unsigned seed,
                              std::span<const double> sample_times);

/// Empirical constant of |L(f)(t)|_{L^{p,inf}} <= C sup_t |f|_{L^{r,inf}}
/// with 1/r - 1/p = 1/dim, over a family of forcing widths.
double linear_bound_harness(const TorusGrid& grid, const KSParams& params,
                            const ForcingSpec& base, double r, double p,
                            std::span<const double> widths,
                            std::span<const double> sample_times);

/// Empirical semigroup constant sup |e^{t Lap} phi|_w / |phi|_w over a corpus.
double semigroup_bound_harness(const TorusGrid& grid, int dim_norm, int corpus,
                               unsigned seed, std::span<const double> sample_times);

}  // namespace kslab
