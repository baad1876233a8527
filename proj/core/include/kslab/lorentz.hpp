#pragma once

#include <limits>
#include <span>
#include <vector>

namespace kslab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exponent pair selecting a Lorentz space L^{p,q}.
/// q = inf selects the weak norm sup_t t^{1/p} f**(t); finite q selects the
/// rearrangement integral ((p/q) *integral* [t^{1/p} f*(t)]^q dt/t)^{1/q}.
/// p must exceed 1 for finite q; p = 1 is admitted only for q = inf, where the
/// weak norm degenerates to the L^1 norm (sup of the running integral).
struct LorentzParams {
  double p = 2.0;
  double q = kInf;
};

/// Exact decreasing rearrangement of a piecewise-constant grid function.
/// Interval j is [breakpoints[j], breakpoints[j+1]) carrying value values[j];
/// f* vanishes beyond total_measure. Breakpoints are cumulative cell measures,
/// values are non-increasing (equal runs merged).
struct RearrangementProfile {
  std::vector<double> breakpoints;  // size m+1, breakpoints[0] = 0
  std::vector<double> values;       // size m
  double total_measure = 0.0;

  // Running integral of f* up to each breakpoint; running.back() = ||f||_L1.
  std::vector<double> running;

  double star(double t) const;       // f*(t)
  double star_star(double t) const;  // f**(t) = (1/t) integral_0^t f*
  double integral_to(double t) const;
};

RearrangementProfile decreasing_rearrangement(std::span<const double> values,
                                              std::span<const double> weights);
RearrangementProfile decreasing_rearrangement(std::span<const double> values,
                                              double uniform_weight);

double lorentz_norm(const RearrangementProfile& profile, LorentzParams params);
double lorentz_norm(std::span<const double> values, std::span<const double> weights,
                    LorentzParams params);
double lorentz_norm(std::span<const double> values, double uniform_weight,
                    LorentzParams params);

struct HolderExponents {
  double p1, r1;
  double p2, r2;
  double p3, r3;
};

/// ||fg||_{p3,r3} / (||f||_{p1,r1} ||g||_{p2,r2}) for same-grid samples.
/// degenerate flags a vanishing denominator; ratio is then meaningless.
struct HolderCheck {
  double ratio = 0.0;
  bool degenerate = false;
};

HolderCheck holder_ratio(std::span<const double> f, std::span<const double> g,
                         std::span<const double> weights, const HolderExponents& e);

}  // namespace kslab
