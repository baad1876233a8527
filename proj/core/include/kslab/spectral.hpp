#pragma once

#include <complex>
#include <span>
#include <vector>

#include "kslab/torus.hpp"

namespace kslab {

/// Half-complex Fourier coefficients of a real field (r2c layout: last axis
/// holds N/2+1 entries). Forward transform is unnormalized; inverse divides
/// by N^dim.
class TorusSpectrum {
 public:
  TorusSpectrum() = default;
  explicit TorusSpectrum(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  std::span<std::complex<double>> coef() { return coef_; }
  std::span<const std::complex<double>> coef() const { return coef_; }
  std::int64_t size() const { return static_cast<std::int64_t>(coef_.size()); }

  TorusSpectrum& operator*=(double s);
  void axpy(std::complex<double> s, const TorusSpectrum& rhs);
  void axpy(double s, const TorusSpectrum& rhs);

 private:
  TorusGrid grid_;
  std::vector<std::complex<double>> coef_;
};

std::int64_t spectrum_size(const TorusGrid& grid);

TorusSpectrum forward_fft(const TorusField& field);
TorusField inverse_fft(const TorusSpectrum& spectrum);

/// Integer frequencies (m_0..m_{dim-1}) of the coefficient at flat index idx;
/// physical wavenumber along axis d is 2*pi*m_d/L. Frequencies on full axes
/// run through -N/2..N/2-1, the truncated last axis through 0..N/2.
void decode_mode(const TorusGrid& grid, std::int64_t idx, int freq[4]);

/// Multipliers. Odd (single-derivative) multipliers zero the Nyquist
/// frequency on their axis so the result stays exactly real.
void apply_heat_multiplier(TorusSpectrum& s, double t);
void apply_derivative_multiplier(TorusSpectrum& s, int axis);
void apply_helmholtz_inverse_multiplier(TorusSpectrum& s, double gamma, double kappa);
void apply_dealias_mask(TorusSpectrum& s);  // 2/3 rule, all axes

/// grad^deriv e^{t Laplace} along `axis` (deriv in {0,1}); t >= 0.
TorusField heat_apply(const TorusField& field, double t, int deriv = 0, int axis = 0);

/// kappa (-Laplace + gamma I)^{-1}. gamma = 0 requires a zero-mean input
/// (|mean| <= 1e-10 max|field|) and returns a zero-mean output.
TorusField elliptic_inverse(const TorusField& field, double gamma, double kappa);

/// d/dx_axis of kappa (-Laplace + gamma I)^{-1}, multiplier i k_axis/(k^2+gamma).
TorusField elliptic_inverse_grad(const TorusField& field, int axis, double gamma,
                                 double kappa = 1.0);

TorusVectorField gradient(const TorusField& field);
TorusField divergence(const TorusVectorField& vf);
TorusField dealias(const TorusField& field);

/// Fraction of the squared mass lying within Euclidean distance `radius` of
/// the box center; the free-space surrogates are valid while this stays
/// above 1 - 1e-8 for radius = L/4.
double energy_within_radius(const TorusField& field, double radius);

}  // namespace kslab
