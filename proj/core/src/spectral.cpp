#include "kslab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace kslab {

namespace {

// One FFTW plan pair per (dim, points), executed through internal aligned
// buffers under a lock. FFTW_ESTIMATE keeps plan choice (and hence rounding)
// reproducible across runs.
class TorusTransform {
 public:
  explicit TorusTransform(const TorusGrid& grid) {
    dim_ = grid.dim;
    n_real_ = grid.size();
    n_complex_ = spectrum_size(grid);
    int n[4];
    for (int d = 0; d < dim_; ++d) n[d] = grid.points;
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<std::size_t>(n_real_)));
    cplx_ = static_cast<fftw_complex*>(
        fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n_complex_)));
    if (real_ == nullptr || cplx_ == nullptr) throw std::bad_alloc();
    fwd_ = fftw_plan_dft_r2c(dim_, n, real_, cplx_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r(dim_, n, cplx_, real_, FFTW_ESTIMATE);
    if (fwd_ == nullptr || bwd_ == nullptr) throw std::runtime_error("fftw plan failed");
  }

  ~TorusTransform() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(cplx_);
  }

  TorusTransform(const TorusTransform&) = delete;
  TorusTransform& operator=(const TorusTransform&) = delete;

  // std::complex<double> is array-layout compatible with fftw_complex
  void forward(std::span<const double> in, std::span<std::complex<double>> out) {
    std::scoped_lock lock(mutex_);
    std::memcpy(real_, in.data(), sizeof(double) * in.size());
    fftw_execute(fwd_);
    std::memcpy(reinterpret_cast<double*>(out.data()), cplx_,
                sizeof(fftw_complex) * out.size());
  }

  void backward(std::span<const std::complex<double>> in, std::span<double> out) {
    std::scoped_lock lock(mutex_);
    std::memcpy(cplx_, reinterpret_cast<const double*>(in.data()),
                sizeof(fftw_complex) * in.size());
    fftw_execute(bwd_);
    std::memcpy(out.data(), real_, sizeof(double) * out.size());
  }

 private:
  int dim_ = 0;
  std::int64_t n_real_ = 0;
  std::int64_t n_complex_ = 0;
  double* real_ = nullptr;
  fftw_complex* cplx_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
  std::mutex mutex_;
};

TorusTransform& transform_for(const TorusGrid& grid) {
  static std::mutex registry_mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<TorusTransform>> registry;
  std::scoped_lock lock(registry_mutex);
  auto& slot = registry[{grid.dim, grid.points}];
  if (!slot) slot = std::make_unique<TorusTransform>(grid);
  return *slot;
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::int64_t spectrum_size(const TorusGrid& grid) {
  std::int64_t s = grid.points / 2 + 1;
  for (int d = 0; d < grid.dim - 1; ++d) s *= grid.points;
  return s;
}

TorusSpectrum::TorusSpectrum(const TorusGrid& grid)
    : grid_(grid), coef_(static_cast<std::size_t>(spectrum_size(grid))) {}

TorusSpectrum& TorusSpectrum::operator*=(double s) {
  for (auto& c : coef_) c *= s;
  return *this;
}

void TorusSpectrum::axpy(std::complex<double> s, const TorusSpectrum& rhs) {
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += s * rhs.coef_[i];
}

void TorusSpectrum::axpy(double s, const TorusSpectrum& rhs) {
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += s * rhs.coef_[i];
}

TorusSpectrum forward_fft(const TorusField& field) {
  TorusSpectrum s(field.grid());
  transform_for(field.grid()).forward(field.values(), s.coef());
  return s;
}

TorusField inverse_fft(const TorusSpectrum& spectrum) {
  TorusField f(spectrum.grid());
  transform_for(spectrum.grid()).backward(spectrum.coef(), f.values());
  const double scale = 1.0 / static_cast<double>(spectrum.grid().size());
  for (auto& v : f.values()) v *= scale;
  return f;
}

void decode_mode(const TorusGrid& grid, std::int64_t idx, int freq[4]) {
  const int n = grid.points;
  const int n_last = n / 2 + 1;
  freq[0] = freq[1] = freq[2] = freq[3] = 0;
  int d = grid.dim - 1;
  freq[d] = static_cast<int>(idx % n_last);
  idx /= n_last;
  for (--d; d >= 0; --d) {
    int m = static_cast<int>(idx % n);
    idx /= n;
    freq[d] = (m <= n / 2) ? m : m - n;
  }
}

namespace {

// Applies fn(freq) -> complex scaling to every coefficient.
template <class Fn>
void apply_multiplier(TorusSpectrum& s, Fn&& fn) {
  const TorusGrid& g = s.grid();
  auto coef = s.coef();
  int freq[4];
  for (std::int64_t i = 0; i < s.size(); ++i) {
    decode_mode(g, i, freq);
    coef[static_cast<std::size_t>(i)] *= fn(freq);
  }
}

}  // namespace

void apply_heat_multiplier(TorusSpectrum& s, double t) {
  const double kf = kTwoPi / s.grid().length;
  const int dim = s.grid().dim;
  apply_multiplier(s, [&](const int* m) {
    double k2 = 0.0;
    for (int d = 0; d < dim; ++d) k2 += (kf * m[d]) * (kf * m[d]);
    return std::complex<double>(std::exp(-t * k2), 0.0);
  });
}

void apply_derivative_multiplier(TorusSpectrum& s, int axis) {
  const double kf = kTwoPi / s.grid().length;
  const int nyq = s.grid().points / 2;
  apply_multiplier(s, [&](const int* m) {
    if (std::abs(m[axis]) == nyq) return std::complex<double>(0.0, 0.0);
    return std::complex<double>(0.0, kf * m[axis]);
  });
}

void apply_helmholtz_inverse_multiplier(TorusSpectrum& s, double gamma, double kappa) {
  const double kf = kTwoPi / s.grid().length;
  const int dim = s.grid().dim;
  apply_multiplier(s, [&](const int* m) {
    double k2 = 0.0;
    for (int d = 0; d < dim; ++d) k2 += (kf * m[d]) * (kf * m[d]);
    if (k2 == 0.0 && gamma == 0.0) return std::complex<double>(0.0, 0.0);
    return std::complex<double>(kappa / (k2 + gamma), 0.0);
  });
}

void apply_dealias_mask(TorusSpectrum& s) {
  const double cutoff = s.grid().points / 3.0;
  const int dim = s.grid().dim;
  apply_multiplier(s, [&](const int* m) {
    for (int d = 0; d < dim; ++d)
      if (std::abs(m[d]) > cutoff) return std::complex<double>(0.0, 0.0);
    return std::complex<double>(1.0, 0.0);
  });
}

TorusField heat_apply(const TorusField& field, double t, int deriv, int axis) {
  if (t < 0.0) throw std::domain_error("heat_apply: t must be >= 0");
  if (deriv < 0 || deriv > 1) throw std::domain_error("heat_apply: derivative order 0 or 1");
  if (axis < 0 || axis >= field.grid().dim) throw std::domain_error("heat_apply: bad axis");
  TorusSpectrum s = forward_fft(field);
  apply_heat_multiplier(s, t);
  if (deriv == 1) apply_derivative_multiplier(s, axis);
  return inverse_fft(s);
}

TorusField elliptic_inverse(const TorusField& field, double gamma, double kappa) {
  if (gamma < 0.0) throw std::domain_error("elliptic_inverse: gamma must be >= 0");
  if (!(kappa > 0.0)) throw std::domain_error("elliptic_inverse: kappa must be > 0");
  if (gamma == 0.0 && std::abs(field.mean()) > 1e-10 * field.max_abs())
    throw std::domain_error(
        "elliptic inverse undefined on nonzero-mean input at gamma=0");
  TorusSpectrum s = forward_fft(field);
  apply_helmholtz_inverse_multiplier(s, gamma, kappa);
  return inverse_fft(s);
}

TorusField elliptic_inverse_grad(const TorusField& field, int axis, double gamma,
                                 double kappa) {
  if (gamma < 0.0) throw std::domain_error("elliptic_inverse_grad: gamma must be >= 0");
  if (axis < 0 || axis >= field.grid().dim)
    throw std::domain_error("elliptic_inverse_grad: bad axis");
  if (gamma == 0.0 && std::abs(field.mean()) > 1e-10 * field.max_abs())
    throw std::domain_error(
        "elliptic inverse undefined on nonzero-mean input at gamma=0");
  TorusSpectrum s = forward_fft(field);
  apply_helmholtz_inverse_multiplier(s, gamma, kappa);
  apply_derivative_multiplier(s, axis);
  return inverse_fft(s);
}

TorusVectorField gradient(const TorusField& field) {
  TorusVectorField out(field.grid());
  const TorusSpectrum base = forward_fft(field);
  for (int d = 0; d < field.grid().dim; ++d) {
    TorusSpectrum s = base;
    apply_derivative_multiplier(s, d);
    out.component[static_cast<std::size_t>(d)] = inverse_fft(s);
  }
  return out;
}

TorusField divergence(const TorusVectorField& vf) {
  const TorusGrid& g = vf.grid();
  TorusSpectrum acc(g);
  for (int d = 0; d < g.dim; ++d) {
    if (!(vf.component[static_cast<std::size_t>(d)].grid() == g))
      throw std::domain_error("divergence: component grid mismatch");
    TorusSpectrum s = forward_fft(vf.component[static_cast<std::size_t>(d)]);
    apply_derivative_multiplier(s, d);
    acc.axpy(1.0, s);
  }
  return inverse_fft(acc);
}

TorusField dealias(const TorusField& field) {
  TorusSpectrum s = forward_fft(field);
  apply_dealias_mask(s);
  return inverse_fft(s);
}

double energy_within_radius(const TorusField& field, double radius) {
  const TorusGrid& g = field.grid();
  const double r2 = radius * radius;
  double inside = 0.0, total = 0.0;
  auto vals = field.values();
  std::int64_t stride[4] = {0, 0, 0, 0};
  stride[g.dim - 1] = 1;
  for (int d = g.dim - 2; d >= 0; --d) stride[d] = stride[d + 1] * g.points;
  for (std::int64_t i = 0; i < field.size(); ++i) {
    double d2 = 0.0;
    std::int64_t rem = i;
    for (int d = 0; d < g.dim; ++d) {
      const int idx = static_cast<int>(rem / stride[d]);
      rem %= stride[d];
      const double x = g.coord(idx);
      d2 += x * x;
    }
    const double e = vals[static_cast<std::size_t>(i)] * vals[static_cast<std::size_t>(i)];
    total += e;
    if (d2 <= r2) inside += e;
  }
  return total > 0.0 ? inside / total : 1.0;
}

}  // namespace kslab
