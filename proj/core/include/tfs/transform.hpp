#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "tfs/matrix.hpp"
#include "tfs/signal.hpp"

// Normal Morlet wavelet transform (NMWT): the normal time-frequency transform
// with rescaling mu(w) = w and the normalized Gaussian window
//
//   w(t)        = exp(-t^2 / (2 sigma^2)) / (sqrt(2 pi) sigma)
//   psi(t, W)   = |W| w(W t) exp(i W t)
//   Psi f(tau,W) = integral f(t) conj(psi(t - tau, W)) dt
//
// The kernel's transfer function is exp(-sigma^2 (w - W)^2 / (2 W^2)): exactly 1
// at w = W and strictly below 1 elsewhere, so a harmonic read on its own row
// comes back with its amplitude and phase untouched.
//
// Real inputs are transformed through their analytic signal (the one-sided
// spectrum, doubled), so for a real harmonic A cos(W t + phi) the matched row
// is A exp(i (W tau + phi)) and its real part is the harmonic itself.
namespace tfs {

using cplx = std::complex<double>;

struct WindowParams {
  double sigma = 1.0;

  void validate() const;
};

// Time-domain window w(t).
double gaussian_window(double t, const WindowParams& params);
// Fourier transform of w: exp(-sigma^2 omega^2 / 2). Unique maximum 1 at 0.
double gaussian_window_ft(double omega, const WindowParams& params);

// Analysis frequencies in Hz, strictly increasing and positive.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::vector<double> freqs_hz);

  // lo, lo + step, ... up to and including hi (within rounding).
  static FrequencyGrid linear(double lo_hz, double hi_hz, double step_hz);

  std::span<const double> hz() const noexcept { return freqs_hz_; }
  double operator[](std::size_t k) const noexcept { return freqs_hz_[k]; }
  std::size_t size() const noexcept { return freqs_hz_.size(); }
  double min_hz() const noexcept { return freqs_hz_.front(); }
  double max_hz() const noexcept { return freqs_hz_.back(); }

  // Row whose frequency is closest to f_hz.
  std::size_t nearest(double f_hz) const noexcept;

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  std::vector<double> freqs_hz_;
};

// Psi f on (freq_grid x tau_grid); tau_grid[m] = m / fs.
class Spectrum {
 public:
  Spectrum(Matrix<cplx> values, FrequencyGrid grid, WindowParams window, double sample_rate_hz);

  const Matrix<cplx>& values() const noexcept { return values_; }
  const FrequencyGrid& grid() const noexcept { return grid_; }
  const WindowParams& window() const noexcept { return window_; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  std::size_t n_freq() const noexcept { return values_.rows(); }
  std::size_t n_time() const noexcept { return values_.cols(); }
  double tau_s(std::size_t m) const noexcept { return static_cast<double>(m) / sample_rate_hz_; }

 private:
  Matrix<cplx> values_;
  FrequencyGrid grid_;
  WindowParams window_;
  double sample_rate_hz_;
};

// Kernel psi(t, W) with W in rad/s.
cplx nmwt_kernel(double t_s, double omega_row, const WindowParams& params);

// Number of samples on each side of zero at which the kernel is truncated:
// |W t| <= 6 sigma.
std::size_t kernel_half_support(double omega_row, const WindowParams& params,
                                double sample_rate_hz);

// Transfer function of the discretized, truncated kernel that nmwt actually
// applies: sum_j psi(j / fs, W) exp(-i omega j / fs) / fs.
cplx kernel_transfer(double omega, double omega_row, const WindowParams& params,
                     double sample_rate_hz);

// x + i H[x] via a length-N DFT (DC and Nyquist bins kept, positive bins doubled).
std::vector<cplx> analytic_signal(std::span<const double> x);

// Riemann-sum evaluation of the transform at tau = m / fs for every sample m,
// computed per row as a zero-padded FFT correlation with the sampled kernel.
// Throws Errc::invalid_parameter for an empty grid and Errc::aliasing when a
// grid frequency reaches fs / 2.
Spectrum nmwt(const Signal& signal, const FrequencyGrid& grid, const WindowParams& params);

// Time-frequency phase spectrum: elementwise real part.
Matrix<double> tfps(const Spectrum& spectrum);

}  // namespace tfs
