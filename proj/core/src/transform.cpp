#include "tfs/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tfs/error.hpp"
#include "tfs/fft.hpp"

namespace tfs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Kernel truncation at |W t| > 6 sigma; the Gaussian there is < 1.6e-8 of its peak.
constexpr double kSupportSigmas = 6.0;

}  // namespace

void WindowParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(Errc::invalid_parameter, "window: sigma must be positive and finite");
}

double gaussian_window(double t, const WindowParams& params) {
  const double s = params.sigma;
  return std::exp(-t * t / (2.0 * s * s)) / (std::sqrt(kTwoPi) * s);
}

double gaussian_window_ft(double omega, const WindowParams& params) {
  const double a = params.sigma * omega;
  return std::exp(-0.5 * a * a);
}

FrequencyGrid::FrequencyGrid(std::vector<double> freqs_hz) : freqs_hz_(std::move(freqs_hz)) {
  for (std::size_t k = 0; k < freqs_hz_.size(); ++k) {
    const double f = freqs_hz_[k];
    if (!(f > 0.0) || !std::isfinite(f))
      throw Error(Errc::invalid_parameter, "frequency grid: entries must be positive and finite");
    if (k > 0 && !(f > freqs_hz_[k - 1]))
      throw Error(Errc::invalid_parameter, "frequency grid: must be strictly increasing");
  }
}

FrequencyGrid FrequencyGrid::linear(double lo_hz, double hi_hz, double step_hz) {
  if (!(step_hz > 0.0) || !(hi_hz >= lo_hz) || !std::isfinite(hi_hz))
    throw Error(Errc::invalid_parameter, "frequency grid: need lo <= hi and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((hi_hz - lo_hz) / step_hz + 1e-9)) + 1;
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) f[k] = lo_hz + static_cast<double>(k) * step_hz;
  return FrequencyGrid(std::move(f));
}

std::size_t FrequencyGrid::nearest(double f_hz) const noexcept {
  std::size_t best = 0;
  for (std::size_t k = 1; k < freqs_hz_.size(); ++k)
    if (std::abs(freqs_hz_[k] - f_hz) < std::abs(freqs_hz_[best] - f_hz)) best = k;
  return best;
}

Spectrum::Spectrum(Matrix<cplx> values, FrequencyGrid grid, WindowParams window,
                   double sample_rate_hz)
    : values_(std::move(values)),
      grid_(std::move(grid)),
      window_(window),
      sample_rate_hz_(sample_rate_hz) {
  window_.validate();
  if (values_.rows() != grid_.size())
    throw Error(Errc::invalid_parameter, "spectrum: row count does not match frequency grid");
  if (!(sample_rate_hz_ > 0.0))
    throw Error(Errc::invalid_parameter, "spectrum: sample rate must be positive");
  for (const cplx& v : values_.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(Errc::invalid_parameter, "spectrum: non-finite value");
}

cplx nmwt_kernel(double t_s, double omega_row, const WindowParams& params) {
  const double phase = omega_row * t_s;
  return std::abs(omega_row) * gaussian_window(phase, params) * std::polar(1.0, phase);
}

std::size_t kernel_half_support(double omega_row, const WindowParams& params,
                                double sample_rate_hz) {
  return static_cast<std::size_t>(
      std::floor(kSupportSigmas * params.sigma * sample_rate_hz / std::abs(omega_row)));
}

cplx kernel_transfer(double omega, double omega_row, const WindowParams& params,
                     double sample_rate_hz) {
  const auto half = static_cast<long>(kernel_half_support(omega_row, params, sample_rate_hz));
  cplx acc{0.0, 0.0};
  for (long j = -half; j <= half; ++j) {
    const double t = static_cast<double>(j) / sample_rate_hz;
    acc += nmwt_kernel(t, omega_row, params) * std::polar(1.0, -omega * t);
  }
  return acc / sample_rate_hz;
}

std::vector<cplx> analytic_signal(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<cplx> buf(x.begin(), x.end());
  fft::forward(buf, buf);
  // Bin 0 (and the Nyquist bin for even n) keep weight 1.
  const std::size_t half = (n + 1) / 2;
  for (std::size_t q = 1; q < half; ++q) buf[q] *= 2.0;
  for (std::size_t q = n / 2 + 1; q < n; ++q) buf[q] = 0.0;
  fft::inverse(buf, buf);
  const double scale = 1.0 / static_cast<double>(n);
  for (cplx& v : buf) v *= scale;
  return buf;
}

Spectrum nmwt(const Signal& signal, const FrequencyGrid& grid, const WindowParams& params) {
  params.validate();
  if (grid.size() == 0) throw Error(Errc::invalid_parameter, "nmwt: empty frequency grid");
  const double fs = signal.sample_rate_hz();
  if (grid.max_hz() >= fs / 2.0)
    throw Error(Errc::aliasing, "nmwt: grid frequency " + std::to_string(grid.max_hz()) +
                                    " Hz is not below Nyquist (" + std::to_string(fs / 2.0) +
                                    " Hz)");

  const std::size_t n = signal.size();
  // Lags beyond n - 1 never meet a sample, so the support is capped there.
  auto support = [&](double f_hz) {
    return std::min(kernel_half_support(kTwoPi * f_hz, params, fs), n - 1);
  };
  const std::size_t max_half = support(grid.min_hz());
  // n + half-support keeps the circular correlation free of wrap-around.
  const std::size_t len = fft::next_fast_size(n + max_half);

  std::vector<cplx> padded(len, cplx{});
  const std::vector<cplx> xa = analytic_signal(signal.samples());
  std::copy(xa.begin(), xa.end(), padded.begin());
  std::vector<cplx> signal_ft(len);
  fft::forward(padded, signal_ft);

  Matrix<cplx> values(grid.size(), n);
  std::vector<cplx> kernel(len), kernel_ft(len), work(len);
  const double inv_len = 1.0 / static_cast<double>(len);

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double omega_row = kTwoPi * grid[k];
    const std::size_t half = support(grid[k]);

    std::fill(kernel.begin(), kernel.end(), cplx{});
    kernel[0] = nmwt_kernel(0.0, omega_row, params) / fs;
    for (std::size_t j = 1; j <= half; ++j) {
      const double t = static_cast<double>(j) / fs;
      kernel[j] = nmwt_kernel(t, omega_row, params) / fs;
      kernel[len - j] = nmwt_kernel(-t, omega_row, params) / fs;
    }
    fft::forward(kernel, kernel_ft);

    for (std::size_t q = 0; q < len; ++q) work[q] = signal_ft[q] * std::conj(kernel_ft[q]);
    fft::inverse(work, work);

    auto row = values.row(k);
    for (std::size_t m = 0; m < n; ++m) row[m] = work[m] * inv_len;
  }
  return Spectrum(std::move(values), grid, params, fs);
}

Matrix<double> tfps(const Spectrum& spectrum) {
  const auto& v = spectrum.values();
  Matrix<double> out(v.rows(), v.cols());
  auto src = v.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].real();
  return out;
}

}  // namespace tfs
