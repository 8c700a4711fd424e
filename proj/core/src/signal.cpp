#include "tfs/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tfs/error.hpp"

namespace tfs {

Signal::Signal(std::vector<double> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (samples_.size() < 2)
    throw Error(Errc::invalid_parameter, "signal: need at least 2 samples");
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_))
    throw Error(Errc::invalid_parameter, "signal: sample rate must be positive and finite");
  if (!std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); }))
    throw Error(Errc::invalid_parameter, "signal: non-finite sample");
}

void ChirpSpec::validate() const {
  if (!(chirp_rate_hz > 0.0) || !std::isfinite(chirp_rate_hz))
    throw Error(Errc::invalid_parameter, "chirp: rate must be positive");
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
    throw Error(Errc::invalid_parameter, "chirp: sample rate must be positive");
  if (length_samples < 2)
    throw Error(Errc::invalid_parameter, "chirp: length must be at least 2 samples");
  if (delay_samples >= length_samples)
    throw Error(Errc::invalid_parameter, "chirp: delay must be shorter than the pulse");
}

double mean_power(std::span<const double> x) noexcept {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

double reference_power(std::span<const double> clean, SnrReference reference) noexcept {
  if (reference == SnrReference::mean_square) return mean_power(clean);
  double peak = 0.0;
  for (double v : clean) peak = std::max(peak, std::abs(v));
  return peak * peak;
}

Signal chirp(const ChirpSpec& spec, std::size_t delay_samples) {
  spec.validate();
  std::vector<double> x(spec.length_samples);
  const double shift = static_cast<double>(delay_samples);
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double t = (static_cast<double>(n) - shift) / spec.sample_rate_hz;
    x[n] = std::sin(2.0 * std::numbers::pi * spec.chirp_rate_hz * t * t);
  }
  return Signal(std::move(x), spec.sample_rate_hz);
}

Signal add_white_noise(const Signal& clean, const NoiseSpec& noise) {
  if (!noise.snr_db || !std::isfinite(*noise.snr_db))
    throw Error(Errc::invalid_parameter, "noise: SNR must be present and finite");
  const double p_ref = reference_power(clean.samples(), noise.reference);
  if (!(p_ref > 0.0)) throw Error(Errc::undefined_snr, "noise: clean signal has zero power");

  const double p_noise = p_ref / std::pow(10.0, *noise.snr_db / 10.0);
  // std::normal_distribution is implementation-defined, so streams are
  // reproducible per standard library, not across them.
  std::mt19937_64 engine(noise.seed);
  std::normal_distribution<double> gauss;

  std::vector<double> e(clean.size());
  for (double& v : e) v = gauss(engine);
  // Rescale the draw so its mean square is exactly p_noise.
  const double gain = std::sqrt(p_noise / mean_power(e));

  std::vector<double> out(clean.samples().begin(), clean.samples().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += gain * e[i];
  return Signal(std::move(out), clean.sample_rate_hz());
}

std::pair<Signal, Signal> generate_chirp_pair(const ChirpSpec& spec, const NoiseSpec& noise1,
                                              const NoiseSpec& noise2) {
  spec.validate();
  if (noise1.snr_db && noise2.snr_db && noise1.seed == noise2.seed)
    throw Error(Errc::independence, "chirp pair: noise channels must use different seeds");

  Signal f1 = chirp(spec, 0);
  Signal f2 = chirp(spec, spec.delay_samples);
  if (noise1.snr_db) f1 = add_white_noise(f1, noise1);
  if (noise2.snr_db) f2 = add_white_noise(f2, noise2);
  return {std::move(f1), std::move(f2)};
}

double measure_snr(const Signal& clean, const Signal& noisy) {
  if (clean.size() != noisy.size())
    throw Error(Errc::invalid_parameter, "measure_snr: length mismatch");
  if (clean.sample_rate_hz() != noisy.sample_rate_hz())
    throw Error(Errc::invalid_parameter, "measure_snr: sample rate mismatch");
  double residual = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double r = noisy[i] - clean[i];
    residual += r * r;
  }
  if (residual == 0.0) return kSnrSaturated;
  residual /= static_cast<double>(clean.size());
  return 10.0 * std::log10(mean_power(clean.samples()) / residual);
}

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> path) noexcept {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace tfs
