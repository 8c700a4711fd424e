#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tfs {

// Uniformly sampled real time series. Immutable once constructed.
class Signal {
 public:
  // Throws Errc::invalid_parameter unless: >= 2 samples, all finite, fs > 0.
  Signal(std::vector<double> samples, double sample_rate_hz);

  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
  double sample_rate_hz_;
};

// Quadratic-phase pulse f(n) = sin(2 pi rate ((n - delay) / fs)^2).
struct ChirpSpec {
  double chirp_rate_hz = 5.0;
  std::size_t delay_samples = 150;
  std::size_t length_samples = 5400;
  double sample_rate_hz = 1000.0;

  void validate() const;
};

// Which power the SNR is referenced to.
//   mean_square: mean of the squared clean samples.
//   peak:        square of the largest clean magnitude (1 for a unit-amplitude
//                pulse, i.e. the convention of a 0 dBW reference).
enum class SnrReference { mean_square, peak };

struct NoiseSpec {
  std::optional<double> snr_db;  // absent: noise-free
  std::uint64_t seed = 0;
  SnrReference reference = SnrReference::mean_square;
};

// Returned by measure_snr when the residual is exactly zero.
inline constexpr double kSnrSaturated = std::numeric_limits<double>::infinity();

double mean_power(std::span<const double> x) noexcept;
double reference_power(std::span<const double> clean, SnrReference reference) noexcept;

// Clean pulse with the given delay evaluated from the closed form for every n.
Signal chirp(const ChirpSpec& spec, std::size_t delay_samples);

// f1 = chirp(0) + e1, f2 = chirp(d) + e2, each noise scaled to its own clean part.
std::pair<Signal, Signal> generate_chirp_pair(const ChirpSpec& spec, const NoiseSpec& noise1,
                                              const NoiseSpec& noise2);

// clean + e, e a white Gaussian draw rescaled so that mean(e^2) is exactly
// P_ref / 10^(snr/10). Deterministic in noise.seed.
Signal add_white_noise(const Signal& clean, const NoiseSpec& noise);

// 10 log10(P_clean / P_residual); kSnrSaturated when noisy == clean.
double measure_snr(const Signal& clean, const Signal& noisy);

// Stable 64-bit seed derivation (splitmix64 chain). The result depends only on
// the master seed and the path, never on call order.
std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> path) noexcept;

inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) noexcept {
  return derive_seed(master, std::span<const std::uint64_t>(path.begin(), path.size()));
}

}  // namespace tfs
