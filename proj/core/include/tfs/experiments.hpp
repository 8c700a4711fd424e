#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tfs/baselines.hpp"
#include "tfs/signal.hpp"
#include "tfs/similarity.hpp"

namespace tfs {

enum class MethodKind { similarity, pearson, cc, gcc };

// One estimator under test: "similarity", "pearson", "cc" or "gcc:<weighting>".
struct Method {
  MethodKind kind = MethodKind::similarity;
  GccWeighting weighting = GccWeighting::none;  // gcc only

  std::string name() const;
  static std::optional<Method> parse(std::string_view name);

  friend bool operator==(const Method&, const Method&) = default;
};

struct ExperimentConfig {
  ChirpSpec chirp{};
  // Infinity means a noise-free trial.
  std::vector<double> snr_db_list{20.0, 10.0, 5.0, 0.0, -5.0, -10.0};
  std::size_t n_trials = 100;
  std::uint64_t master_seed = 42;
  std::vector<Method> methods{{MethodKind::similarity},
                              {MethodKind::pearson},
                              {MethodKind::cc},
                              {MethodKind::gcc, GccWeighting::ml}};
  SnrReference snr_reference = SnrReference::peak;
  SimilarityConfig similarity{};
  std::optional<std::size_t> max_lag;  // baselines; default length / 4
  GccOptions gcc{};
  std::size_t threads = 0;  // 0: hardware concurrency; never affects results

  void validate() const;
  std::size_t resolved_max_lag() const noexcept {
    return max_lag.value_or(chirp.length_samples / 4);
  }
};

// The pulse minus an eighth of its length at each end, and the rows its
// instantaneous frequency 2 * rate * t sweeps across over that span.
Region ridge_region(const ChirpSpec& chirp, const FrequencyGrid& grid);

// Pulse pair of 5.4 s at 1 kHz, rate 5 Hz, delay 150 samples, 100 trials,
// sigma 4 on a 1..60 Hz grid with the ridge region, peak-referenced SNR.
ExperimentConfig reproduction_config();

struct TrialRecord {
  std::size_t trial = 0;
  std::optional<double> coefficient;
  std::optional<std::ptrdiff_t> delay_samples;
  std::optional<std::ptrdiff_t> deviation;  // true delay - estimate
  std::string error;                        // non-empty when the method failed
};

struct MethodStats {
  Method method;
  double success_rate_pct = 0.0;
  double mse = 0.0;               // NaN when fewer than 2 trials produced an estimate
  double mean_coefficient = 0.0;  // NaN when no trial produced a coefficient
  std::size_t failed = 0;
  std::vector<TrialRecord> trials;  // indexed by trial

  std::vector<std::optional<std::ptrdiff_t>> deviations() const;
};

struct TrialStats {
  double snr_db = 0.0;
  std::size_t snr_index = 0;
  std::vector<MethodStats> methods;  // config.methods order

  const MethodStats& of(const Method& m) const;
};

// 100 * (estimates equal to true_delay) / n. Missing estimates count as misses.
double success_rate(std::span<const std::ptrdiff_t> estimates, std::ptrdiff_t true_delay);
double success_rate(std::span<const std::optional<std::ptrdiff_t>> estimates,
                    std::ptrdiff_t true_delay);

// sqrt(sum (d - c_i)^2 / (n - 1)). Errc::invalid_parameter for n < 2.
double mse(std::span<const std::ptrdiff_t> estimates, std::ptrdiff_t true_delay);

// All trials at snr_db_list[snr_index]. Noise seeds derive from
// (master_seed, snr_index, trial, channel) only.
TrialStats run_trials(const ExperimentConfig& config, std::size_t snr_index);

struct MonotonicityReport {
  Method method;
  // Counted along decreasing SNR; a rise is an inversion.
  std::size_t sr_inversions = 0;
  double max_sr_rise = 0.0;
  std::size_t coefficient_inversions = 0;
  double max_coefficient_rise = 0.0;
};

struct SweepDiagnostics {
  std::vector<MonotonicityReport> monotonicity;
  // Per SNR (sweep order): similarity mean coefficient >= pearson's. Empty
  // unless both methods are configured.
  std::vector<bool> similarity_above_pearson;
};

struct SweepResult {
  std::vector<TrialStats> per_snr;  // snr_db_list order
  SweepDiagnostics diagnostics;
};

SweepResult snr_sweep(const ExperimentConfig& config);

}  // namespace tfs
