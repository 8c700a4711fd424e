#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tfs/experiments.hpp"
#include "tfs/signal.hpp"
#include "tfs/similarity.hpp"
#include "tfs/transform.hpp"

// File formats. All text is UTF-8 with LF line endings and '.' decimals
// (std::to_chars, independent of the C locale).
namespace tfs::io {

// 6 significant digits, e.g. "0.883312", "100", "inf".
std::string format_short(double v);
// Shortest representation that round-trips exactly.
std::string format_full(double v);

// Signal CSV:
//   # sample_rate_hz=<fs>
//   index,value
//   0,<x0>
//   ...
std::string signal_to_csv(const Signal& signal);
Signal signal_from_csv(std::string_view text);
void write_signal(const std::filesystem::path& path, const Signal& signal);
Signal read_signal(const std::filesystem::path& path);

// shift_samples,rho
std::string curve_to_csv(const SimilarityCurve& curve);

// Flat JSON object: coefficient, delay_samples, delay_seconds, then the
// resolved configuration (sigma, grid, region, shift range, sample rate).
std::string analysis_to_json(const AnalysisResult& result, const SimilarityConfig& config,
                             double sample_rate_hz);

// Spectrum dump: <stem>.csv holds "freq_index,time_index,re,im" rows in
// row-major order; <stem>.json carries the grids and window parameters.
void write_spectrum(const std::filesystem::path& stem, const Spectrum& spectrum);

// snr_db,method,trial,coefficient,delay_samples,deviation (full precision;
// failed trials print nan in all three value columns).
std::string trials_to_csv(const std::vector<TrialStats>& stats);
// snr_db,method,success_rate_pct,mse,mean_coefficient (6 significant digits).
std::string aggregate_to_csv(const std::vector<TrialStats>& stats);

// Effective experiment configuration. Reading starts from `base` and
// overrides only the keys present. Unknown keys are a schema error.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(std::string_view text, ExperimentConfig base);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace tfs::io
