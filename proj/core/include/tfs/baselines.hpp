#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "tfs/signal.hpp"

namespace tfs {

enum class GccWeighting { none, roth, scot, phat, ml };

std::string_view to_string(GccWeighting w) noexcept;
std::optional<GccWeighting> parse_gcc_weighting(std::string_view name) noexcept;

struct TdeEstimate {
  std::ptrdiff_t delay_samples = 0;  // positive: f2 lags f1
  double peak_value = 0.0;
  std::string method;
  std::size_t floored_bins = 0;  // spectral bins whose weight denominator hit the floor
};

// Sample Pearson coefficient (two-pass). Errc::degenerate for constant input.
double pearson(const Signal& f1, const Signal& f2);

struct LaggedCorrelation {
  double coefficient = 0.0;
  std::ptrdiff_t lag = 0;
};

// Maximum over lags L in [-max_lag, max_lag] of the Pearson coefficient
// between f1[i] and f2[i + L] on their overlap. This is the peak of the
// normalized correlation function, the quantity read off when comparing two
// pulses that are offset in time.
LaggedCorrelation pearson_max_lag(const Signal& f1, const Signal& f2, std::size_t max_lag);

// argmax over L of (1/N) sum_i f1[i] f2[i + L], direct evaluation.
TdeEstimate cc_tde(const Signal& f1, const Signal& f2, std::size_t max_lag);

struct GccOptions {
  // Half-width (bins) of the moving average applied to the Hann-tapered
  // periodograms that feed the roth/scot/ml weights. A single raw periodogram
  // has coherence exactly 1 everywhere, which makes ml meaningless.
  std::size_t smoothing_bins = 8;
};

// Generalized cross-correlation: IFFT(W(w) conj(X1) X2) / N with
//   none: 1            roth: 1/S11          scot: 1/sqrt(S11 S22)
//   phat: 1/|G12|      ml:   g^2 / (|S12| (1 - g^2)),  g^2 = |S12|^2/(S11 S22) <= 1 - 1e-6
// where G12 is the raw cross-spectrum and S.. are smoothed tapered estimates.
// Denominators are floored at 1e-12 x their maximum; floored bins are counted.
TdeEstimate gcc_tde(const Signal& f1, const Signal& f2, GccWeighting weighting,
                    std::size_t max_lag, const GccOptions& options = {});

}  // namespace tfs
