#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "tfs/matrix.hpp"
#include "tfs/signal.hpp"
#include "tfs/transform.hpp"

namespace tfs {

// Rectangular interest area S: [t_begin, t_end) samples x [f_begin, f_end) rows.
struct Region {
  std::size_t t_begin = 0;
  std::size_t t_end = 0;
  std::size_t f_begin = 0;
  std::size_t f_end = 0;

  std::size_t time_extent() const noexcept { return t_end - t_begin; }
  std::size_t freq_extent() const noexcept { return f_end - f_begin; }
  // Throws Errc::invalid_parameter if empty or not inside rows x cols.
  void validate(std::size_t rows, std::size_t cols) const;

  friend bool operator==(const Region&, const Region&) = default;
};

// Inclusive range of integer sample shifts.
struct ShiftRange {
  std::ptrdiff_t lo = 0;
  std::ptrdiff_t hi = 0;

  std::size_t count() const noexcept { return static_cast<std::size_t>(hi - lo + 1); }
  friend bool operator==(const ShiftRange&, const ShiftRange&) = default;
};

// rho(s) sampled at consecutive integer shifts.
struct SimilarityCurve {
  std::vector<std::ptrdiff_t> shifts;
  std::vector<double> values;
};

struct SimilarityResult {
  double coefficient = 0.0;        // max rho
  std::ptrdiff_t delay_samples = 0;  // argmax, smallest shift on ties
  double delay_seconds = 0.0;
  SimilarityCurve curve;
};

// rho(s) = sum_S A(k,m) B(k,m+s) / sqrt(sum_S A^2 * sum_S B(k,m+s)^2)
//
// A and B are TFPS matrices on the same grid. The numerator is accumulated in
// the frequency domain over all region rows and inverted once; the second
// energy factor is re-evaluated for every shift from column prefix sums.
// Throws Errc::out_of_range if any shifted window leaves B and
// Errc::degenerate if either energy is zero. Values are clamped to [-1, 1].
SimilarityCurve similarity_function(const Matrix<double>& tfps1, const Matrix<double>& tfps2,
                                    const Region& region, ShiftRange shifts);

// Same, from spectra; both must share grid, window and sample rate.
SimilarityCurve similarity_function(const Spectrum& spec1, const Spectrum& spec2,
                                    const Region& region, ShiftRange shifts);

SimilarityResult similarity_coefficient(SimilarityCurve curve, double sample_rate_hz);

// Edge margin in samples excluded from automatic regions: 3 sigma / (2 pi f_min).
std::size_t edge_margin_samples(const Spectrum& spectrum);

// Grows a rectangle from the |Psi|^2 maximum, alternating time and frequency
// expansion (each step takes the richer side), until it holds at least
// energy_fraction of the energy inside the margin-clipped extent.
Region select_region_auto(const Spectrum& spectrum, double energy_fraction);

// Largest sub-range of `requested` for which region shifted by s stays
// inside [0, n_time). Throws Errc::out_of_range if nothing remains.
ShiftRange clip_shift_range(const Region& region, std::size_t n_time, ShiftRange requested);

struct AutoRegion {
  double energy_fraction = 0.95;
};
using RegionPolicy = std::variant<AutoRegion, Region>;

struct SimilarityConfig {
  WindowParams window{};
  FrequencyGrid grid = FrequencyGrid::linear(1.0, 60.0, 1.0);
  RegionPolicy region = AutoRegion{};
  // Absent: +-length/4 clipped to what the region allows.
  std::optional<ShiftRange> shifts;
};

struct AnalysisResult {
  SimilarityResult similarity;
  Region region;       // resolved region
  ShiftRange shifts;   // resolved shift range
};

// nmwt -> tfps -> region -> rho(s) -> max / argmax.
AnalysisResult similarity_analyze(const Signal& f1, const Signal& f2,
                                  const SimilarityConfig& config);

}  // namespace tfs
