#include "tfs/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tfs/error.hpp"
#include "tfs/fft.hpp"

namespace tfs {

void Region::validate(std::size_t rows, std::size_t cols) const {
  if (t_end <= t_begin || f_end <= f_begin)
    throw Error(Errc::invalid_parameter, "region: empty");
  if (t_end > cols || f_end > rows)
    throw Error(Errc::invalid_parameter, "region: exceeds spectrum dimensions");
}

SimilarityCurve similarity_function(const Matrix<double>& tfps1, const Matrix<double>& tfps2,
                                    const Region& region, ShiftRange shifts) {
  region.validate(tfps1.rows(), tfps1.cols());
  if (tfps2.rows() != tfps1.rows())
    throw Error(Errc::invalid_parameter, "similarity: operands have different frequency grids");
  if (shifts.hi < shifts.lo) throw Error(Errc::invalid_parameter, "similarity: empty shift range");

  const auto t0 = static_cast<std::ptrdiff_t>(region.t_begin);
  const auto t1 = static_cast<std::ptrdiff_t>(region.t_end);
  if (t0 + shifts.lo < 0 || t1 + shifts.hi > static_cast<std::ptrdiff_t>(tfps2.cols()))
    throw Error(Errc::out_of_range,
                "similarity: shifted region [" + std::to_string(t0 + shifts.lo) + ", " +
                    std::to_string(t1 + shifts.hi) + ") leaves the second spectrum (" +
                    std::to_string(tfps2.cols()) + " samples)");

  const std::size_t width = region.time_extent();
  const std::size_t n_shift = shifts.count();
  // B is read over [t0 + lo, t1 + hi): width + n_shift - 1 columns.
  const std::size_t span_len = width + n_shift - 1;
  const auto b0 = static_cast<std::size_t>(t0 + shifts.lo);
  const std::size_t len = fft::next_fast_size(span_len);
  const std::size_t bins = len / 2 + 1;

  std::vector<double> a(len), b(len);
  std::vector<fft::cplx> fa(bins), fb(bins), cross(bins, fft::cplx{});
  std::vector<double> column_energy(span_len, 0.0);
  double energy1 = 0.0;

  for (std::size_t k = region.f_begin; k < region.f_end; ++k) {
    auto r1 = tfps1.row(k);
    auto r2 = tfps2.row(k);
    std::fill(a.begin(), a.end(), 0.0);
    std::fill(b.begin(), b.end(), 0.0);
    for (std::size_t i = 0; i < width; ++i) {
      a[i] = r1[region.t_begin + i];
      energy1 += a[i] * a[i];
    }
    for (std::size_t i = 0; i < span_len; ++i) {
      b[i] = r2[b0 + i];
      column_energy[i] += b[i] * b[i];
    }
    fft::forward_real(a, fa);
    fft::forward_real(b, fb);
    for (std::size_t q = 0; q < bins; ++q) cross[q] += std::conj(fa[q]) * fb[q];
  }
  if (!(energy1 > 0.0))
    throw Error(Errc::degenerate, "similarity: zero energy in the first operand's region");

  // c[j] = sum_i a[i] b[i + j]; no wrap since i + j < span_len <= len.
  std::vector<double> corr(len);
  fft::inverse_real(cross, corr);
  const double inv_len = 1.0 / static_cast<double>(len);

  std::vector<double> prefix(span_len + 1, 0.0);
  for (std::size_t i = 0; i < span_len; ++i) prefix[i + 1] = prefix[i] + column_energy[i];

  SimilarityCurve curve;
  curve.shifts.resize(n_shift);
  curve.values.resize(n_shift);
  for (std::size_t j = 0; j < n_shift; ++j) {
    const double energy2 = prefix[j + width] - prefix[j];
    if (!(energy2 > 0.0))
      throw Error(Errc::degenerate, "similarity: zero energy in the shifted second region");
    const double rho = corr[j] * inv_len / std::sqrt(energy1 * energy2);
    curve.shifts[j] = shifts.lo + static_cast<std::ptrdiff_t>(j);
    curve.values[j] = std::clamp(rho, -1.0, 1.0);
  }
  return curve;
}

SimilarityCurve similarity_function(const Spectrum& spec1, const Spectrum& spec2,
                                    const Region& region, ShiftRange shifts) {
  if (!(spec1.grid() == spec2.grid()) || spec1.window().sigma != spec2.window().sigma ||
      spec1.sample_rate_hz() != spec2.sample_rate_hz())
    throw Error(Errc::invalid_parameter,
                "similarity: spectra must share grid, window and sample rate");
  return similarity_function(tfps(spec1), tfps(spec2), region, shifts);
}

SimilarityResult similarity_coefficient(SimilarityCurve curve, double sample_rate_hz) {
  if (curve.values.empty() || curve.values.size() != curve.shifts.size())
    throw Error(Errc::invalid_parameter, "similarity: empty curve");
  if (!(sample_rate_hz > 0.0))
    throw Error(Errc::invalid_parameter, "similarity: sample rate must be positive");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.values.size(); ++i) {
    if (curve.values[i] > curve.values[best] ||
        (curve.values[i] == curve.values[best] && curve.shifts[i] < curve.shifts[best]))
      best = i;
  }
  SimilarityResult r;
  r.coefficient = curve.values[best];
  r.delay_samples = curve.shifts[best];
  r.delay_seconds = static_cast<double>(r.delay_samples) / sample_rate_hz;
  r.curve = std::move(curve);
  return r;
}

std::size_t edge_margin_samples(const Spectrum& spectrum) {
  const double seconds =
      3.0 * spectrum.window().sigma / (2.0 * std::numbers::pi * spectrum.grid().min_hz());
  return static_cast<std::size_t>(std::ceil(seconds * spectrum.sample_rate_hz()));
}

Region select_region_auto(const Spectrum& spectrum, double energy_fraction) {
  if (!(energy_fraction > 0.0 && energy_fraction <= 1.0))
    throw Error(Errc::invalid_parameter, "region: energy fraction must be in (0, 1]");

  const std::size_t rows = spectrum.n_freq();
  const std::size_t margin = edge_margin_samples(spectrum);
  if (2 * margin >= spectrum.n_time())
    throw Error(Errc::degenerate, "region: edge margins leave no interior samples");
  const std::size_t c0 = margin;
  const std::size_t cols = spectrum.n_time() - 2 * margin;

  // 2-D prefix sums of |Psi|^2 over the interior.
  std::vector<double> cum((rows + 1) * (cols + 1), 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return cum[r * (cols + 1) + c]; };
  std::size_t best_r = 0, best_c = 0;
  double best = -1.0;
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = spectrum.values().row(r);
    double run = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double e = std::norm(row[c0 + c]);
      if (e > best) {
        best = e;
        best_r = r;
        best_c = c;
      }
      run += e;
      at(r + 1, c + 1) = at(r, c + 1) + run;
    }
  }
  const double total = at(rows, cols);
  if (!(total > 0.0)) throw Error(Errc::degenerate, "region: spectrum has no energy");

  auto box = [&](std::size_t r0, std::size_t r1, std::size_t cc0, std::size_t cc1) {
    return at(r1, cc1) - at(r0, cc1) - at(r1, cc0) + at(r0, cc0);
  };

  std::size_t r0 = best_r, r1 = best_r + 1, t0 = best_c, t1 = best_c + 1;
  const double target = energy_fraction * total;
  bool grow_time = true;
  while (box(r0, r1, t0, t1) < target) {
    const bool time_open = t0 > 0 || t1 < cols;
    const bool freq_open = r0 > 0 || r1 < rows;
    if (!time_open && !freq_open) break;
    const bool use_time = (grow_time && time_open) || !freq_open;
    if (use_time) {
      const double lo = t0 > 0 ? box(r0, r1, t0 - 1, t0) : -1.0;
      const double hi = t1 < cols ? box(r0, r1, t1, t1 + 1) : -1.0;
      if (lo >= hi) --t0; else ++t1;
    } else {
      const double lo = r0 > 0 ? box(r0 - 1, r0, t0, t1) : -1.0;
      const double hi = r1 < rows ? box(r1, r1 + 1, t0, t1) : -1.0;
      if (lo >= hi) --r0; else ++r1;
    }
    grow_time = !grow_time;
  }
  return Region{c0 + t0, c0 + t1, r0, r1};
}

ShiftRange clip_shift_range(const Region& region, std::size_t n_time, ShiftRange requested) {
  const auto lo = std::max(requested.lo, -static_cast<std::ptrdiff_t>(region.t_begin));
  const auto hi = std::min(requested.hi, static_cast<std::ptrdiff_t>(n_time) -
                                             static_cast<std::ptrdiff_t>(region.t_end));
  if (hi < lo) throw Error(Errc::out_of_range, "similarity: no valid shift for this region");
  return {lo, hi};
}

AnalysisResult similarity_analyze(const Signal& f1, const Signal& f2,
                                  const SimilarityConfig& config) {
  if (f1.sample_rate_hz() != f2.sample_rate_hz())
    throw Error(Errc::invalid_parameter, "analyze: sample rates differ");

  const Spectrum s1 = nmwt(f1, config.grid, config.window);
  const Spectrum s2 = nmwt(f2, config.grid, config.window);

  Region region;
  if (const auto* fixed = std::get_if<Region>(&config.region)) {
    region = *fixed;
    region.validate(s1.n_freq(), s1.n_time());
  } else {
    region = select_region_auto(s1, std::get<AutoRegion>(config.region).energy_fraction);
  }

  ShiftRange shifts;
  if (config.shifts) {
    shifts = *config.shifts;
  } else {
    const auto quarter = static_cast<std::ptrdiff_t>(f1.size() / 4);
    shifts = clip_shift_range(region, s2.n_time(), {-quarter, quarter});
  }

  AnalysisResult out;
  out.similarity = similarity_coefficient(similarity_function(s1, s2, region, shifts),
                                          f1.sample_rate_hz());
  out.region = region;
  out.shifts = shifts;
  return out;
}

}  // namespace tfs
