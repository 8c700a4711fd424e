#pragma once

// Measurements shared by the property tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "support/oracles.hpp"
#include "tfs/similarity.hpp"
#include "tfs/transform.hpp"

namespace tfs::test {

struct InactionCase {
  double freq_hz = 0.0;
  double rel_error = 0.0;           // matched row vs analytic harmonic, interior L2
  std::size_t argmax_misses = 0;    // interior instants whose |Psi| peak is elsewhere
  std::size_t interior = 0;
};

// A cos(2 pi f t + phi) with f drawn from the grid, which sits on DFT bins so
// the analytic signal is exactly A exp(i (2 pi f t + phi)).
inline std::vector<InactionCase> inaction_cases(std::uint64_t seed, std::size_t count,
                                                double sigma) {
  constexpr double fs = 1000.0;
  constexpr std::size_t n = 4000;
  const FrequencyGrid grid = FrequencyGrid::linear(2.0, 60.0, 1.0);
  const WindowParams window{sigma};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> amp(0.5, 3.0);

  std::vector<InactionCase> out;
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t row = pick(rng);
    const double f = grid[row];
    const double a = amp(rng);
    const double phi = phase(rng);
    const double omega = 2.0 * std::numbers::pi * f;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a * std::cos(omega * i / fs + phi);
    const Spectrum spec = nmwt(Signal(x, fs), grid, window);

    const auto margin = static_cast<std::size_t>(std::ceil(3.0 * sigma / omega * fs));
    InactionCase r{f};
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t m = margin; m + margin < n; ++m) {
      const double arg = omega * m / fs + phi;
      const std::complex<double> want = a * std::complex<double>(std::cos(arg), std::sin(arg));
      err += std::norm(spec.values()(row, m) - want);
      ref += std::norm(want);
      std::size_t best = 0;
      for (std::size_t k = 1; k < grid.size(); ++k)
        if (std::abs(spec.values()(k, m)) > std::abs(spec.values()(best, m))) best = k;
      if (best != row) ++r.argmax_misses;
      ++r.interior;
    }
    r.rel_error = std::sqrt(err / ref);
    out.push_back(r);
  }
  return out;
}

// Relative Frobenius error between nmwt and direct quadrature for random inputs.
inline std::vector<double> quadrature_errors(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> len(8, 256);
  std::uniform_int_distribution<std::size_t> rows(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  std::vector<double> out;
  for (std::size_t c = 0; c < count; ++c) {
    const double fs = 50.0 + 950.0 * unit(rng);
    const std::size_t n = len(rng);
    std::vector<double> x(n);
    for (double& v : x) v = gauss(rng);
    std::vector<double> freqs(rows(rng));
    for (double& f : freqs) f = (0.01 + 0.48 * unit(rng)) * fs;
    std::sort(freqs.begin(), freqs.end());
    freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
    const double sigma = 0.5 + 1.5 * unit(rng);

    const Spectrum fast = nmwt(Signal(x, fs), FrequencyGrid(freqs), WindowParams{sigma});
    const Matrix<std::complex<double>> slow = oracle::nmwt(x, freqs, sigma, fs);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < slow.data().size(); ++i) {
      num += std::norm(fast.values().data()[i] - slow.data()[i]);
      den += std::norm(slow.data()[i]);
    }
    out.push_back(std::sqrt(num / den));
  }
  return out;
}

// Largest |fast - naive| over all shifts for random TFPS-like matrices.
inline std::vector<double> similarity_oracle_errors(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> rows_d(1, 64);
  std::uniform_int_distribution<std::size_t> cols_d(8, 256);
  std::normal_distribution<double> gauss;
  std::vector<double> out;
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t rows = rows_d(rng);
    const std::size_t cols = cols_d(rng);
    Matrix<double> a(rows, cols), b(rows, cols);
    for (double& v : a.data()) v = gauss(rng);
    for (double& v : b.data()) v = gauss(rng);
    // Correlated half the time so the curve has a real peak.
    if (c % 2 == 0) {
      for (std::size_t k = 0; k < rows; ++k)
        for (std::size_t m = 3; m < cols; ++m) b(k, m) += 2.0 * a(k, m - 3);
    }
    const std::size_t f0 = std::uniform_int_distribution<std::size_t>(0, rows - 1)(rng);
    const std::size_t f1 = std::uniform_int_distribution<std::size_t>(f0 + 1, rows)(rng);
    const std::size_t t0 = std::uniform_int_distribution<std::size_t>(0, cols / 3)(rng);
    const std::size_t t1 =
        std::uniform_int_distribution<std::size_t>(t0 + 1, t0 + 1 + cols / 3)(rng);
    const Region region{t0, t1, f0, f1};
    const ShiftRange shifts{-static_cast<std::ptrdiff_t>(t0),
                            static_cast<std::ptrdiff_t>(cols - t1)};
    const SimilarityCurve curve = similarity_function(a, b, region, shifts);
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.shifts.size(); ++i) {
      const double want = oracle::rho(a, b, t0, t1, f0, f1, curve.shifts[i]);
      worst = std::max(worst, std::abs(curve.values[i] - want));
    }
    out.push_back(worst);
  }
  return out;
}

}  // namespace tfs::test
