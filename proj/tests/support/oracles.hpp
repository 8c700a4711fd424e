#pragma once

// Slow, direct evaluations used as references for the fast paths.

#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "tfs/matrix.hpp"

namespace tfs::oracle {

using cplx = std::complex<double>;

// x + i H[x] by an O(n^2) DFT and its inverse.
inline std::vector<cplx> analytic_signal(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<cplx> spec(n);
  for (std::size_t q = 0; q < n; ++q) {
    cplx acc{};
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((q * j) % n) /
                         static_cast<double>(n);
      acc += x[j] * cplx(std::cos(ang), std::sin(ang));
    }
    spec[q] = acc;
  }
  for (std::size_t q = 1; q < n; ++q) {
    if (2 * q < n) {
      spec[q] *= 2.0;
    } else if (2 * q > n) {
      spec[q] = 0.0;
    }
  }
  std::vector<cplx> z(n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx acc{};
    for (std::size_t q = 0; q < n; ++q) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>((q * j) % n) /
                         static_cast<double>(n);
      acc += spec[q] * cplx(std::cos(ang), std::sin(ang));
    }
    z[j] = acc / static_cast<double>(n);
  }
  return z;
}

// psi(t, W) = |W| w(W t) exp(i W t), w the unit-area Gaussian of width sigma.
inline cplx morlet(double t, double omega, double sigma) {
  const double u = omega * t;
  const double w = std::exp(-u * u / (2.0 * sigma * sigma)) /
                   (std::sqrt(2.0 * std::numbers::pi) * sigma);
  return std::abs(omega) * w * cplx(std::cos(u), std::sin(u));
}

// Psi(m / fs, 2 pi f_k) = sum_j z[j] conj(psi((j - m) / fs)) / fs, untruncated.
inline Matrix<cplx> nmwt(std::span<const double> x, std::span<const double> freqs_hz,
                         double sigma, double fs) {
  const auto z = analytic_signal(x);
  const std::size_t n = x.size();
  Matrix<cplx> out(freqs_hz.size(), n);
  for (std::size_t k = 0; k < freqs_hz.size(); ++k) {
    const double omega = 2.0 * std::numbers::pi * freqs_hz[k];
    for (std::size_t m = 0; m < n; ++m) {
      cplx acc{};
      for (std::size_t j = 0; j < n; ++j) {
        const double t = (static_cast<double>(j) - static_cast<double>(m)) / fs;
        acc += z[j] * std::conj(morlet(t, omega, sigma));
      }
      out(k, m) = acc / fs;
    }
  }
  return out;
}

// rho(s) by the double loop over the region for a single shift.
inline double rho(const Matrix<double>& a, const Matrix<double>& b, std::size_t t0,
                  std::size_t t1, std::size_t f0, std::size_t f1, std::ptrdiff_t s) {
  double num = 0.0;
  double ea = 0.0;
  double eb = 0.0;
  for (std::size_t k = f0; k < f1; ++k) {
    for (std::size_t m = t0; m < t1; ++m) {
      const double x = a(k, m);
      const double y = b(k, static_cast<std::size_t>(static_cast<std::ptrdiff_t>(m) + s));
      num += x * y;
      ea += x * x;
      eb += y * y;
    }
  }
  return num / std::sqrt(ea * eb);
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

struct LagPeak {
  std::ptrdiff_t lag = 0;
  double value = 0.0;
};

// Pearson of x[i] against y[i + L] on the overlap, maximized over |L| <= max_lag.
inline LagPeak pearson_max_lag(std::span<const double> x, std::span<const double> y,
                               std::size_t max_lag) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  LagPeak best{0, -2.0};
  for (std::ptrdiff_t lag = -static_cast<std::ptrdiff_t>(max_lag);
       lag <= static_cast<std::ptrdiff_t>(max_lag); ++lag) {
    const std::ptrdiff_t i0 = lag < 0 ? -lag : 0;
    const std::ptrdiff_t i1 = lag < 0 ? n : n - lag;
    if (i1 - i0 < 2) continue;
    const auto len = static_cast<std::size_t>(i1 - i0);
    const double r = pearson(x.subspan(static_cast<std::size_t>(i0), len),
                             y.subspan(static_cast<std::size_t>(i0 + lag), len));
    if (r > best.value) best = {lag, r};
  }
  return best;
}

// argmax over |L| <= max_lag of sum_i x[i] y[i + L].
inline LagPeak lag_scan(std::span<const double> x, std::span<const double> y,
                        std::size_t max_lag) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  LagPeak best{0, -std::numeric_limits<double>::infinity()};
  for (std::ptrdiff_t lag = -static_cast<std::ptrdiff_t>(max_lag);
       lag <= static_cast<std::ptrdiff_t>(max_lag); ++lag) {
    double acc = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const std::ptrdiff_t j = i + lag;
      if (j >= 0 && j < n) acc += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
    }
    acc /= static_cast<double>(n);
    if (acc > best.value) best = {lag, acc};
  }
  return best;
}

}  // namespace tfs::oracle
