#include "tfs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "tfs/error.hpp"
#include "tfs/fft.hpp"

namespace tfs {

namespace {

using fft::cplx;

void require_pair(const Signal& f1, const Signal& f2, std::size_t max_lag, const char* who) {
  if (f1.size() != f2.size())
    throw Error(Errc::invalid_parameter, std::string(who) + ": signals differ in length");
  if (max_lag == 0 || max_lag >= f1.size())
    throw Error(Errc::invalid_parameter, std::string(who) + ": need 0 < max_lag < length");
}

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Argmax over lags -max_lag..max_lag of corr(lag); smallest lag wins ties.
template <typename F>
std::pair<std::ptrdiff_t, double> scan_lags(std::size_t max_lag, F&& corr) {
  const auto m = static_cast<std::ptrdiff_t>(max_lag);
  std::ptrdiff_t best_lag = -m;
  double best = corr(-m);
  for (std::ptrdiff_t lag = -m + 1; lag <= m; ++lag) {
    const double v = corr(lag);
    if (v > best) {
      best = v;
      best_lag = lag;
    }
  }
  return {best_lag, best};
}

// c[j] for circular index j of sum_i x[i] y[i + lag], computed via real FFTs
// of length >= 2n so that negative lags land at len + lag.
std::vector<double> fft_cross_correlation(std::span<const double> x, std::span<const double> y,
                                          std::size_t& len) {
  len = fft::next_fast_size(2 * x.size());
  std::vector<double> px(len, 0.0), py(len, 0.0);
  std::copy(x.begin(), x.end(), px.begin());
  std::copy(y.begin(), y.end(), py.begin());
  std::vector<cplx> fx(len / 2 + 1), fy(len / 2 + 1);
  fft::forward_real(px, fx);
  fft::forward_real(py, fy);
  for (std::size_t q = 0; q < fx.size(); ++q) fx[q] = std::conj(fx[q]) * fy[q];
  std::vector<double> out(len);
  fft::inverse_real(fx, out);
  const double inv = 1.0 / static_cast<double>(len);
  for (double& v : out) v *= inv;
  return out;
}

void smooth(std::vector<double>& v, std::size_t half) {
  if (half == 0) return;
  const std::size_t n = v.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + v[i];
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    v[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
}

// Floors denominators at 1e-12 x max; returns how many were raised.
std::size_t apply_floor(std::vector<double>& d) {
  const double top = *std::max_element(d.begin(), d.end());
  const double floor = top > 0.0 ? 1e-12 * top : 1e-300;
  std::size_t count = 0;
  for (double& v : d) {
    if (v < floor) {
      v = floor;
      ++count;
    }
  }
  return count;
}

}  // namespace

std::string_view to_string(GccWeighting w) noexcept {
  switch (w) {
    case GccWeighting::none: return "none";
    case GccWeighting::roth: return "roth";
    case GccWeighting::scot: return "scot";
    case GccWeighting::phat: return "phat";
    case GccWeighting::ml: return "ml";
  }
  return "none";
}

std::optional<GccWeighting> parse_gcc_weighting(std::string_view name) noexcept {
  for (auto w : {GccWeighting::none, GccWeighting::roth, GccWeighting::scot, GccWeighting::phat,
                 GccWeighting::ml})
    if (to_string(w) == name) return w;
  return std::nullopt;
}

double pearson(const Signal& f1, const Signal& f2) {
  if (f1.size() != f2.size())
    throw Error(Errc::invalid_parameter, "pearson: signals differ in length");
  const auto x = f1.samples();
  const auto y = f2.samples();
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    throw Error(Errc::degenerate, "pearson: constant input has no correlation");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

LaggedCorrelation pearson_max_lag(const Signal& f1, const Signal& f2, std::size_t max_lag) {
  require_pair(f1, f2, max_lag, "pearson_max_lag");
  const std::size_t n = f1.size();
  if (n - max_lag < 2)
    throw Error(Errc::invalid_parameter, "pearson_max_lag: overlap shorter than 2 samples");

  // Global centering first keeps the one-pass moment formulas well conditioned.
  const double mx = mean_of(f1.samples());
  const double my = mean_of(f2.samples());
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = f1[i] - mx;
    y[i] = f2[i] - my;
  }
  std::vector<double> px(n + 1, 0.0), pxx(n + 1, 0.0), py(n + 1, 0.0), pyy(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    px[i + 1] = px[i] + x[i];
    pxx[i + 1] = pxx[i] + x[i] * x[i];
    py[i + 1] = py[i] + y[i];
    pyy[i + 1] = pyy[i] + y[i] * y[i];
  }
  std::size_t len = 0;
  const std::vector<double> sxy = fft_cross_correlation(x, y, len);

  bool any = false;
  auto corr = [&](std::ptrdiff_t lag) {
    const std::size_t a = lag < 0 ? static_cast<std::size_t>(-lag) : 0;  // x start
    const std::size_t b = lag > 0 ? static_cast<std::size_t>(lag) : 0;   // y start
    const std::size_t m = n - (a > b ? a : b);
    const double cnt = static_cast<double>(m);
    const double sx = px[a + m] - px[a];
    const double sy = py[b + m] - py[b];
    const double vx = (pxx[a + m] - pxx[a]) - sx * sx / cnt;
    const double vy = (pyy[b + m] - pyy[b]) - sy * sy / cnt;
    const auto idx = static_cast<std::size_t>(lag < 0 ? static_cast<std::ptrdiff_t>(len) + lag : lag);
    const double cov = sxy[idx] - sx * sy / cnt;
    if (!(vx > 0.0) || !(vy > 0.0)) return -2.0;
    any = true;
    return std::clamp(cov / std::sqrt(vx * vy), -1.0, 1.0);
  };
  const auto [lag, value] = scan_lags(max_lag, corr);
  if (!any) throw Error(Errc::degenerate, "pearson_max_lag: constant input has no correlation");
  return {value, lag};
}

TdeEstimate cc_tde(const Signal& f1, const Signal& f2, std::size_t max_lag) {
  require_pair(f1, f2, max_lag, "cc_tde");
  if (!(mean_power(f1.samples()) > 0.0) || !(mean_power(f2.samples()) > 0.0))
    throw Error(Errc::degenerate, "cc_tde: zero-energy input");
  const auto x = f1.samples();
  const auto y = f2.samples();
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const double inv_n = 1.0 / static_cast<double>(n);
  auto corr = [&](std::ptrdiff_t lag) {
    double acc = 0.0;
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -lag);
    const std::ptrdiff_t hi = std::min(n, n - lag);
    for (std::ptrdiff_t i = lo; i < hi; ++i) acc += x[i] * y[i + lag];
    return acc * inv_n;
  };
  const auto [lag, value] = scan_lags(max_lag, corr);
  return {lag, value, "cc", 0};
}

TdeEstimate gcc_tde(const Signal& f1, const Signal& f2, GccWeighting weighting,
                    std::size_t max_lag, const GccOptions& options) {
  require_pair(f1, f2, max_lag, "gcc_tde");
  if (!(mean_power(f1.samples()) > 0.0) || !(mean_power(f2.samples()) > 0.0))
    throw Error(Errc::degenerate, "gcc_tde: zero-energy input");

  const std::size_t n = f1.size();
  const std::size_t len = fft::next_fast_size(2 * n);
  const std::size_t bins = len / 2 + 1;

  auto spectrum_of = [&](std::span<const double> x, bool taper) {
    std::vector<double> padded(len, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = taper ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                                    static_cast<double>(i) /
                                                    static_cast<double>(n - 1))
                             : 1.0;
      padded[i] = w * x[i];
    }
    std::vector<cplx> out(bins);
    fft::forward_real(padded, out);
    return out;
  };

  const auto x1 = spectrum_of(f1.samples(), false);
  const auto x2 = spectrum_of(f2.samples(), false);
  std::vector<cplx> g12(bins);
  for (std::size_t q = 0; q < bins; ++q) g12[q] = std::conj(x1[q]) * x2[q];

  std::vector<double> weight(bins, 1.0);
  std::size_t floored = 0;

  if (weighting == GccWeighting::phat) {
    std::vector<double> mag(bins);
    for (std::size_t q = 0; q < bins; ++q) mag[q] = std::abs(g12[q]);
    floored = apply_floor(mag);
    for (std::size_t q = 0; q < bins; ++q) weight[q] = 1.0 / mag[q];
  } else if (weighting != GccWeighting::none) {
    const auto t1 = spectrum_of(f1.samples(), true);
    const auto t2 = spectrum_of(f2.samples(), true);
    std::vector<double> s11(bins), s22(bins), s12_re(bins), s12_im(bins);
    for (std::size_t q = 0; q < bins; ++q) {
      s11[q] = std::norm(t1[q]);
      s22[q] = std::norm(t2[q]);
      const cplx c = std::conj(t1[q]) * t2[q];
      s12_re[q] = c.real();
      s12_im[q] = c.imag();
    }
    for (auto* v : {&s11, &s22, &s12_re, &s12_im}) smooth(*v, options.smoothing_bins);

    std::vector<double> denom(bins);
    switch (weighting) {
      case GccWeighting::roth:
        denom = s11;
        break;
      case GccWeighting::scot:
        for (std::size_t q = 0; q < bins; ++q) denom[q] = std::sqrt(s11[q] * s22[q]);
        break;
      case GccWeighting::ml: {
        constexpr double kMaxCoherence = 1.0 - 1e-6;
        std::vector<double> coherence(bins);
        for (std::size_t q = 0; q < bins; ++q) {
          const double cross2 = s12_re[q] * s12_re[q] + s12_im[q] * s12_im[q];
          const double auto2 = s11[q] * s22[q];
          coherence[q] = auto2 > 0.0 ? std::min(cross2 / auto2, kMaxCoherence) : 0.0;
          denom[q] = std::sqrt(cross2) * (1.0 - coherence[q]);
        }
        floored = apply_floor(denom);
        for (std::size_t q = 0; q < bins; ++q) weight[q] = coherence[q] / denom[q];
        break;
      }
      default:
        break;
    }
    if (weighting != GccWeighting::ml) {
      floored = apply_floor(denom);
      for (std::size_t q = 0; q < bins; ++q) weight[q] = 1.0 / denom[q];
    }
  }

  for (std::size_t q = 0; q < bins; ++q) g12[q] *= weight[q];
  std::vector<double> r(len);
  fft::inverse_real(g12, r);
  // 1/len undoes the unnormalized inverse; 1/n matches the biased CC scale.
  const double scale = 1.0 / (static_cast<double>(len) * static_cast<double>(n));

  auto corr = [&](std::ptrdiff_t lag) {
    const auto idx =
        static_cast<std::size_t>(lag < 0 ? static_cast<std::ptrdiff_t>(len) + lag : lag);
    return r[idx] * scale;
  };
  const auto [lag, value] = scan_lags(max_lag, corr);
  return {lag, value, "gcc:" + std::string(to_string(weighting)), floored};
}

}  // namespace tfs
