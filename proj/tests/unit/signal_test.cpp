#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "support/errors.hpp"
#include "tfs/signal.hpp"

namespace {

using tfs::ChirpSpec;
using tfs::Errc;
using tfs::NoiseSpec;
using tfs::Signal;
using tfs::test::error_code;

std::vector<double> minus(const Signal& a, const Signal& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

TEST(Signal, RejectsBadInput) {
  EXPECT_EQ(error_code([] { Signal({1.0}, 1000.0); }), Errc::invalid_parameter);
  EXPECT_EQ(error_code([] { Signal({1.0, 2.0}, 0.0); }), Errc::invalid_parameter);
  EXPECT_EQ(error_code([] { Signal({1.0, std::nan("")}, 1.0); }), Errc::invalid_parameter);
  EXPECT_EQ(error_code([] {
              Signal({1.0, std::numeric_limits<double>::infinity()}, 1.0);
            }),
            Errc::invalid_parameter);
  const Signal s({1.0, 2.0, 3.0}, 4.0);
  EXPECT_DOUBLE_EQ(s.duration_s(), 0.75);
}

TEST(ChirpSpec, Validation) {
  ChirpSpec spec;
  EXPECT_NO_THROW(spec.validate());
  spec.delay_samples = spec.length_samples;
  EXPECT_EQ(error_code([&] { spec.validate(); }), Errc::invalid_parameter);
  spec = {};
  spec.chirp_rate_hz = -1.0;
  EXPECT_EQ(error_code([&] { spec.validate(); }), Errc::invalid_parameter);
}

TEST(Chirp, StartsAtZeroAndFollowsClosedForm) {
  const ChirpSpec spec;
  const Signal s = tfs::chirp(spec, 0);
  EXPECT_EQ(s.size(), 5400u);
  EXPECT_EQ(s[0], 0.0);
  const double t = 1234.0 / 1000.0;
  EXPECT_NEAR(s[1234], std::sin(2.0 * M_PI * 5.0 * t * t), 1e-12);
}

TEST(ChirpPair, NoiseFreeDelayStructure) {
  const ChirpSpec spec;
  const auto [f1, f2] = tfs::generate_chirp_pair(spec, {}, {});
  for (std::size_t n = spec.delay_samples; n < spec.length_samples; ++n)
    ASSERT_EQ(f2[n], f1[n - spec.delay_samples]) << n;
  // Before the delay the shifted formula still applies: sin of a positive square.
  const double t = -static_cast<double>(spec.delay_samples) / spec.sample_rate_hz;
  EXPECT_NEAR(f2[0], std::sin(2.0 * M_PI * spec.chirp_rate_hz * t * t), 1e-12);
}

TEST(ChirpPair, EqualSeedsAreRejected) {
  const ChirpSpec spec;
  EXPECT_EQ(error_code([&] {
              tfs::generate_chirp_pair(spec, {0.0, 7}, {0.0, 7});
            }),
            Errc::independence);
  EXPECT_NO_THROW(tfs::generate_chirp_pair(spec, {0.0, 7}, {std::nullopt, 7}));
}

TEST(ChirpPair, ZeroDbNoiseMatchesCleanPower) {
  const ChirpSpec spec;
  const auto [f1, f2] = tfs::generate_chirp_pair(spec, {0.0, 11}, {0.0, 12});
  const Signal c1 = tfs::chirp(spec, 0);
  const Signal c2 = tfs::chirp(spec, spec.delay_samples);
  for (const auto& [noisy, clean] : {std::pair{&f1, &c1}, std::pair{&f2, &c2}}) {
    const auto e = minus(*noisy, *clean);
    const double mean = std::accumulate(e.begin(), e.end(), 0.0) / e.size();
    double var = 0.0;
    for (double v : e) var += (v - mean) * (v - mean);
    var /= static_cast<double>(e.size() - 1);
    EXPECT_NEAR(var / tfs::mean_power(clean->samples()), 1.0, 0.01);
  }
}

TEST(AddWhiteNoise, VanishingNoise) {
  const Signal clean = tfs::chirp({}, 0);
  const Signal noisy = tfs::add_white_noise(clean, {100.0, 3});
  const auto e = minus(noisy, clean);
  const double rel = std::sqrt(tfs::mean_power(e) / tfs::mean_power(clean.samples()));
  EXPECT_LT(rel, 1e-4);
}

TEST(AddWhiteNoise, SameSeedBitIdentical) {
  const Signal clean = tfs::chirp({}, 0);
  EXPECT_EQ(tfs::add_white_noise(clean, {3.0, 99}), tfs::add_white_noise(clean, {3.0, 99}));
  EXPECT_NE(tfs::add_white_noise(clean, {3.0, 99}), tfs::add_white_noise(clean, {3.0, 98}));
}

TEST(AddWhiteNoise, UnitPowerZeroDb) {
  std::vector<double> ones(5400);
  for (std::size_t i = 0; i < ones.size(); ++i) ones[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const Signal clean(ones, 1000.0);
  const Signal noisy = tfs::add_white_noise(clean, {0.0, 5});
  const auto e = minus(noisy, clean);
  const double mean = std::accumulate(e.begin(), e.end(), 0.0) / e.size();
  double var = 0.0;
  for (double v : e) var += (v - mean) * (v - mean);
  var /= static_cast<double>(e.size() - 1);
  EXPECT_NEAR(var, 1.0, 0.03);
}

TEST(AddWhiteNoise, PeakReference) {
  const Signal clean = tfs::chirp({}, 0);
  const Signal noisy = tfs::add_white_noise(clean, {0.0, 5, tfs::SnrReference::peak});
  const auto e = minus(noisy, clean);
  // Unit-amplitude pulse: the noise power is 1, twice the clean mean square.
  EXPECT_NEAR(tfs::mean_power(e), 1.0, 0.05);
  EXPECT_NEAR(tfs::reference_power(clean.samples(), tfs::SnrReference::peak), 1.0, 1e-6);
}

TEST(AddWhiteNoise, ZeroPowerIsUndefined) {
  const Signal zero(std::vector<double>(16, 0.0), 1.0);
  EXPECT_EQ(error_code([&] { tfs::add_white_noise(zero, {0.0, 1}); }), Errc::undefined_snr);
  EXPECT_EQ(error_code([&] { tfs::add_white_noise(zero, {std::nullopt, 1}); }),
            Errc::invalid_parameter);
}

TEST(MeasureSnr, Examples) {
  const Signal clean = tfs::chirp({}, 0);
  EXPECT_NEAR(tfs::measure_snr(clean, tfs::add_white_noise(clean, {0.0, 17})), 0.0, 0.2);
  std::vector<double> twice(clean.samples().begin(), clean.samples().end());
  for (double& v : twice) v *= 2.0;
  EXPECT_DOUBLE_EQ(tfs::measure_snr(clean, Signal(twice, clean.sample_rate_hz())), 0.0);
  EXPECT_EQ(tfs::measure_snr(clean, clean), tfs::kSnrSaturated);
}

TEST(MeasureSnr, RoundTripAcrossRange) {
  const Signal clean = tfs::chirp({}, 0);
  for (int snr = -20; snr <= 20; snr += 2) {
    const auto seed = tfs::derive_seed(1, {static_cast<std::uint64_t>(snr + 100)});
    const Signal noisy = tfs::add_white_noise(clean, {static_cast<double>(snr), seed});
    EXPECT_NEAR(tfs::measure_snr(clean, noisy), snr, 0.2) << snr;
  }
}

TEST(Noise, ChannelsAreIndependent) {
  const ChirpSpec spec;
  const Signal c1 = tfs::chirp(spec, 0);
  const Signal c2 = tfs::chirp(spec, spec.delay_samples);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const auto [f1, f2] = tfs::generate_chirp_pair(
        spec, {0.0, tfs::derive_seed(42, {0, trial, 1})}, {0.0, tfs::derive_seed(42, {0, trial, 2})});
    const auto e1 = minus(f1, c1);
    const auto e2 = minus(f2, c2);
    double s12 = 0.0, s11 = 0.0, s22 = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) {
      s12 += e1[i] * e2[i];
      s11 += e1[i] * e1[i];
      s22 += e2[i] * e2[i];
    }
    EXPECT_LT(std::abs(s12 / std::sqrt(s11 * s22)), 3.0 / std::sqrt(double(e1.size())));
  }
}

TEST(DeriveSeed, StableAndPathSensitive) {
  EXPECT_EQ(tfs::derive_seed(42, {1, 2, 3}), tfs::derive_seed(42, {1, 2, 3}));
  EXPECT_NE(tfs::derive_seed(42, {1, 2, 3}), tfs::derive_seed(42, {1, 3, 2}));
  EXPECT_NE(tfs::derive_seed(42, {1, 2}), tfs::derive_seed(43, {1, 2}));
  EXPECT_NE(tfs::derive_seed(42, {0, 0, 1}), tfs::derive_seed(42, {0, 0, 2}));
}

}  // namespace
