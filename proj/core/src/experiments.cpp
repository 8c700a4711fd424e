#include "tfs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "tfs/error.hpp"

namespace tfs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Estimate {
  double coefficient;
  std::ptrdiff_t delay;
};

Estimate run_method(const Method& method, const Signal& f1, const Signal& f2,
                    const ExperimentConfig& config) {
  const std::size_t max_lag = config.resolved_max_lag();
  switch (method.kind) {
    case MethodKind::similarity: {
      const auto r = similarity_analyze(f1, f2, config.similarity);
      return {r.similarity.coefficient, r.similarity.delay_samples};
    }
    case MethodKind::pearson: {
      const auto r = pearson_max_lag(f1, f2, max_lag);
      return {r.coefficient, r.lag};
    }
    case MethodKind::cc: {
      const auto r = cc_tde(f1, f2, max_lag);
      return {r.peak_value, r.delay_samples};
    }
    case MethodKind::gcc: {
      const auto r = gcc_tde(f1, f2, method.weighting, max_lag, config.gcc);
      return {r.peak_value, r.delay_samples};
    }
  }
  throw Error(Errc::invalid_parameter, "unknown method");
}

void aggregate(MethodStats& stats, std::ptrdiff_t true_delay) {
  std::vector<std::optional<std::ptrdiff_t>> estimates;
  std::vector<std::ptrdiff_t> valid;
  double coef_sum = 0.0;
  std::size_t coef_count = 0;
  stats.failed = 0;
  for (const auto& t : stats.trials) {
    estimates.push_back(t.delay_samples);
    if (t.delay_samples) valid.push_back(*t.delay_samples);
    if (t.coefficient) {
      coef_sum += *t.coefficient;
      ++coef_count;
    }
    if (!t.error.empty()) ++stats.failed;
  }
  stats.success_rate_pct = success_rate(estimates, true_delay);
  stats.mse = valid.size() >= 2 ? mse(valid, true_delay) : kNaN;
  stats.mean_coefficient = coef_count > 0 ? coef_sum / static_cast<double>(coef_count) : kNaN;
}

}  // namespace

std::string Method::name() const {
  switch (kind) {
    case MethodKind::similarity: return "similarity";
    case MethodKind::pearson: return "pearson";
    case MethodKind::cc: return "cc";
    case MethodKind::gcc: return "gcc:" + std::string(to_string(weighting));
  }
  return "unknown";
}

std::optional<Method> Method::parse(std::string_view name) {
  if (name == "similarity") return Method{MethodKind::similarity};
  if (name == "pearson") return Method{MethodKind::pearson};
  if (name == "cc") return Method{MethodKind::cc};
  if (name.starts_with("gcc:")) {
    if (auto w = parse_gcc_weighting(name.substr(4))) return Method{MethodKind::gcc, *w};
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  chirp.validate();
  similarity.window.validate();
  if (n_trials < 1) throw Error(Errc::invalid_parameter, "experiment: n_trials must be >= 1");
  if (snr_db_list.empty())
    throw Error(Errc::invalid_parameter, "experiment: SNR list must not be empty");
  for (double s : snr_db_list)
    if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
      throw Error(Errc::invalid_parameter, "experiment: invalid SNR value");
  if (methods.empty()) throw Error(Errc::invalid_parameter, "experiment: no methods");
  const std::size_t lag = resolved_max_lag();
  if (lag == 0 || lag >= chirp.length_samples)
    throw Error(Errc::invalid_parameter, "experiment: need 0 < max_lag < length");
}

Region ridge_region(const ChirpSpec& chirp, const FrequencyGrid& grid) {
  chirp.validate();
  const std::size_t n = chirp.length_samples;
  const std::size_t t_begin = n / 8;
  const std::size_t t_end = n - n / 8;
  const double f_lo = 2.0 * chirp.chirp_rate_hz * static_cast<double>(t_begin) / chirp.sample_rate_hz;
  const double f_hi = 2.0 * chirp.chirp_rate_hz * static_cast<double>(t_end) / chirp.sample_rate_hz;
  const std::size_t k_lo = grid.nearest(f_lo);
  const std::size_t k_hi = grid.nearest(f_hi);
  return Region{t_begin, t_end, k_lo, k_hi + 1};
}

ExperimentConfig reproduction_config() {
  ExperimentConfig config;
  config.similarity.window.sigma = 4.0;
  config.similarity.grid = FrequencyGrid::linear(1.0, 60.0, 1.0);
  config.similarity.region = ridge_region(config.chirp, config.similarity.grid);
  return config;
}

std::vector<std::optional<std::ptrdiff_t>> MethodStats::deviations() const {
  std::vector<std::optional<std::ptrdiff_t>> out;
  out.reserve(trials.size());
  for (const auto& t : trials) out.push_back(t.deviation);
  return out;
}

const MethodStats& TrialStats::of(const Method& m) const {
  for (const auto& s : methods)
    if (s.method == m) return s;
  throw Error(Errc::invalid_parameter, "experiment: method " + m.name() + " was not run");
}

double success_rate(std::span<const std::ptrdiff_t> estimates, std::ptrdiff_t true_delay) {
  if (estimates.empty()) throw Error(Errc::invalid_parameter, "success_rate: no estimates");
  const auto hits = std::count(estimates.begin(), estimates.end(), true_delay);
  return 100.0 * static_cast<double>(hits) / static_cast<double>(estimates.size());
}

double success_rate(std::span<const std::optional<std::ptrdiff_t>> estimates,
                    std::ptrdiff_t true_delay) {
  if (estimates.empty()) throw Error(Errc::invalid_parameter, "success_rate: no estimates");
  const auto hits = std::count_if(estimates.begin(), estimates.end(),
                                  [&](const auto& e) { return e && *e == true_delay; });
  return 100.0 * static_cast<double>(hits) / static_cast<double>(estimates.size());
}

double mse(std::span<const std::ptrdiff_t> estimates, std::ptrdiff_t true_delay) {
  if (estimates.size() < 2) throw Error(Errc::invalid_parameter, "mse: need at least 2 estimates");
  double acc = 0.0;
  for (auto c : estimates) {
    const auto dev = static_cast<double>(true_delay - c);
    acc += dev * dev;
  }
  return std::sqrt(acc / static_cast<double>(estimates.size() - 1));
}

TrialStats run_trials(const ExperimentConfig& config, std::size_t snr_index) {
  config.validate();
  if (snr_index >= config.snr_db_list.size())
    throw Error(Errc::invalid_parameter, "run_trials: SNR index out of range");

  const double snr = config.snr_db_list[snr_index];
  const auto true_delay = static_cast<std::ptrdiff_t>(config.chirp.delay_samples);

  TrialStats out;
  out.snr_db = snr;
  out.snr_index = snr_index;
  for (const Method& m : config.methods) {
    MethodStats stats;
    stats.method = m;
    stats.trials.resize(config.n_trials);
    out.methods.push_back(std::move(stats));
  }

  auto run_one = [&](std::size_t trial) {
    NoiseSpec n1, n2;
    if (std::isfinite(snr)) {
      n1.snr_db = snr;
      n2.snr_db = snr;
    }
    n1.reference = n2.reference = config.snr_reference;
    n1.seed = derive_seed(config.master_seed, {snr_index, trial, 1});
    n2.seed = derive_seed(config.master_seed, {snr_index, trial, 2});

    std::optional<std::pair<Signal, Signal>> pair;
    std::string pair_error;
    try {
      pair.emplace(generate_chirp_pair(config.chirp, n1, n2));
    } catch (const std::exception& e) {
      pair_error = e.what();
    }

    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      TrialRecord& rec = out.methods[mi].trials[trial];
      rec.trial = trial;
      if (!pair) {
        rec.error = pair_error;
        continue;
      }
      try {
        const Estimate e = run_method(config.methods[mi], pair->first, pair->second, config);
        rec.coefficient = e.coefficient;
        rec.delay_samples = e.delay;
        rec.deviation = true_delay - e.delay;
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
    }
  };

  std::size_t workers = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  workers = std::clamp<std::size_t>(workers, 1, config.n_trials);
  if (workers == 1) {
    for (std::size_t t = 0; t < config.n_trials; ++t) run_one(t);
  } else {
    // Each trial writes only its own slots, so results do not depend on scheduling.
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < config.n_trials; t = next++) run_one(t);
      });
    }
  }

  for (auto& stats : out.methods) aggregate(stats, true_delay);
  return out;
}

SweepResult snr_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepResult result;
  for (std::size_t i = 0; i < config.snr_db_list.size(); ++i)
    result.per_snr.push_back(run_trials(config, i));

  // Walk from high to low SNR.
  std::vector<std::size_t> order(result.per_snr.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.per_snr[a].snr_db > result.per_snr[b].snr_db;
  });

  for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
    MonotonicityReport rep;
    rep.method = config.methods[mi];
    for (std::size_t j = 1; j < order.size(); ++j) {
      const auto& prev = result.per_snr[order[j - 1]].methods[mi];
      const auto& cur = result.per_snr[order[j]].methods[mi];
      const double sr_rise = cur.success_rate_pct - prev.success_rate_pct;
      if (sr_rise > 0.0) {
        ++rep.sr_inversions;
        rep.max_sr_rise = std::max(rep.max_sr_rise, sr_rise);
      }
      const double coef_rise = cur.mean_coefficient - prev.mean_coefficient;
      if (coef_rise > 0.0) {
        ++rep.coefficient_inversions;
        rep.max_coefficient_rise = std::max(rep.max_coefficient_rise, coef_rise);
      }
    }
    result.diagnostics.monotonicity.push_back(rep);
  }

  const Method sim{MethodKind::similarity}, pear{MethodKind::pearson};
  const bool has_both =
      std::find(config.methods.begin(), config.methods.end(), sim) != config.methods.end() &&
      std::find(config.methods.begin(), config.methods.end(), pear) != config.methods.end();
  if (has_both) {
    for (const auto& ts : result.per_snr)
      result.diagnostics.similarity_above_pearson.push_back(
          ts.of(sim).mean_coefficient >= ts.of(pear).mean_coefficient);
  }
  return result;
}

}  // namespace tfs
