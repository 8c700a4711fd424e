#include "tfsim/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tfs/error.hpp"
#include "tfs/experiments.hpp"
#include "tfs/io.hpp"
#include "tfs/similarity.hpp"

namespace tfsim {

namespace fs = std::filesystem;

namespace {

// Flags shared by analyze/sweep/reproduce for the similarity pipeline.
struct SimilarityFlags {
  std::optional<double> sigma;
  std::optional<double> fmin, fmax, fstep;
  std::string region;  // "t_begin,t_end,f_begin,f_end"
  std::optional<double> energy_fraction;
  std::optional<long> shift_min, shift_max;

  void add_to(CLI::App& app) {
    app.add_option("--sigma", sigma, "Gaussian window width sigma (> 0)");
    app.add_option("--fmin", fmin, "Lowest analysis frequency, Hz");
    app.add_option("--fmax", fmax, "Highest analysis frequency, Hz (below Nyquist)");
    app.add_option("--fstep", fstep, "Analysis frequency step, Hz");
    app.add_option("--region", region,
                   "Explicit interest region t_begin,t_end,f_begin,f_end (samples, rows)");
    app.add_option("--energy-fraction", energy_fraction,
                   "Automatic region energy fraction in (0, 1]");
    app.add_option("--shift-min", shift_min, "Smallest shift searched, samples");
    app.add_option("--shift-max", shift_max, "Largest shift searched, samples");
  }

  bool region_given() const { return !region.empty() || energy_fraction.has_value(); }
  bool grid_given() const { return fmin || fmax || fstep; }

  void apply(tfs::SimilarityConfig& c) const {
    if (sigma) c.window.sigma = *sigma;
    if (grid_given()) {
      const double lo = fmin.value_or(c.grid.min_hz());
      const double hi = fmax.value_or(c.grid.max_hz());
      const double step =
          fstep.value_or(c.grid.size() > 1 ? c.grid[1] - c.grid[0] : 1.0);
      c.grid = tfs::FrequencyGrid::linear(lo, hi, step);
    }
    if (!region.empty() && energy_fraction)
      throw tfs::Error(tfs::Errc::invalid_parameter,
                       "--region and --energy-fraction are mutually exclusive");
    if (!region.empty()) c.region = parse_region(region);
    if (energy_fraction) c.region = tfs::AutoRegion{*energy_fraction};
    if (shift_min.has_value() != shift_max.has_value())
      throw tfs::Error(tfs::Errc::invalid_parameter,
                       "--shift-min and --shift-max must be given together");
    if (shift_min) c.shifts = tfs::ShiftRange{*shift_min, *shift_max};
  }

  static tfs::Region parse_region(const std::string& text) {
    std::vector<std::size_t> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        const auto x = std::stoull(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        v.push_back(static_cast<std::size_t>(x));
      } catch (const std::exception&) {
        throw tfs::Error(tfs::Errc::invalid_parameter, "--region: bad integer '" + item + "'");
      }
    }
    if (v.size() != 4)
      throw tfs::Error(tfs::Errc::invalid_parameter,
                       "--region expects t_begin,t_end,f_begin,f_end");
    return {v[0], v[1], v[2], v[3]};
  }
};

struct ChirpFlags {
  std::optional<double> rate, fs;
  std::optional<std::size_t> delay, length;

  void add_to(CLI::App& app) {
    app.add_option("--chirp-rate", rate, "Chirp rate parameter, Hz");
    app.add_option("--delay", delay, "True delay between the two pulses, samples");
    app.add_option("--length", length, "Pulse length, samples");
    app.add_option("--fs", fs, "Sample rate, Hz");
  }
  bool any() const { return rate || fs || delay || length; }
  void apply(tfs::ChirpSpec& c) const {
    if (rate) c.chirp_rate_hz = *rate;
    if (delay) c.delay_samples = *delay;
    if (length) c.length_samples = *length;
    if (fs) c.sample_rate_hz = *fs;
  }
};

std::optional<tfs::SnrReference> parse_reference(const std::string& s) {
  if (s == "peak") return tfs::SnrReference::peak;
  if (s == "mean_square") return tfs::SnrReference::mean_square;
  return std::nullopt;
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p))
    throw tfs::Error(tfs::Errc::io, "--out-dir '" + p.string() + "' is not a usable directory");
  const fs::path probe = p / ".tfsim_write_probe";
  tfs::io::write_text(probe, "");
  fs::remove(probe, ec);
  return p;
}

void require_readable(const std::string& flag, const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec))
    throw tfs::Error(tfs::Errc::io, flag + ": cannot read '" + path + "'");
}

void print_aggregate(std::ostream& out, const std::vector<tfs::TrialStats>& stats) {
  out << tfs::io::aggregate_to_csv(stats);
}

// Options shared by `sweep` and `reproduce`.
struct ExperimentFlags {
  std::string config_path;
  ChirpFlags chirp;
  SimilarityFlags similarity;
  std::vector<std::string> snr;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> methods;
  std::optional<std::size_t> max_lag;
  std::string snr_reference;
  std::optional<std::size_t> gcc_smoothing;
  std::optional<std::size_t> threads;
  std::string out_dir = ".";

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "JSON configuration file; flags override it");
    chirp.add_to(app);
    similarity.add_to(app);
    app.add_option("--snr", snr, "SNR list in dB (comma separated; 'inf' for noise-free)")
        ->delimiter(',');
    app.add_option("--trials", trials, "Monte-Carlo trials per SNR");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--methods", methods,
                   "Methods: similarity, pearson, cc, gcc:{none,roth,scot,phat,ml}")
        ->delimiter(',');
    app.add_option("--max-lag", max_lag, "Baseline lag search half-width, samples");
    app.add_option("--snr-reference", snr_reference, "SNR reference power: peak | mean_square");
    app.add_option("--gcc-smoothing", gcc_smoothing, "GCC spectral smoothing half-width, bins");
    app.add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it");
    app.add_option("--out-dir", out_dir, "Output directory");
  }

  // Resolves the effective configuration: base <- config file <- flags.
  tfs::ExperimentConfig resolve(tfs::ExperimentConfig config, bool ridge_default) const {
    bool region_from_file = false;
    if (!config_path.empty()) {
      const std::string text = tfs::io::read_text(config_path);
      try {
        config = tfs::io::config_from_json(text, config);
      } catch (const tfs::Error& e) {
        throw tfs::Error(e.code(), config_path + ": " + e.what());
      }
      region_from_file = text.find("\"region\"") != std::string::npos;
    }
    chirp.apply(config.chirp);
    similarity.apply(config.similarity);
    if (!snr.empty()) {
      config.snr_db_list.clear();
      for (const auto& s : snr) {
        if (s == "inf" || s == "none") {
          config.snr_db_list.push_back(std::numeric_limits<double>::infinity());
          continue;
        }
        try {
          std::size_t used = 0;
          config.snr_db_list.push_back(std::stod(s, &used));
          if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
          throw tfs::Error(tfs::Errc::invalid_parameter, "--snr: bad value '" + s + "'");
        }
      }
    }
    if (trials) config.n_trials = *trials;
    if (seed) config.master_seed = *seed;
    if (!methods.empty()) {
      config.methods.clear();
      for (const auto& name : methods) {
        auto m = tfs::Method::parse(name);
        if (!m) throw tfs::Error(tfs::Errc::invalid_parameter, "--methods: unknown method '" + name + "'");
        config.methods.push_back(*m);
      }
    }
    if (max_lag) config.max_lag = *max_lag;
    if (!snr_reference.empty()) {
      auto r = parse_reference(snr_reference);
      if (!r)
        throw tfs::Error(tfs::Errc::invalid_parameter,
                         "--snr-reference must be 'peak' or 'mean_square'");
      config.snr_reference = *r;
    }
    if (gcc_smoothing) config.gcc.smoothing_bins = *gcc_smoothing;
    if (threads) config.threads = *threads;
    // The ridge region follows the pulse and grid unless a region was chosen.
    if (ridge_default && !similarity.region_given() && !region_from_file &&
        (chirp.any() || similarity.grid_given()))
      config.similarity.region = tfs::ridge_region(config.chirp, config.similarity.grid);
    config.validate();
    return config;
  }
};

int run_experiment(const ExperimentFlags& flags, tfs::ExperimentConfig base, bool ridge_default,
                   std::ostream& out) {
  const tfs::ExperimentConfig config = flags.resolve(std::move(base), ridge_default);
  const fs::path dir = prepare_out_dir(flags.out_dir);
  const tfs::SweepResult result = tfs::snr_sweep(config);
  tfs::io::write_text(dir / "config.json", tfs::io::config_to_json(config));
  tfs::io::write_text(dir / "trials.csv", tfs::io::trials_to_csv(result.per_snr));
  tfs::io::write_text(dir / "aggregate.csv", tfs::io::aggregate_to_csv(result.per_snr));
  print_aggregate(out, result.per_snr);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tfsim: time-frequency similarity analysis and delay estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tfsim 0.1.0");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Write a chirp pulse pair as two signal CSVs");
  ChirpFlags sim_chirp;
  sim_chirp.add_to(*simulate);
  std::optional<double> sim_snr;
  std::uint64_t sim_seed = 42;
  std::string sim_reference = "peak";
  std::string sim_out = ".";
  std::string sim_prefix = "pulse";
  simulate->add_option("--snr", sim_snr, "SNR in dB (omit for noise-free)");
  simulate->add_option("--seed", sim_seed, "Master seed");
  simulate->add_option("--snr-reference", sim_reference, "SNR reference power: peak | mean_square");
  simulate->add_option("--out-dir", sim_out, "Output directory");
  simulate->add_option("--prefix", sim_prefix, "File prefix: <prefix>_f1.csv, <prefix>_f2.csv");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Similarity analysis of two signal CSVs");
  std::string in1, in2, an_out = ".";
  bool dump_spectra = false;
  SimilarityFlags an_sim;
  analyze->add_option("--in1", in1, "First signal CSV")->required();
  analyze->add_option("--in2", in2, "Second signal CSV")->required();
  an_sim.add_to(*analyze);
  analyze->add_option("--out-dir", an_out, "Output directory");
  analyze->add_flag("--dump-spectra", dump_spectra, "Also write both spectra (CSV + JSON sidecar)");

  // sweep / reproduce
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo SNR sweep over the configured methods");
  ExperimentFlags sweep_flags;
  sweep_flags.add_to(*sweep);
  auto* reproduce =
      app.add_subcommand("reproduce", "Run the reference pulse-pair experiment end to end");
  ExperimentFlags repro_flags;
  repro_flags.add_to(*reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << "tfsim 0.1.0\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "tfsim: error: " << msg << '\n';
    return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
  }

  try {
    if (simulate->parsed()) {
      tfs::ChirpSpec spec;
      sim_chirp.apply(spec);
      spec.validate();
      const auto reference = parse_reference(sim_reference);
      if (!reference)
        throw tfs::Error(tfs::Errc::invalid_parameter,
                         "--snr-reference must be 'peak' or 'mean_square'");
      const fs::path dir = prepare_out_dir(sim_out);
      tfs::NoiseSpec n1, n2;
      n1.snr_db = n2.snr_db = sim_snr;
      n1.reference = n2.reference = *reference;
      // Same derivation as trial 0 of the first SNR in an experiment.
      n1.seed = tfs::derive_seed(sim_seed, {0, 0, 1});
      n2.seed = tfs::derive_seed(sim_seed, {0, 0, 2});
      const auto [f1, f2] = tfs::generate_chirp_pair(spec, n1, n2);
      tfs::io::write_signal(dir / (sim_prefix + "_f1.csv"), f1);
      tfs::io::write_signal(dir / (sim_prefix + "_f2.csv"), f2);
      out << "wrote " << (dir / (sim_prefix + "_f1.csv")).string() << " and "
          << (dir / (sim_prefix + "_f2.csv")).string() << '\n';
      return 0;
    }

    if (analyze->parsed()) {
      require_readable("--in1", in1);
      require_readable("--in2", in2);
      tfs::SimilarityConfig config;
      an_sim.apply(config);
      const fs::path dir = prepare_out_dir(an_out);
      const tfs::Signal f1 = tfs::io::read_signal(in1);
      const tfs::Signal f2 = tfs::io::read_signal(in2);
      const tfs::AnalysisResult result = tfs::similarity_analyze(f1, f2, config);
      tfs::io::write_text(dir / "result.json",
                          tfs::io::analysis_to_json(result, config, f1.sample_rate_hz()));
      tfs::io::write_text(dir / "curve.csv", tfs::io::curve_to_csv(result.similarity.curve));
      if (dump_spectra) {
        tfs::io::write_spectrum(dir / "spectrum_f1", tfs::nmwt(f1, config.grid, config.window));
        tfs::io::write_spectrum(dir / "spectrum_f2", tfs::nmwt(f2, config.grid, config.window));
      }
      out << "coefficient " << tfs::io::format_short(result.similarity.coefficient)
          << " delay_samples " << result.similarity.delay_samples << " delay_seconds "
          << tfs::io::format_short(result.similarity.delay_seconds) << '\n';
      return 0;
    }

    if (sweep->parsed()) return run_experiment(sweep_flags, tfs::ExperimentConfig{}, false, out);
    if (reproduce->parsed())
      return run_experiment(repro_flags, tfs::reproduction_config(), true, out);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "tfsim: error: " << msg << '\n';
    return 1;
  }
  return 1;
}

}  // namespace tfsim
