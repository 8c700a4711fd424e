#include "tfs/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "tfs/error.hpp"

namespace tfs::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_with(double v, std::optional<int> precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = precision
                       ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general,
                                       *precision)
                       : std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double round6(double v) {
  if (!std::isfinite(v)) return v;
  const std::string s = format_short(v);
  double out = v;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

// JSON has no infinity/NaN; those become strings.
ordered_json number_or_string(double v) {
  if (std::isfinite(v)) return round6(v);
  return format_short(v);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(Errc::schema, "expected a number for " + std::string(what) + ", got '" +
                                  std::string(s) + "'");
  return v;
}

double snr_from_json(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "none") return std::numeric_limits<double>::infinity();
  }
  throw Error(Errc::schema, "config: snr_db entries must be numbers or \"inf\"");
}

template <typename T>
T get_as(const json& obj, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::schema, std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                    std::string_view where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || k == key;
    if (!ok)
      throw Error(Errc::schema,
                  "config: unknown key '" + key + "' in " + std::string(where));
  }
}

}  // namespace

std::string format_short(double v) { return format_with(v, 6); }
std::string format_full(double v) { return format_with(v, std::nullopt); }

std::string signal_to_csv(const Signal& signal) {
  std::string out = "# sample_rate_hz=" + format_full(signal.sample_rate_hz()) + "\nindex,value\n";
  for (std::size_t i = 0; i < signal.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_full(signal[i]);
    out += '\n';
  }
  return out;
}

Signal signal_from_csv(std::string_view text) {
  std::optional<double> fs;
  std::vector<double> values;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "sample_rate_hz=";
      const auto pos = line.find(key);
      if (pos != std::string_view::npos)
        fs = parse_double(line.substr(pos + key.size()), "sample_rate_hz");
      continue;
    }
    if (!header_seen && line == "index,value") {
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos)
      throw Error(Errc::schema, "signal csv line " + std::to_string(line_no) +
                                    ": expected 'index,value'");
    const double index = parse_double(line.substr(0, comma), "index");
    if (index != static_cast<double>(values.size()))
      throw Error(Errc::schema, "signal csv line " + std::to_string(line_no) +
                                    ": indices must run 0,1,2,...");
    values.push_back(parse_double(line.substr(comma + 1), "value"));
  }
  if (!fs) throw Error(Errc::schema, "signal csv: missing '# sample_rate_hz=' header");
  try {
    return Signal(std::move(values), *fs);
  } catch (const Error& e) {
    throw Error(Errc::schema, std::string("signal csv: ") + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

void write_signal(const std::filesystem::path& path, const Signal& signal) {
  write_text(path, signal_to_csv(signal));
}

Signal read_signal(const std::filesystem::path& path) {
  try {
    return signal_from_csv(read_text(path));
  } catch (const Error& e) {
    if (e.code() == Errc::schema) throw Error(Errc::schema, path.string() + ": " + e.what());
    throw;
  }
}

std::string curve_to_csv(const SimilarityCurve& curve) {
  std::string out = "shift_samples,rho\n";
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    out += std::to_string(curve.shifts[i]);
    out += ',';
    out += format_short(curve.values[i]);
    out += '\n';
  }
  return out;
}

std::string analysis_to_json(const AnalysisResult& result, const SimilarityConfig& config,
                             double sample_rate_hz) {
  ordered_json j;
  j["coefficient"] = number_or_string(result.similarity.coefficient);
  j["delay_samples"] = result.similarity.delay_samples;
  j["delay_seconds"] = number_or_string(result.similarity.delay_seconds);
  j["sample_rate_hz"] = number_or_string(sample_rate_hz);
  j["sigma"] = config.window.sigma;
  j["freq_min_hz"] = config.grid.min_hz();
  j["freq_max_hz"] = config.grid.max_hz();
  j["freq_count"] = config.grid.size();
  if (const auto* a = std::get_if<AutoRegion>(&config.region)) {
    j["region_policy"] = "auto";
    j["energy_fraction"] = a->energy_fraction;
  } else {
    j["region_policy"] = "explicit";
  }
  j["region_t_begin"] = result.region.t_begin;
  j["region_t_end"] = result.region.t_end;
  j["region_f_begin"] = result.region.f_begin;
  j["region_f_end"] = result.region.f_end;
  j["shift_min"] = result.shifts.lo;
  j["shift_max"] = result.shifts.hi;
  return j.dump(2) + "\n";
}

void write_spectrum(const std::filesystem::path& stem, const Spectrum& spectrum) {
  std::string csv = "freq_index,time_index,re,im\n";
  const auto& v = spectrum.values();
  for (std::size_t k = 0; k < v.rows(); ++k) {
    auto row = v.row(k);
    for (std::size_t m = 0; m < v.cols(); ++m) {
      csv += std::to_string(k) + ',' + std::to_string(m) + ',' + format_full(row[m].real()) + ',' +
             format_full(row[m].imag()) + '\n';
    }
  }
  auto csv_path = stem;
  csv_path += ".csv";
  write_text(csv_path, csv);

  ordered_json j;
  j["layout"] = "freq_index,time_index,re,im; row-major, rows = frequencies";
  j["transform"] = "nmwt";
  j["sigma"] = spectrum.window().sigma;
  j["sample_rate_hz"] = spectrum.sample_rate_hz();
  j["n_freq"] = spectrum.n_freq();
  j["n_time"] = spectrum.n_time();
  j["tau_step_s"] = 1.0 / spectrum.sample_rate_hz();
  j["freqs_hz"] = std::vector<double>(spectrum.grid().hz().begin(), spectrum.grid().hz().end());
  auto json_path = stem;
  json_path += ".json";
  write_text(json_path, j.dump(2) + "\n");
}

std::string trials_to_csv(const std::vector<TrialStats>& stats) {
  std::string out = "snr_db,method,trial,coefficient,delay_samples,deviation\n";
  for (const auto& ts : stats) {
    const std::string snr = format_full(ts.snr_db);
    for (const auto& ms : ts.methods) {
      const std::string name = ms.method.name();
      for (const auto& t : ms.trials) {
        out += snr + ',' + name + ',' + std::to_string(t.trial) + ',';
        if (t.error.empty() && t.coefficient && t.delay_samples && t.deviation) {
          out += format_full(*t.coefficient) + ',' + std::to_string(*t.delay_samples) + ',' +
                 std::to_string(*t.deviation);
        } else {
          out += "nan,nan,nan";
        }
        out += '\n';
      }
    }
  }
  return out;
}

std::string aggregate_to_csv(const std::vector<TrialStats>& stats) {
  std::string out = "snr_db,method,success_rate_pct,mse,mean_coefficient\n";
  for (const auto& ts : stats) {
    for (const auto& ms : ts.methods) {
      out += format_short(ts.snr_db) + ',' + ms.method.name() + ',' +
             format_short(ms.success_rate_pct) + ',' + format_short(ms.mse) + ',' +
             format_short(ms.mean_coefficient) + '\n';
    }
  }
  return out;
}

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["chirp"] = {{"chirp_rate_hz", c.chirp.chirp_rate_hz},
                {"delay_samples", c.chirp.delay_samples},
                {"length_samples", c.chirp.length_samples},
                {"sample_rate_hz", c.chirp.sample_rate_hz}};
  auto snrs = ordered_json::array();
  for (double s : c.snr_db_list) snrs.push_back(std::isfinite(s) ? ordered_json(s) : ordered_json("inf"));
  j["snr_db"] = snrs;
  j["n_trials"] = c.n_trials;
  j["master_seed"] = c.master_seed;
  auto methods = ordered_json::array();
  for (const auto& m : c.methods) methods.push_back(m.name());
  j["methods"] = methods;
  j["snr_reference"] = c.snr_reference == SnrReference::peak ? "peak" : "mean_square";

  ordered_json sim;
  sim["sigma"] = c.similarity.window.sigma;
  sim["freqs_hz"] = std::vector<double>(c.similarity.grid.hz().begin(), c.similarity.grid.hz().end());
  if (const auto* a = std::get_if<AutoRegion>(&c.similarity.region)) {
    sim["region"] = {{"energy_fraction", a->energy_fraction}};
  } else {
    const auto& r = std::get<Region>(c.similarity.region);
    sim["region"] = {{"t_begin", r.t_begin}, {"t_end", r.t_end}, {"f_begin", r.f_begin},
                     {"f_end", r.f_end}};
  }
  if (c.similarity.shifts)
    sim["shifts"] = {{"lo", c.similarity.shifts->lo}, {"hi", c.similarity.shifts->hi}};
  else
    sim["shifts"] = "auto";
  j["similarity"] = sim;
  j["max_lag"] = c.resolved_max_lag();
  j["gcc_smoothing_bins"] = c.gcc.smoothing_bins;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(std::string_view text, ExperimentConfig c) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::schema, std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::schema, "config: top level must be an object");
  reject_unknown(j,
                 {"chirp", "snr_db", "n_trials", "master_seed", "methods", "snr_reference",
                  "similarity", "max_lag", "gcc_smoothing_bins", "threads"},
                 "top level");

  if (j.contains("chirp")) {
    const auto& ch = j["chirp"];
    reject_unknown(ch, {"chirp_rate_hz", "delay_samples", "length_samples", "sample_rate_hz"},
                   "chirp");
    if (ch.contains("chirp_rate_hz")) c.chirp.chirp_rate_hz = get_as<double>(ch, "chirp_rate_hz");
    if (ch.contains("delay_samples")) c.chirp.delay_samples = get_as<std::size_t>(ch, "delay_samples");
    if (ch.contains("length_samples"))
      c.chirp.length_samples = get_as<std::size_t>(ch, "length_samples");
    if (ch.contains("sample_rate_hz")) c.chirp.sample_rate_hz = get_as<double>(ch, "sample_rate_hz");
  }
  if (j.contains("snr_db")) {
    if (!j["snr_db"].is_array()) throw Error(Errc::schema, "config: snr_db must be an array");
    c.snr_db_list.clear();
    for (const auto& v : j["snr_db"]) c.snr_db_list.push_back(snr_from_json(v));
  }
  if (j.contains("n_trials")) c.n_trials = get_as<std::size_t>(j, "n_trials");
  if (j.contains("master_seed")) c.master_seed = get_as<std::uint64_t>(j, "master_seed");
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& name : get_as<std::vector<std::string>>(j, "methods")) {
      auto m = Method::parse(name);
      if (!m) throw Error(Errc::schema, "config: unknown method '" + name + "'");
      c.methods.push_back(*m);
    }
  }
  if (j.contains("snr_reference")) {
    const auto s = get_as<std::string>(j, "snr_reference");
    if (s == "peak") c.snr_reference = SnrReference::peak;
    else if (s == "mean_square") c.snr_reference = SnrReference::mean_square;
    else throw Error(Errc::schema, "config: snr_reference must be 'peak' or 'mean_square'");
  }
  if (j.contains("similarity")) {
    const auto& s = j["similarity"];
    reject_unknown(s, {"sigma", "freqs_hz", "grid", "region", "shifts"}, "similarity");
    if (s.contains("sigma")) c.similarity.window.sigma = get_as<double>(s, "sigma");
    try {
      if (s.contains("freqs_hz"))
        c.similarity.grid = FrequencyGrid(get_as<std::vector<double>>(s, "freqs_hz"));
      if (s.contains("grid")) {
        const auto& g = s["grid"];
        c.similarity.grid = FrequencyGrid::linear(get_as<double>(g, "min_hz"),
                                                  get_as<double>(g, "max_hz"),
                                                  get_as<double>(g, "step_hz"));
      }
    } catch (const Error& e) {
      throw Error(Errc::schema, std::string("config: ") + e.what());
    }
    if (s.contains("region")) {
      const auto& r = s["region"];
      if (r.contains("energy_fraction")) {
        c.similarity.region = AutoRegion{get_as<double>(r, "energy_fraction")};
      } else {
        c.similarity.region =
            Region{get_as<std::size_t>(r, "t_begin"), get_as<std::size_t>(r, "t_end"),
                   get_as<std::size_t>(r, "f_begin"), get_as<std::size_t>(r, "f_end")};
      }
    }
    if (s.contains("shifts")) {
      const auto& sh = s["shifts"];
      if (sh.is_string() && sh.get<std::string>() == "auto")
        c.similarity.shifts.reset();
      else
        c.similarity.shifts =
            ShiftRange{get_as<std::ptrdiff_t>(sh, "lo"), get_as<std::ptrdiff_t>(sh, "hi")};
    }
  }
  if (j.contains("max_lag")) c.max_lag = get_as<std::size_t>(j, "max_lag");
  if (j.contains("gcc_smoothing_bins"))
    c.gcc.smoothing_bins = get_as<std::size_t>(j, "gcc_smoothing_bins");
  if (j.contains("threads")) c.threads = get_as<std::size_t>(j, "threads");
  return c;
}

}  // namespace tfs::io
