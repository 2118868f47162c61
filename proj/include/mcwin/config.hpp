#pragma once

// Experiment configuration as flat "key = value" text.
//
// Lines starting with '#' are comments. Lengths may be given in metres
// (distance, radius) or micrometres (distance_um, radius_um); everything is
// stored in SI. Passive sampling comes from sample_rule unless samples and
// sample_interval are given explicitly. emit_config() writes every field, so
// parse(emit(c)) == c.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mcwin/csv.hpp"
#include "mcwin/error.hpp"
#include "mcwin/experiment.hpp"
#include "mcwin/montecarlo.hpp"
#include "mcwin/params.hpp"

namespace mcwin {

constexpr std::string_view to_string(SampleIntervalRule r) noexcept {
  switch (r) {
    case SampleIntervalRule::PeakOverSix: return "peak_over_six";
    case SampleIntervalRule::FlooredSeconds: return "floored_seconds";
    case SampleIntervalRule::FlooredMilliseconds: return "floored_milliseconds";
  }
  return "?";
}

inline SampleIntervalRule parse_sample_rule(std::string_view s) {
  for (auto r : {SampleIntervalRule::PeakOverSix, SampleIntervalRule::FlooredSeconds,
                 SampleIntervalRule::FlooredMilliseconds}) {
    if (to_string(r) == s) return r;
  }
  throw Error(ErrorCode::Config, "unknown sample_rule '" + std::string(s) + "'");
}

struct ExperimentConfig {
  SystemParams system;
  SampleIntervalRule sample_rule = SampleIntervalRule::PeakOverSix;
  std::vector<std::int64_t> q_values;
  std::vector<Scheme> schemes;
  SweepOptions sweep;
  int metrics_grid_steps = 20;
  std::string output;

  bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

inline double to_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const std::string s(v);
    const double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::Config, "key '" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
  Int x{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw Error(ErrorCode::Config, "key '" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
  }
  return x;
}

inline bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::Config, "key '" + std::string(key) + "' expects true/false, got '" + std::string(v) + "'");
}

}  // namespace detail

/// Accumulates key/value assignments, then builds a validated ExperimentConfig.
class ConfigBuilder {
 public:
  void set(std::string_view key, std::string_view value) { values_[std::string(key)] = std::string(value); }

  /// "key=value" as given on the command line.
  void set_assignment(std::string_view kv) {
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::Config, "override '" + std::string(kv) + "' lacks '='");
    set(detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
  }

  void parse_text(std::string_view text, std::string_view origin = "<config>") {
    std::size_t line_no = 0;
    while (!text.empty()) {
      const auto nl = text.find('\n');
      const std::string_view line = detail::trim(text.substr(0, nl));
      ++line_no;
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorCode::Config, std::string(origin) + ":" + std::to_string(line_no) + ": expected key = value");
      }
      set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
  }

  void parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    parse_text(ss.str(), path);
  }

  ExperimentConfig build() const {
    ExperimentConfig c;
    std::map<std::string, std::string> v = values_;
    auto take = [&](const std::string& key) -> std::optional<std::string> {
      auto it = v.find(key);
      if (it == v.end()) return std::nullopt;
      std::string s = it->second;
      v.erase(it);
      return s;
    };
    auto length = [&](const std::string& key) -> std::optional<double> {
      auto si = take(key);
      auto um = take(key + "_um");
      if (si && um) throw Error(ErrorCode::Config, "give either '" + key + "' or '" + key + "_um', not both");
      if (si) return detail::to_double(key, *si);
      if (um) return detail::to_double(key + "_um", *um) * 1e-6;
      return std::nullopt;
    };

    SystemParams& p = c.system;
    if (auto s = take("receiver")) {
      if (*s == "absorbing") p.receiver = Receiver::Absorbing;
      else if (*s == "passive") p.receiver = Receiver::Passive;
      else throw Error(ErrorCode::Config, "receiver must be absorbing or passive, got '" + *s + "'");
    }
    const bool passive = p.receiver == Receiver::Passive;
    p.distance = length("distance").value_or(passive ? 9e-6 : 5e-6);
    p.radius = length("radius").value_or(passive ? 1e-6 : 5e-6);
    if (auto s = take("diffusion")) p.diffusion = detail::to_double("diffusion", *s);
    else p.diffusion = 80e-12;
    if (auto s = take("symbol_time")) p.symbol_time = detail::to_double("symbol_time", *s);
    else throw Error(ErrorCode::Config, "missing key 'symbol_time'");
    if (auto s = take("isi_length")) p.isi_length = detail::to_int<int>("isi_length", *s);
    else throw Error(ErrorCode::Config, "missing key 'isi_length'");
    if (auto s = take("molecules")) p.molecules = detail::to_int<std::int64_t>("molecules", *s);
    else p.molecules = 1000;
    if (auto s = take("sample_rule")) c.sample_rule = parse_sample_rule(*s);
    auto samples = take("samples");
    auto interval = take("sample_interval");
    if (passive) {
      p.sample_interval = interval ? detail::to_double("sample_interval", *interval)
                                   : sample_interval_for(passive_peak_time(p), c.sample_rule);
      if (samples) p.samples = detail::to_int<int>("samples", *samples);
      else if (p.sample_interval > 0.0) {
        p.samples = static_cast<int>(std::floor(p.symbol_time / p.sample_interval * (1.0 + 1e-12)));
      }
    } else if (samples || interval) {
      throw Error(ErrorCode::Config, "samples/sample_interval apply to the passive receiver only");
    }

    if (auto s = take("q_values")) {
      for (auto item : detail::split_list(*s)) c.q_values.push_back(detail::to_int<std::int64_t>("q_values", item));
    }
    if (auto s = take("schemes")) {
      for (auto item : detail::split_list(*s)) c.schemes.push_back(parse_scheme(item));
    }
    TrialConfig& t = c.sweep.trial;
    if (auto s = take("trials")) t.trials = detail::to_int<std::int64_t>("trials", *s);
    if (auto s = take("seed")) t.seed = detail::to_int<std::uint64_t>("seed", *s);
    if (auto s = take("exact_counts")) t.exact_counts = detail::to_bool("exact_counts", *s);
    if (auto s = take("warmup_symbols")) t.warmup_symbols = detail::to_int<int>("warmup_symbols", *s);
    if (auto s = take("block_size")) t.block_size = detail::to_int<std::int64_t>("block_size", *s);
    if (auto s = take("workers")) t.workers = detail::to_int<int>("workers", *s);
    if (auto s = take("simulate")) c.sweep.simulate = detail::to_bool("simulate", *s);
    if (auto s = take("metric_grid_steps")) c.sweep.metric_grid_steps = detail::to_int<int>("metric_grid_steps", *s);
    if (auto s = take("ber_grid_steps")) c.sweep.ber_grid_steps = detail::to_int<int>("ber_grid_steps", *s);
    if (auto s = take("tau_steps")) c.sweep.tau_steps = detail::to_int<int>("tau_steps", *s);
    if (auto s = take("metrics_grid_steps")) c.metrics_grid_steps = detail::to_int<int>("metrics_grid_steps", *s);
    if (auto s = take("output")) c.output = *s;

    if (!v.empty()) throw Error(ErrorCode::Config, "unknown key '" + v.begin()->first + "'");
    if (t.trials < 1) throw Error(ErrorCode::Config, "trials must be >= 1");
    if (t.block_size < 1) throw Error(ErrorCode::Config, "block_size must be >= 1");
    if (c.sweep.metric_grid_steps < 1 || c.sweep.ber_grid_steps < 1 || c.sweep.tau_steps < 1 ||
        c.metrics_grid_steps < 1) {
      throw Error(ErrorCode::Config, "grid step counts must be >= 1");
    }
    for (auto q : c.q_values) {
      if (q < 0) throw Error(ErrorCode::Config, "q_values must be non-negative");
    }
    p.validate();
    return c;
  }

 private:
  std::map<std::string, std::string> values_;
};

inline ExperimentConfig parse_config(std::string_view text) {
  ConfigBuilder b;
  b.parse_text(text);
  return b.build();
}

/// Canonical text of a config; every field is written so parsing it back gives the same config.
inline std::string emit_config(const ExperimentConfig& c) {
  std::ostringstream os;
  const SystemParams& p = c.system;
  auto num = [](double x) { return csv::format_double(x); };
  os << "receiver = " << to_string(p.receiver) << '\n';
  os << "distance = " << num(p.distance) << '\n';
  os << "radius = " << num(p.radius) << '\n';
  os << "diffusion = " << num(p.diffusion) << '\n';
  os << "symbol_time = " << num(p.symbol_time) << '\n';
  os << "isi_length = " << p.isi_length << '\n';
  os << "molecules = " << p.molecules << '\n';
  os << "sample_rule = " << to_string(c.sample_rule) << '\n';
  if (p.receiver == Receiver::Passive) {
    os << "samples = " << p.samples << '\n';
    os << "sample_interval = " << num(p.sample_interval) << '\n';
  }
  if (!c.q_values.empty()) {
    os << "q_values = ";
    for (std::size_t i = 0; i < c.q_values.size(); ++i) os << (i ? "," : "") << c.q_values[i];
    os << '\n';
  }
  if (!c.schemes.empty()) {
    os << "schemes = ";
    for (std::size_t i = 0; i < c.schemes.size(); ++i) os << (i ? "," : "") << to_string(c.schemes[i]);
    os << '\n';
  }
  const TrialConfig& t = c.sweep.trial;
  os << "trials = " << t.trials << '\n';
  os << "seed = " << t.seed << '\n';
  os << "exact_counts = " << (t.exact_counts ? "true" : "false") << '\n';
  os << "warmup_symbols = " << t.warmup_symbols << '\n';
  os << "block_size = " << t.block_size << '\n';
  os << "workers = " << t.workers << '\n';
  os << "simulate = " << (c.sweep.simulate ? "true" : "false") << '\n';
  os << "metric_grid_steps = " << c.sweep.metric_grid_steps << '\n';
  os << "ber_grid_steps = " << c.sweep.ber_grid_steps << '\n';
  os << "tau_steps = " << c.sweep.tau_steps << '\n';
  os << "metrics_grid_steps = " << c.metrics_grid_steps << '\n';
  if (!c.output.empty()) os << "output = " << c.output << '\n';
  return os.str();
}

}  // namespace mcwin
