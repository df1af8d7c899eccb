#include "g2g/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <sstream>

#include "g2g/error.hpp"

namespace g2g {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || value.empty() || !std::isfinite(v)) {
    throw ConfigError("bad number for " + std::string(key) + ": '" + std::string(value) + "'");
  }
  return v;
}

long long to_integer(std::string_view key, std::string_view value) {
  long long v = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || value.empty()) {
    throw ConfigError("bad integer for " + std::string(key) + ": '" + std::string(value) + "'");
  }
  return v;
}

std::vector<double> to_list(std::string_view key, std::string_view value, double scale) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto pos = value.find(',', start);
    if (pos == std::string_view::npos) pos = value.size();
    out.push_back(scale * to_double(key, trim(value.substr(start, pos - start))));
    start = pos + 1;
  }
  return out;
}

constexpr double kMs = 1e-3;

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line_no);
    kv.insert_or_assign(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return kv;
}

KeyValues parse_key_values(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_key_values(in);
}

void apply_overrides(KeyValues& kv, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value: " + o);
    const auto key = trim(std::string_view(o).substr(0, eq));
    if (key.empty()) throw ConfigError("override must be key=value: " + o);
    kv.insert_or_assign(std::string(key), std::string(trim(std::string_view(o).substr(eq + 1))));
  }
}

PipelineModel SimulationConfig::pipeline_for_rate(std::size_t i) const {
  PipelineModel p = pipeline;
  if (i < f_cam_list.size()) p.f_cam = f_cam_list[i];
  if (i < t_min_list.size()) p.t_min = t_min_list[i];
  if (i < t_proc_list.size()) p.t_proc = t_proc_list[i];
  p.exposure_s = exposure_s.value_or(1.0 / p.f_cam);
  return p;
}

SimulationConfig build_config(const KeyValues& kv) {
  SimulationConfig cfg;
  auto& p = cfg.pipeline;
  auto& c = cfg.campaign;
  auto& d = c.detector;

  using Setter = std::function<void(std::string_view, std::string_view)>;
  auto seconds = [](double& field) {
    return Setter([&field](auto k, auto v) { field = kMs * to_double(k, v); });
  };
  auto real = [](double& field) {
    return Setter([&field](auto k, auto v) { field = to_double(k, v); });
  };
  auto level = [](Level& field) {
    return Setter([&field](auto k, auto v) { field = static_cast<Level>(to_integer(k, v)); });
  };
  auto count = [](std::size_t& field) {
    return Setter([&field](auto k, auto v) {
      const auto n = to_integer(k, v);
      if (n < 0) throw ConfigError(std::string(k) + " must be >= 0");
      field = static_cast<std::size_t>(n);
    });
  };

  const std::map<std::string_view, Setter> setters = {
      {"f_cam", real(p.f_cam)},
      {"exposure_s",
       [&](auto k, auto v) { cfg.exposure_s = kMs * to_double(k, v); }},
      {"t_min", seconds(p.t_min)},
      {"t_proc", seconds(p.t_proc)},
      {"proc_jitter_std", seconds(p.proc_jitter_std)},
      {"f_dis", real(p.f_dis)},
      {"cam_phase", seconds(p.cam_phase)},
      {"dis_phase", seconds(p.dis_phase)},
      {"pwm_freq_hz", real(p.pwm_freq_hz)},
      {"pwm_depth_levels", level(p.pwm_depth_levels)},
      {"led_on_level", level(p.led_on_level)},
      {"led_off_level", level(p.led_off_level)},
      {"noise_std_levels", real(p.noise_std_levels)},
      {"sample_rate_hz", real(p.sample_rate_hz)},
      {"adc_bits", [&](auto k, auto v) { p.adc_bits = static_cast<int>(to_integer(k, v)); }},
      {"n_measurements",
       [&](auto k, auto v) { c.n_measurements = static_cast<int>(to_integer(k, v)); }},
      {"interval_mode",
       [&](auto, auto v) {
         if (v == "constant") {
           c.interval_mode = IntervalMode::kConstant;
         } else if (v == "random") {
           c.interval_mode = IntervalMode::kRandom;
         } else {
           throw ConfigError("interval_mode must be constant or random");
         }
       }},
      {"interval_base_s", seconds(c.interval_base_s)},
      {"interval_spread_s", seconds(c.interval_spread_s)},
      {"led_hold_s", seconds(c.led_hold_s)},
      {"seed",
       [&](auto k, auto v) {
         const auto s = to_integer(k, v);
         if (s < 0) throw ConfigError("seed must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"max_filter_len_k", count(d.max_filter_len_k)},
      {"slope_threshold", level(d.slope_threshold)},
      {"slope_window", count(d.slope_window)},
      {"single_step_threshold", level(d.single_step_threshold)},
      {"f_cam_list", [&](auto k, auto v) { cfg.f_cam_list = to_list(k, v, 1.0); }},
      {"t_min_list", [&](auto k, auto v) { cfg.t_min_list = to_list(k, v, kMs); }},
      {"t_proc_list", [&](auto k, auto v) { cfg.t_proc_list = to_list(k, v, kMs); }},
  };

  for (const auto& [key, value] : kv) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key: " + key);
    it->second(key, value);
  }
  p.exposure_s = cfg.exposure_s.value_or(1.0 / p.f_cam);

  if (!cfg.t_min_list.empty() && cfg.t_min_list.size() != cfg.f_cam_list.size()) {
    throw ConfigError("t_min_list must have one entry per f_cam_list rate");
  }
  if (!cfg.t_proc_list.empty() && cfg.t_proc_list.size() != cfg.f_cam_list.size()) {
    throw ConfigError("t_proc_list must have one entry per f_cam_list rate");
  }
  return cfg;
}

}  // namespace g2g
