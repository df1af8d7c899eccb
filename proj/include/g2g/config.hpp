#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "g2g/sim.hpp"

namespace g2g {

// Declarative campaign description, one `key = value` per line, '#' starts a
// comment. Keys are the PipelineModel / CampaignConfig / DetectorConfig field
// names. Every time-valued key (t_min, t_proc, exposure_s, proc_jitter_std,
// cam_phase, dis_phase, interval_base_s, interval_spread_s, led_hold_s) is
// given in milliseconds; frequencies are in Hz.
//
// Sweeps add f_cam_list (Hz) and optionally t_min_list / t_proc_list (ms),
// comma separated and parallel to f_cam_list.
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::istream& in);
KeyValues parse_key_values(std::string_view text);

// Applies `key=value` overrides in order; later ones win.
void apply_overrides(KeyValues& kv, const std::vector<std::string>& overrides);

struct SimulationConfig {
  PipelineModel pipeline;
  CampaignConfig campaign;
  // Unset means "exposure equals the frame period", re-derived per sweep rate.
  std::optional<double> exposure_s;
  std::vector<double> f_cam_list;
  std::vector<double> t_min_list;
  std::vector<double> t_proc_list;

  // Pipeline for the i-th sweep rate.
  PipelineModel pipeline_for_rate(std::size_t i) const;
};

// Throws ConfigError on unknown keys or unparsable values. Does not check
// cross-field invariants; call validate on the pipeline/campaign for that.
SimulationConfig build_config(const KeyValues& kv);

}  // namespace g2g
