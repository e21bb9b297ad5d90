// Copyright 2026 The oamqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oamqe/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "oamqe/errors.hpp"

namespace oamqe {

std::vector<double> OffsetScan::values() const {
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(start + i * step);
  return out;
}

void ExperimentConfig::validate() const {
  if (spp_order == 0) throw ConfigError("spp_order must be non-zero");
  if (truncation < std::abs(spp_order) + 1) {
    throw ConfigError(fmt::format("truncation {} too small for SPP order {}", truncation, spp_order));
  }
  grid.validate();
  if (!(offsets.step > 0.0)) throw ConfigError("offsets.step must be positive");
  if (offsets.start < 0.0 || offsets.stop < offsets.start) {
    throw ConfigError("offsets must satisfy 0 <= start <= stop");
  }
  if (offsets.stop >= grid.extent) throw ConfigError("offsets.stop must be inside the grid window");
  if (!(targets.visibility > 0.0 && targets.visibility <= 1.0)) {
    throw ConfigError("targets.visibility must lie in (0, 1]");
  }
  if (!(targets.visibility_tolerance > 0.0)) {
    throw ConfigError("targets.visibility_tolerance must be positive");
  }
  if (!(targets.coincidence_probability > 0.0 && targets.coincidence_probability < 1.0)) {
    throw ConfigError("targets.coincidence_probability must lie in (0, 1)");
  }
  sweep_config().validate();
}

SweepConfig ExperimentConfig::sweep_config() const {
  SweepConfig s;
  s.n_phase_points = n_phase_points;
  s.phase_span = phase_span;
  s.scan_frequency = scan_frequency;
  s.scenario = scenario;
  s.detection = detection;
  s.detection.rng_seed = seed;
  s.crosstalk_epsilon = crosstalk_epsilon;
  s.arm_a2_spp_order = spp_order;
  s.truncation = truncation;
  s.eraser_offset = eraser_offset;
  s.eraser_miscalibration = eraser_miscalibration;
  s.oracle_grid = grid;
  return s;
}

namespace {

int line_of(const YAML::Node &node) { return node.Mark().line + 1; }

template <class T>
T scalar(const YAML::Node &node, const std::string &key) {
  if (!node.IsScalar()) {
    throw ConfigError(fmt::format("'{}' must be a scalar", key), line_of(node));
  }
  try {
    return node.as<T>();
  } catch (const YAML::BadConversion &) {
    throw ConfigError(fmt::format("'{}' has the wrong type: '{}'", key, node.Scalar()),
                      line_of(node));
  }
}

void require(bool ok, const YAML::Node &node, const std::string &message) {
  if (!ok) throw ConfigError(message, line_of(node));
}

using Handler = std::function<void(const YAML::Node &)>;

// Walks a mapping, dispatching each key to its handler. Unknown keys and
// non-mapping sections are errors.
void walk(const YAML::Node &map, const std::string &section,
          const std::map<std::string, Handler> &handlers) {
  if (!map.IsMap()) {
    throw ConfigError(fmt::format("section '{}' must be a mapping", section), line_of(map));
  }
  for (const auto &kv : map) {
    const auto key = kv.first.as<std::string>();
    const auto it = handlers.find(key);
    if (it == handlers.end()) {
      const auto where = section.empty() ? key : section + "." + key;
      throw ConfigError(fmt::format("unknown key '{}'", where), line_of(kv.first));
    }
    it->second(kv.second);
  }
}

ExperimentConfig parse_root(const YAML::Node &root) {
  ExperimentConfig cfg;
  if (!root || root.IsNull()) return cfg;

  walk(root, "",
       {
           {"seed", [&](const YAML::Node &n) { cfg.seed = scalar<std::uint64_t>(n, "seed"); }},
           {"output_dir",
            [&](const YAML::Node &n) {
              cfg.output_dir = scalar<std::string>(n, "output_dir");
              require(!cfg.output_dir.empty(), n, "output_dir must not be empty");
            }},
           {"interferometer",
            [&](const YAML::Node &sec) {
              walk(sec, "interferometer",
                   {{"spp_order",
                     [&](const YAML::Node &n) {
                       cfg.spp_order = scalar<int>(n, "spp_order");
                       require(cfg.spp_order != 0, n, "spp_order must be non-zero");
                     }},
                    {"truncation", [&](const YAML::Node &n) {
                       cfg.truncation = scalar<int>(n, "truncation");
                       require(cfg.truncation >= 1, n, "truncation must be >= 1");
                     }}});
            }},
           {"oracle",
            [&](const YAML::Node &sec) {
              walk(sec, "oracle",
                   {{"grid_size",
                     [&](const YAML::Node &n) {
                       cfg.grid.size = scalar<int>(n, "grid_size");
                       require(cfg.grid.size >= kMinGridSize, n,
                               fmt::format("grid resolution N={} is below the minimum of {}",
                                           cfg.grid.size, kMinGridSize));
                     }},
                    {"extent",
                     [&](const YAML::Node &n) {
                       cfg.grid.extent = scalar<double>(n, "extent");
                       require(cfg.grid.extent > 0.0, n, "extent must be positive");
                     }},
                    {"waist",
                     [&](const YAML::Node &n) {
                       cfg.grid.waist = scalar<double>(n, "waist");
                       require(cfg.grid.waist > 0.0, n, "waist must be positive");
                     }},
                    {"offset_start",
                     [&](const YAML::Node &n) {
                       cfg.offsets.start = scalar<double>(n, "offset_start");
                       require(cfg.offsets.start >= 0.0, n, "offset_start must be >= 0");
                     }},
                    {"offset_stop",
                     [&](const YAML::Node &n) { cfg.offsets.stop = scalar<double>(n, "offset_stop"); }},
                    {"offset_step", [&](const YAML::Node &n) {
                       cfg.offsets.step = scalar<double>(n, "offset_step");
                       require(cfg.offsets.step > 0.0, n, "offset_step must be positive");
                     }}});
            }},
           {"eraser",
            [&](const YAML::Node &sec) {
              walk(sec, "eraser",
                   {{"offset",
                     [&](const YAML::Node &n) {
                       if (n.IsScalar() && n.Scalar() == "auto") {
                         cfg.eraser_offset.reset();
                         return;
                       }
                       cfg.eraser_offset = scalar<double>(n, "offset");
                       require(*cfg.eraser_offset >= 0.0, n, "eraser offset must be >= 0 or 'auto'");
                     }},
                    {"miscalibration", [&](const YAML::Node &n) {
                       cfg.eraser_miscalibration = scalar<double>(n, "miscalibration");
                     }}});
            }},
           {"sweep",
            [&](const YAML::Node &sec) {
              walk(sec, "sweep",
                   {{"scenario",
                     [&](const YAML::Node &n) {
                       const auto name = scalar<std::string>(n, "scenario");
                       const auto s = parse_scenario(name);
                       if (!s) {
                         std::string valid;
                         for (auto v : all_scenarios()) {
                           if (!valid.empty()) valid += ", ";
                           valid += scenario_name(v);
                         }
                         throw ConfigError(
                             fmt::format("unknown scenario '{}' (valid: {})", name, valid),
                             line_of(n));
                       }
                       cfg.scenario = *s;
                     }},
                    {"n_phase_points",
                     [&](const YAML::Node &n) {
                       cfg.n_phase_points = scalar<int>(n, "n_phase_points");
                       require(cfg.n_phase_points >= 20, n, "n_phase_points must be >= 20");
                     }},
                    {"phase_span",
                     [&](const YAML::Node &n) {
                       cfg.phase_span = scalar<double>(n, "phase_span");
                       require(cfg.phase_span > 0.0, n, "phase_span must be positive");
                     }},
                    {"scan_frequency",
                     [&](const YAML::Node &n) {
                       cfg.scan_frequency = scalar<double>(n, "scan_frequency");
                       require(cfg.scan_frequency > 0.0, n, "scan_frequency must be positive");
                     }},
                    {"crosstalk_epsilon", [&](const YAML::Node &n) {
                       cfg.crosstalk_epsilon = scalar<double>(n, "crosstalk_epsilon");
                       require(cfg.crosstalk_epsilon >= 0.0 && cfg.crosstalk_epsilon < 1.0, n,
                               "crosstalk_epsilon must lie in [0, 1)");
                     }}});
            }},
           {"detection",
            [&](const YAML::Node &sec) {
              auto &d = cfg.detection;
              walk(sec, "detection",
                   {{"photon_rate",
                     [&](const YAML::Node &n) {
                       d.photon_rate = scalar<double>(n, "photon_rate");
                       require(d.photon_rate > 0.0, n, "photon_rate must be positive");
                     }},
                    {"bin_duration",
                     [&](const YAML::Node &n) {
                       d.bin_duration = scalar<double>(n, "bin_duration");
                       require(d.bin_duration > 0.0, n, "bin_duration must be positive");
                     }},
                    {"n_bins_per_phase",
                     [&](const YAML::Node &n) {
                       d.n_bins_per_phase = scalar<int>(n, "n_bins_per_phase");
                       require(d.n_bins_per_phase >= 1, n, "n_bins_per_phase must be >= 1");
                     }},
                    {"coincidence_window",
                     [&](const YAML::Node &n) {
                       d.coincidence_window = scalar<double>(n, "coincidence_window");
                       require(d.coincidence_window > 0.0, n, "coincidence_window must be positive");
                     }},
                    {"dark_rate",
                     [&](const YAML::Node &n) {
                       d.dark_rate = scalar<double>(n, "dark_rate");
                       require(d.dark_rate >= 0.0, n, "dark_rate must be >= 0");
                     }},
                    {"efficiency", [&](const YAML::Node &n) {
                       d.efficiency = scalar<double>(n, "efficiency");
                       require(d.efficiency >= 0.0 && d.efficiency <= 1.0, n,
                               "efficiency must lie in [0, 1]");
                     }}});
            }},
           {"targets",
            [&](const YAML::Node &sec) {
              walk(sec, "targets",
                   {{"visibility",
                     [&](const YAML::Node &n) {
                       cfg.targets.visibility = scalar<double>(n, "visibility");
                       require(cfg.targets.visibility > 0.0 && cfg.targets.visibility <= 1.0, n,
                               "target visibility must lie in (0, 1]");
                     }},
                    {"visibility_tolerance",
                     [&](const YAML::Node &n) {
                       cfg.targets.visibility_tolerance = scalar<double>(n, "visibility_tolerance");
                       require(cfg.targets.visibility_tolerance > 0.0, n,
                               "visibility_tolerance must be positive");
                     }},
                    {"coincidence_probability", [&](const YAML::Node &n) {
                       cfg.targets.coincidence_probability =
                           scalar<double>(n, "coincidence_probability");
                       require(cfg.targets.coincidence_probability > 0.0 &&
                                   cfg.targets.coincidence_probability < 1.0,
                               n, "coincidence_probability must lie in (0, 1)");
                     }}});
            }},
       });

  cfg.validate();
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string &yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException &e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  return parse_root(root);
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string default_config_yaml(const ExperimentConfig &cfg) {
  const auto &d = cfg.detection;
  std::string offset = cfg.eraser_offset ? fmt::format("{}", *cfg.eraser_offset) : "auto";
  YAML::Emitter out_dir;
  out_dir << YAML::DoubleQuoted << cfg.output_dir;
  return fmt::format(
      "seed: {}\n"
      "output_dir: {}\n"
      "interferometer:\n"
      "  spp_order: {}\n"
      "  truncation: {}\n"
      "oracle:\n"
      "  grid_size: {}\n"
      "  extent: {}\n"
      "  waist: {}\n"
      "  offset_start: {}\n"
      "  offset_stop: {}\n"
      "  offset_step: {}\n"
      "eraser:\n"
      "  offset: {}\n"
      "  miscalibration: {}\n"
      "sweep:\n"
      "  scenario: {}\n"
      "  n_phase_points: {}\n"
      "  phase_span: {}\n"
      "  scan_frequency: {}\n"
      "  crosstalk_epsilon: {}\n"
      "detection:\n"
      "  photon_rate: {}\n"
      "  bin_duration: {}\n"
      "  n_bins_per_phase: {}\n"
      "  coincidence_window: {}\n"
      "  dark_rate: {}\n"
      "  efficiency: {}\n"
      "targets:\n"
      "  visibility: {}\n"
      "  visibility_tolerance: {}\n"
      "  coincidence_probability: {}\n",
      cfg.seed, out_dir.c_str(), cfg.spp_order, cfg.truncation,
      cfg.grid.size, cfg.grid.extent, cfg.grid.waist, cfg.offsets.start, cfg.offsets.stop,
      cfg.offsets.step, offset, cfg.eraser_miscalibration, scenario_name(cfg.scenario),
      cfg.n_phase_points, cfg.phase_span, cfg.scan_frequency, cfg.crosstalk_epsilon, d.photon_rate,
      d.bin_duration, d.n_bins_per_phase, d.coincidence_window, d.dark_rate, d.efficiency,
      cfg.targets.visibility, cfg.targets.visibility_tolerance, cfg.targets.coincidence_probability);
}

}  // namespace oamqe
