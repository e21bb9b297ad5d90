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

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oamqe/mode_state.hpp"

namespace oamqe {

enum class OutputPort { p3, p4 };

/// Fiber-coupled projective detector. With crosstalk the detector projects
/// onto (|target> + eps |admixed>) / sqrt(1 + eps^2), which models an SPP/SMF
/// pair that is not perfectly coaxial.
struct ProjectorSpec {
  int target_mode = 0;
  double crosstalk_epsilon = 0.0;
  /// Defaults to the neighbouring mode towards +1: target 0 admixes |+1>,
  /// target +-1 admixes |0>.
  std::optional<int> crosstalk_mode;
  OutputPort port = OutputPort::p3;

  int admixed_mode() const;
  void validate() const;
  /// Unit-norm projector vector on window [-L, L].
  ModeState defining_vector(int truncation) const;
};

/// |<v|state>|^2. For a sub-normalized branch the result lies in
/// [0, ||state||^2].
double projection_probability(const ModeState &state, const ProjectorSpec &proj);

struct CountingConfig {
  double photon_rate = 1e4;
  /// Dwell time of one phase point in one scan period.
  double bin_duration = 0.025;
  /// Repeated scan periods accumulated per phase point.
  int n_bins_per_phase = 40;
  std::uint64_t rng_seed = 20240917;
  double coincidence_window = 1.6e-6;
  double dark_rate = 0.0;
  double efficiency = 1.0;

  void validate() const;
  double mean_photons_per_bin() const { return photon_rate * bin_duration; }
};

/// Counter-based stream derivation, so per-point RNG state does not depend on
/// evaluation order.
std::uint64_t stream_seed(std::uint64_t root, std::uint64_t phase_index, std::uint64_t detector);

/// Per-bin counts for n_bins_per_phase bins: Poisson(rate * T) arrivals
/// thinned by Binomial(prob * efficiency), plus Poisson dark counts. The
/// generator is seeded from stream_seed(cfg.rng_seed, phase_index, detector).
/// Throws DomainError for prob outside [0, 1] by more than 1e-9.
std::vector<std::int64_t> simulate_counts(double prob, const CountingConfig &cfg,
                                          std::uint64_t phase_index = 0,
                                          std::uint64_t detector = 0);

/// Probability of two or more Poissonian arrivals in one window:
/// 1 - e^{-mu}(1 + mu), mu = rate * window.
double coincidence_rate(double rate, double window);

/// Window for which coincidence_rate(rate, window) == probability.
double coincidence_window_for(double rate, double probability);

/// Mean free-space distance between successive photons, c / rate, in metres.
double mean_photon_spacing(double rate);

}  // namespace oamqe
