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

#include "oamqe/detection.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "oamqe/errors.hpp"

namespace oamqe {

namespace {

constexpr double kProbabilitySlack = 1e-9;
constexpr double kSpeedOfLight = 299792458.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

int ProjectorSpec::admixed_mode() const {
  if (crosstalk_mode) {
    return *crosstalk_mode;
  }
  return target_mode <= 0 ? target_mode + 1 : target_mode - 1;
}

void ProjectorSpec::validate() const {
  if (!(crosstalk_epsilon >= 0.0) || !(crosstalk_epsilon < 1.0)) {
    throw DomainError(fmt::format("crosstalk epsilon must lie in [0, 1), got {}",
                                  crosstalk_epsilon));
  }
  if (crosstalk_epsilon > 0.0 && admixed_mode() == target_mode) {
    throw DomainError("crosstalk mode must differ from the target mode");
  }
}

ModeState ProjectorSpec::defining_vector(int truncation) const {
  validate();
  ModeState v = basis_state(target_mode, truncation);
  if (crosstalk_epsilon > 0.0) {
    v = v.with_added(admixed_mode(), crosstalk_epsilon);
  }
  return normalize(v);
}

double projection_probability(const ModeState &state, const ProjectorSpec &proj) {
  return std::norm(inner_product(proj.defining_vector(state.truncation()), state));
}

void CountingConfig::validate() const {
  if (!(photon_rate > 0.0) || !std::isfinite(photon_rate)) {
    throw ConfigError(fmt::format("photon_rate must be positive, got {}", photon_rate));
  }
  if (!(bin_duration > 0.0) || !std::isfinite(bin_duration)) {
    throw ConfigError(fmt::format("bin_duration must be positive, got {}", bin_duration));
  }
  if (n_bins_per_phase < 1) {
    throw ConfigError(fmt::format("n_bins_per_phase must be >= 1, got {}", n_bins_per_phase));
  }
  if (!(coincidence_window > 0.0)) {
    throw ConfigError("coincidence_window must be positive");
  }
  if (!(dark_rate >= 0.0)) {
    throw ConfigError("dark_rate must be >= 0");
  }
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw ConfigError("efficiency must lie in [0, 1]");
  }
}

std::uint64_t stream_seed(std::uint64_t root, std::uint64_t phase_index, std::uint64_t detector) {
  return splitmix64(splitmix64(splitmix64(root) ^ phase_index) ^ (detector + 1));
}

std::vector<std::int64_t> simulate_counts(double prob, const CountingConfig &cfg,
                                          std::uint64_t phase_index, std::uint64_t detector) {
  cfg.validate();
  if (!(prob >= -kProbabilitySlack && prob <= 1.0 + kProbabilitySlack)) {
    throw DomainError(fmt::format("detection probability {} outside [0, 1]", prob));
  }
  const double p = std::clamp(prob, 0.0, 1.0) * cfg.efficiency;
  std::mt19937_64 rng(stream_seed(cfg.rng_seed, phase_index, detector));
  std::poisson_distribution<std::int64_t> arrivals(cfg.mean_photons_per_bin());
  const double dark_mean = cfg.dark_rate * cfg.bin_duration;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cfg.n_bins_per_phase));
  for (auto &c : counts) {
    const std::int64_t n = arrivals(rng);
    std::binomial_distribution<std::int64_t> kept(n, p);
    c = kept(rng);
    if (dark_mean > 0.0) {
      c += std::poisson_distribution<std::int64_t>(dark_mean)(rng);
    }
  }
  return counts;
}

double coincidence_rate(double rate, double window) {
  if (!(rate > 0.0) || !(window > 0.0)) {
    throw DomainError("coincidence_rate needs positive rate and window");
  }
  // P(N >= 2) for N ~ Poisson(mu) is the regularized lower incomplete gamma
  // P(2, mu), which stays accurate where 1 - e^{-mu}(1 + mu) cancels.
  return boost::math::gamma_p(2.0, rate * window);
}

double coincidence_window_for(double rate, double probability) {
  if (!(rate > 0.0) || !(probability > 0.0 && probability < 1.0)) {
    throw DomainError("coincidence_window_for needs rate > 0 and probability in (0, 1)");
  }
  return boost::math::gamma_p_inv(2.0, probability) / rate;
}

double mean_photon_spacing(double rate) {
  if (!(rate > 0.0)) {
    throw DomainError("photon rate must be positive");
  }
  return kSpeedOfLight / rate;
}

}  // namespace oamqe
