// Copyright 2026 qsd Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace qsd {

/// Finalizer of Vigna's splitmix64 (http://prng.di.unimi.it/splitmix64.c).
/// All randomness in this project derives from this one fixed algorithm so
/// that a (config, seed) pair reproduces bit-identically on any platform.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// splitmix64 stream: state advances by the golden-ratio increment, outputs
/// pass through mix64.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Independent sub-stream seed for a (row, column) slot of an experiment.
/// The derivation is fixed: the base seed and both indices are chained
/// through mix64 with distinct odd multipliers. Sampling slots in any order
/// (or in parallel) therefore yields the same draws per slot.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t row,
                                    std::uint64_t column) {
  std::uint64_t s = mix64(seed ^ 0x243F6A8885A308D3ULL);
  s = mix64(s ^ (row * 0x9E3779B97F4A7C15ULL + 1));
  s = mix64(s ^ (column * 0xD1B54A32D192ED03ULL + 2));
  return s;
}

/// Column tag reserved for decision-experiment streams, so they never collide
/// with calibration streams (whose columns are setting indices).
inline constexpr std::uint64_t kDecisionStreamTag = 0xFFFFFFFFFFFFFFFFULL;

}  // namespace qsd
