// Copyright 2026 The Backbone Lab Authors
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

#ifndef BACKBONE_RNG_HPP_
#define BACKBONE_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace backbone {

// Weyl increment of splitmix64; also the per-trial seed stride.
inline constexpr std::uint64_t kSeedMixConstant = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer applied to base + (index + 1) * kSeedMixConstant.
// Distinct indices give decorrelated streams without coordination.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * kSeedMixConstant;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Named sub-streams of one trial seed.
enum class SeedStream : std::uint64_t {
  kHonest = 1,
  kAdversarial = 2,
  kTransactions = 3,
  kStrategy = 4,
};

inline std::uint64_t stream_seed(std::uint64_t seed, SeedStream stream,
                                 std::uint64_t chain) {
  return mix_seed(mix_seed(seed, static_cast<std::uint64_t>(stream)), chain);
}

// Arrival times of a homogeneous Poisson process on (0, horizon], built
// from independent exponential gaps. Strictly increasing.
inline std::vector<double> sample_poisson_arrivals(double rate, double horizon,
                                                   std::uint64_t seed) {
  std::vector<double> times;
  if (rate <= 0.0 || horizon <= 0.0) return times;
  std::mt19937_64 gen(seed);
  std::exponential_distribution<double> gap(rate);
  times.reserve(static_cast<std::size_t>(rate * horizon * 1.1) + 16);
  double t = 0.0;
  for (;;) {
    double next = t + gap(gen);
    if (next > horizon) break;
    if (next > t) {
      times.push_back(next);
      t = next;
    }
  }
  return times;
}

}  // namespace backbone

#endif  // BACKBONE_RNG_HPP_
