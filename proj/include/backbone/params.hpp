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

#ifndef BACKBONE_PARAMS_HPP_
#define BACKBONE_PARAMS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace backbone {

// Protocol parameters for one run. Rates are per chain and per time unit.
// `m == 0` runs a single bitcoin chain; `m > 0` runs a Prism system with
// one proposer chain (index 0) and `m` voter chains.
struct ProtocolParams {
  double alpha = 1.0;       // honest mining rate
  double beta = 0.0;        // adversarial mining rate bound
  double delta_net = 0.0;   // propagation delay bound
  double delta_typ = 0.1;   // typicality factor, in (0, 40/81)
  int m = 0;                // voter chain count
  double horizon = 100.0;   // simulated time span (0, horizon]

  int chain_count() const { return m + 1; }
};

// How an honest miner picks among the tips it is allowed to extend.
enum class HonestTieBreak {
  // Highest published chain; earliest publication, then lowest id.
  kEarliest,
  // The strategy picks any credible tip; falls back to kEarliest.
  kAdversarySteered,
  // Only blocks published at least `delta_net` ago are seen.
  kMaxDelay,
};

inline std::string_view to_string(HonestTieBreak tb) {
  switch (tb) {
    case HonestTieBreak::kEarliest:
      return "earliest";
    case HonestTieBreak::kAdversarySteered:
      return "adversary-steered";
    case HonestTieBreak::kMaxDelay:
      return "max-delay";
  }
  return "earliest";
}

inline HonestTieBreak parse_tie_break(std::string_view name) {
  if (name == "earliest") return HonestTieBreak::kEarliest;
  if (name == "adversary-steered") return HonestTieBreak::kAdversarySteered;
  if (name == "max-delay") return HonestTieBreak::kMaxDelay;
  throw std::invalid_argument("unknown honest tie-break: " + std::string(name));
}

}  // namespace backbone

#endif  // BACKBONE_PARAMS_HPP_
