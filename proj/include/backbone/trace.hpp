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

#ifndef BACKBONE_TRACE_HPP_
#define BACKBONE_TRACE_HPP_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "backbone/chain_store.hpp"
#include "backbone/params.hpp"

namespace backbone {

using Outpoint = std::uint64_t;

struct Transaction {
  TxId id = 0;
  std::vector<Outpoint> inputs;
  std::vector<Outpoint> outputs;
};

// Two transactions conflict when they spend a common output.
inline bool conflicts(const Transaction& a, const Transaction& b) {
  for (Outpoint x : a.inputs) {
    for (Outpoint y : b.inputs) {
      if (x == y) return true;
    }
  }
  return false;
}

struct ArrivalSchedule {
  std::vector<std::vector<double>> honest;       // per chain
  std::vector<std::vector<double>> adversarial;  // budget, per chain
};

enum class EventKind : std::uint8_t { kMined, kPublished };

struct TraceEvent {
  double time = 0.0;
  EventKind kind = EventKind::kMined;
  BlockRef block;
};

// Complete record of one simulated execution.
struct Trace {
  ProtocolParams params;
  HonestTieBreak tie_break = HonestTieBreak::kEarliest;
  std::uint64_t seed = 0;
  std::string strategy;
  std::vector<BlockStore> chains;
  std::vector<Transaction> transactions;  // indexed by TxId
  std::vector<TraceEvent> events;         // ordered by (time, sequence)
  ArrivalSchedule schedule;
  std::optional<bool> attack_success;

  const BlockStore& chain(int j) const { return chains.at(static_cast<std::size_t>(j)); }
  const Block& block(BlockRef ref) const { return chain(ref.chain).at(ref.id); }
  const Transaction& tx(TxId id) const { return transactions.at(id); }
};

namespace detail {

inline nlohmann::json time_or_null(double t) {
  if (t == kNever) return nullptr;
  return t;
}

}  // namespace detail

// One JSON object per block: {chain, id, kind, parent, t_mined, t_pub,
// votes, refs, txs}. `t_pub` is null for never-published blocks.
inline nlohmann::json block_to_json(const Block& b) {
  nlohmann::json votes = nlohmann::json::array();
  for (const Vote& v : b.votes) votes.push_back({v.height, v.proposer.value});
  nlohmann::json refs = nlohmann::json::array();
  for (const BlockRef& r : b.refs) refs.push_back({r.chain, r.id.value});
  nlohmann::json row;
  row["chain"] = b.chain;
  row["id"] = b.id.value;
  row["kind"] = b.honest() ? "honest" : "adversarial";
  row["parent"] = b.id == kGenesis ? nlohmann::json(nullptr)
                                   : nlohmann::json(b.parent.value);
  row["t_mined"] = b.mined_time;
  row["t_pub"] = detail::time_or_null(b.publish_time);
  row["votes"] = std::move(votes);
  row["refs"] = std::move(refs);
  row["txs"] = b.txs;
  return row;
}

inline void write_trace_jsonl(const Trace& trace, std::ostream& out) {
  for (const BlockStore& store : trace.chains) {
    for (const Block& b : store.blocks()) out << block_to_json(b).dump() << '\n';
  }
}

// Rebuilds per-chain stores from JSON lines. Rows must list each chain's
// blocks in id order, genesis first.
inline std::vector<BlockStore> read_trace_jsonl(std::istream& in) {
  std::vector<BlockStore> chains;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = nlohmann::json::parse(line);
    const int chain = row.at("chain").get<int>();
    const auto id = row.at("id").get<std::uint32_t>();
    while (static_cast<int>(chains.size()) <= chain) {
      chains.emplace_back(static_cast<int>(chains.size()));
    }
    if (id == 0) continue;
    Block b;
    b.chain = chain;
    b.kind = row.at("kind").get<std::string>() == "honest" ? BlockKind::kHonest
                                                           : BlockKind::kAdversarial;
    b.parent = BlockId{row.at("parent").get<std::uint32_t>()};
    b.mined_time = row.at("t_mined").get<double>();
    b.publish_time =
        row.at("t_pub").is_null() ? kNever : row.at("t_pub").get<double>();
    for (const auto& v : row.at("votes")) {
      b.votes.push_back({v.at(0).get<std::uint32_t>(), BlockId{v.at(1).get<std::uint32_t>()}});
    }
    for (const auto& r : row.at("refs")) {
      b.refs.push_back({r.at(0).get<int>(), BlockId{r.at(1).get<std::uint32_t>()}});
    }
    b.txs = row.at("txs").get<std::vector<TxId>>();
    BlockStore& store = chains[static_cast<std::size_t>(chain)];
    if (store.size() != id) {
      throw std::runtime_error("trace rows out of order at chain " +
                               std::to_string(chain) + " id " + std::to_string(id));
    }
    store.append(std::move(b));
  }
  return chains;
}

}  // namespace backbone

#endif  // BACKBONE_TRACE_HPP_
