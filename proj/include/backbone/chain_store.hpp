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

#ifndef BACKBONE_CHAIN_STORE_HPP_
#define BACKBONE_CHAIN_STORE_HPP_

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace backbone {

// Position of a block in its chain's mining order. Genesis is 0.
struct BlockId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(BlockId, BlockId) = default;
};

inline constexpr BlockId kGenesis{0};

// A block on any chain of a Prism system.
struct BlockRef {
  int chain = 0;
  BlockId id;

  friend constexpr auto operator<=>(const BlockRef&, const BlockRef&) = default;
};

enum class BlockKind : std::uint8_t { kHonest, kAdversarial };

struct Vote {
  std::uint32_t height = 0;  // proposer height voted on
  BlockId proposer;

  friend constexpr bool operator==(const Vote&, const Vote&) = default;
};

using TxId = std::uint64_t;

// Publication time of a block that is never published.
inline constexpr double kNever = std::numeric_limits<double>::infinity();

struct Block {
  BlockId id;
  BlockKind kind = BlockKind::kHonest;
  int chain = 0;
  BlockId parent;
  double mined_time = 0.0;
  double publish_time = kNever;
  std::vector<Vote> votes;
  std::vector<BlockRef> refs;
  std::vector<TxId> txs;

  bool honest() const { return kind == BlockKind::kHonest; }
  bool published() const { return publish_time != kNever; }
  bool published_by(double t) const { return publish_time <= t; }
};

enum class ChainErrc {
  kUnknownParent,
  kNonCausalParent,
  kCrossChainParent,
  kUnpublishedParent,
  kUnknownBlock,
  kAlreadyPublished,
  kPublishBeforeMined,
  kDepthExceedsHeight,
};

inline const char* to_string(ChainErrc code) {
  switch (code) {
    case ChainErrc::kUnknownParent:
      return "UnknownParent";
    case ChainErrc::kNonCausalParent:
      return "NonCausalParent";
    case ChainErrc::kCrossChainParent:
      return "CrossChainParent";
    case ChainErrc::kUnpublishedParent:
      return "UnpublishedParent";
    case ChainErrc::kUnknownBlock:
      return "UnknownBlock";
    case ChainErrc::kAlreadyPublished:
      return "AlreadyPublished";
    case ChainErrc::kPublishBeforeMined:
      return "PublishBeforeMined";
    case ChainErrc::kDepthExceedsHeight:
      return "DepthExceedsHeight";
  }
  return "ChainError";
}

class ChainStoreError : public std::runtime_error {
 public:
  ChainStoreError(ChainErrc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ChainErrc code() const { return code_; }

 private:
  ChainErrc code_;
};

// Append-only store of one chain's blocks (a bitcoin chain or one Prism
// j-chain). Block ids are dense and follow append order, which the
// simulator keeps equal to mining order.
class BlockStore {
 public:
  explicit BlockStore(int chain = 0) : chain_(chain) {
    Block genesis;
    genesis.chain = chain;
    genesis.mined_time = 0.0;
    genesis.publish_time = 0.0;
    blocks_.push_back(std::move(genesis));
    heights_.push_back(0);
  }

  int chain() const { return chain_; }
  std::size_t size() const { return blocks_.size(); }
  bool contains(BlockId id) const { return id.value < blocks_.size(); }
  std::span<const Block> blocks() const { return blocks_; }

  const Block& at(BlockId id) const {
    if (!contains(id)) {
      throw ChainStoreError(ChainErrc::kUnknownBlock,
                            "block " + std::to_string(id.value));
    }
    return blocks_[id.value];
  }

  std::uint32_t height(BlockId id) const {
    at(id);
    return heights_[id.value];
  }

  // Stores `block` and returns its id. The id field of the argument is
  // ignored. Honest blocks are published the instant they are mined.
  BlockId append(Block block) {
    if (block.chain != chain_) {
      throw ChainStoreError(ChainErrc::kCrossChainParent,
                            "block for chain " + std::to_string(block.chain) +
                                " appended to chain " + std::to_string(chain_));
    }
    if (!contains(block.parent)) {
      throw ChainStoreError(ChainErrc::kUnknownParent,
                            "parent " + std::to_string(block.parent.value));
    }
    const Block& parent = blocks_[block.parent.value];
    if (!(parent.mined_time < block.mined_time)) {
      throw ChainStoreError(ChainErrc::kNonCausalParent,
                            "parent mined at " + std::to_string(parent.mined_time) +
                                ", child at " + std::to_string(block.mined_time));
    }
    if (block.honest()) block.publish_time = block.mined_time;
    if (block.published()) {
      if (block.publish_time < block.mined_time) {
        throw ChainStoreError(ChainErrc::kPublishBeforeMined, "append");
      }
      if (parent.publish_time > block.publish_time) {
        throw ChainStoreError(ChainErrc::kUnpublishedParent,
                              "parent " + std::to_string(block.parent.value));
      }
    }
    block.id = BlockId{static_cast<std::uint32_t>(blocks_.size())};
    heights_.push_back(heights_[block.parent.value] + 1);
    blocks_.push_back(std::move(block));
    return blocks_.back().id;
  }

  // Sets the publication time of a withheld block. A block is published at
  // most once and never before its parent.
  void publish(BlockId id, double t) {
    if (!contains(id)) {
      throw ChainStoreError(ChainErrc::kUnknownBlock,
                            "block " + std::to_string(id.value));
    }
    Block& block = blocks_[id.value];
    if (block.published()) {
      throw ChainStoreError(ChainErrc::kAlreadyPublished,
                            "block " + std::to_string(id.value));
    }
    if (t < block.mined_time) {
      throw ChainStoreError(ChainErrc::kPublishBeforeMined,
                            "block " + std::to_string(id.value));
    }
    if (blocks_[block.parent.value].publish_time > t) {
      throw ChainStoreError(ChainErrc::kUnpublishedParent,
                            "block " + std::to_string(id.value));
    }
    block.publish_time = t;
  }

  // The block at height `h` on the chain ending at `tip`.
  BlockId ancestor_at_height(BlockId tip, std::uint32_t h) const {
    std::uint32_t cur_h = height(tip);
    if (h > cur_h) {
      throw ChainStoreError(ChainErrc::kDepthExceedsHeight,
                            "height " + std::to_string(h) + " above tip");
    }
    BlockId cur = tip;
    while (cur_h > h) {
      cur = blocks_[cur.value].parent;
      --cur_h;
    }
    return cur;
  }

  // True iff `ancestor` lies on the chain ending at `tip` (inclusive).
  bool is_ancestor(BlockId ancestor, BlockId tip) const {
    std::uint32_t h = height(ancestor);
    if (h > height(tip)) return false;
    return ancestor_at_height(tip, h) == ancestor;
  }

 private:
  int chain_;
  std::vector<Block> blocks_;
  std::vector<std::uint32_t> heights_;
};

struct KDeep {
  BlockId block;   // the k-deep block
  BlockId prefix;  // tip of the k-deep prefix (parent of `block`)
};

inline KDeep k_deep(const BlockStore& store, BlockId tip, std::uint32_t k) {
  std::uint32_t n = store.height(tip);
  if (k < 1 || k > n) {
    throw ChainStoreError(ChainErrc::kDepthExceedsHeight,
                          "k=" + std::to_string(k) + " for height " +
                              std::to_string(n));
  }
  BlockId block = store.ancestor_at_height(tip, n - k + 1);
  return {block, store.at(block).parent};
}

// Highest block height among blocks published by `t`; 0 when none is
// (t < 0).
inline std::uint32_t max_published_height(const BlockStore& store, double t) {
  std::uint32_t best = 0;
  for (const Block& b : store.blocks()) {
    if (b.published_by(t)) best = std::max(best, store.height(b.id));
  }
  return best;
}

// Every block whose chain is t-credible: published by t and at least as
// high as every chain published by t - delta.
inline std::vector<BlockId> credible_tips(const BlockStore& store, double t,
                                          double delta) {
  const std::uint32_t floor_height = max_published_height(store, t - delta);
  std::vector<BlockId> tips;
  for (const Block& b : store.blocks()) {
    if (b.published_by(t) && store.height(b.id) >= floor_height) {
      tips.push_back(b.id);
    }
  }
  return tips;
}

// Honest preference among a set of tips: highest, then earliest
// publication, then lowest id.
inline BlockId preferred_tip(const BlockStore& store,
                             std::span<const BlockId> tips) {
  BlockId best = tips.front();
  for (BlockId id : tips) {
    const auto key = [&](BlockId b) {
      return std::tuple(-static_cast<std::int64_t>(store.height(b)),
                        store.at(b).publish_time, b.value);
    };
    if (key(id) < key(best)) best = id;
  }
  return best;
}

// Publication-ordered index for repeated credibility queries on a finished
// store. Equivalent to the linear scans above, in O(log n) per query.
class CredibilityIndex {
 public:
  explicit CredibilityIndex(const BlockStore& store) {
    std::vector<std::pair<double, std::uint32_t>> pub;
    for (const Block& b : store.blocks()) {
      if (b.published()) pub.emplace_back(b.publish_time, store.height(b.id));
    }
    std::sort(pub.begin(), pub.end());
    times_.reserve(pub.size());
    prefix_max_.reserve(pub.size());
    std::uint32_t running = 0;
    for (const auto& [t, h] : pub) {
      running = std::max(running, h);
      times_.push_back(t);
      prefix_max_.push_back(running);
    }
  }

  std::uint32_t max_published_height(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0;
    return prefix_max_[static_cast<std::size_t>(it - times_.begin()) - 1];
  }

  // Lowest and highest height among t-credible chains.
  std::uint32_t min_credible_height(double t, double delta) const {
    return max_published_height(t - delta);
  }
  std::uint32_t max_credible_height(double t) const {
    return max_published_height(t);
  }

 private:
  std::vector<double> times_;
  std::vector<std::uint32_t> prefix_max_;
};

}  // namespace backbone

template <>
struct std::hash<backbone::BlockId> {
  std::size_t operator()(backbone::BlockId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

#endif  // BACKBONE_CHAIN_STORE_HPP_
