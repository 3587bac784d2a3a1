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

#ifndef BACKBONE_CHAIN_VIEW_HPP_
#define BACKBONE_CHAIN_VIEW_HPP_

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "backbone/chain_store.hpp"

namespace backbone {

// Live publication state of one chain while a simulation runs. Fed every
// publication in time order; answers credibility queries for the current
// time and for a lagged cutoff that only moves forward.
class ChainView {
 public:
  explicit ChainView(const BlockStore& store) : store_(&store) {
    on_published(kGenesis);
  }

  const BlockStore& store() const { return *store_; }

  // Must be called in non-decreasing publish_time order.
  void on_published(BlockId id) {
    const Block& b = store_->at(id);
    const std::uint32_t h = store_->height(id);
    released_.push_back(id);
    if (by_height_.size() <= h) by_height_.resize(h + 1);
    by_height_[h].push_back(id);
    if (first_at_.size() <= h) first_at_.resize(h + 1, BlockId{kUnset});
    BlockId& first = first_at_[h];
    if (first.value == kUnset ||
        std::pair(b.publish_time, id.value) <
            std::pair(store_->at(first).publish_time, first.value)) {
      first = id;
    }
    max_height_ = std::max(max_height_, h);
  }

  // Highest published height so far.
  std::uint32_t max_height() const { return max_height_; }

  // Highest height published by `cutoff`. Cutoffs must not decrease
  // between calls.
  std::uint32_t lagged_height(double cutoff) const {
    while (lag_pos_ < released_.size() &&
           store_->at(released_[lag_pos_]).publish_time <= cutoff) {
      lag_height_ = std::max(lag_height_, store_->height(released_[lag_pos_]));
      ++lag_pos_;
    }
    return lag_height_;
  }

  // Earliest-published block at height h (ties: lowest id), if any.
  bool has_height(std::uint32_t h) const { return h < first_at_.size(); }
  BlockId first_published_at(std::uint32_t h) const { return first_at_.at(h); }

  std::span<const BlockId> published_at(std::uint32_t h) const {
    if (h >= by_height_.size()) return {};
    return by_height_[h];
  }

  // Publication order, genesis first.
  std::span<const BlockId> released() const { return released_; }

  // Honest default tip: max height, earliest publication, lowest id.
  BlockId preferred() const { return preferred_tip(*store_, published_at(max_height_)); }

  // Preferred tip among blocks published by `cutoff` (which must be a
  // cutoff already passed to lagged_height).
  BlockId preferred_lagged() const {
    const auto& bucket = by_height_[lag_height_];
    BlockId best{kUnset};
    for (BlockId id : bucket) {
      const Block& b = store_->at(id);
      if (!b.published_by(lag_cutoff_bound())) continue;
      if (best.value == kUnset ||
          std::pair(b.publish_time, id.value) <
              std::pair(store_->at(best).publish_time, best.value)) {
        best = id;
      }
    }
    return best;
  }

  // All tips credible now given the lagged floor: heights lagged..max.
  std::vector<BlockId> credible_now(double lag_cutoff) const {
    const std::uint32_t floor = lagged_height(lag_cutoff);
    std::vector<BlockId> out;
    for (std::uint32_t h = floor; h <= max_height_; ++h) {
      const auto& bucket = by_height_[h];
      out.insert(out.end(), bucket.begin(), bucket.end());
    }
    return out;
  }

 private:
  static constexpr std::uint32_t kUnset = 0xFFFFFFFFu;

  double lag_cutoff_bound() const {
    return lag_pos_ == 0 ? 0.0 : store_->at(released_[lag_pos_ - 1]).publish_time;
  }

  const BlockStore* store_;
  std::vector<BlockId> released_;
  std::vector<std::vector<BlockId>> by_height_;
  std::vector<BlockId> first_at_;
  std::uint32_t max_height_ = 0;
  mutable std::size_t lag_pos_ = 0;
  mutable std::uint32_t lag_height_ = 0;
};

}  // namespace backbone

#endif  // BACKBONE_CHAIN_VIEW_HPP_
