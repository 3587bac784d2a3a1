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

#ifndef BACKBONE_ADVERSARY_HPP_
#define BACKBONE_ADVERSARY_HPP_

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "backbone/chain_store.hpp"
#include "backbone/chain_view.hpp"
#include "backbone/params.hpp"

namespace backbone {

// What a strategy may look at: the clock, every block mined so far
// (public and its own withheld ones) and the live publication views.
struct StrategyContext {
  double now = 0.0;
  const ProtocolParams& params;
  std::span<const BlockStore> chains;
  std::span<const ChainView> views;

  const BlockStore& chain(int j) const { return chains[static_cast<std::size_t>(j)]; }
  const ChainView& view(int j) const { return views[static_cast<std::size_t>(j)]; }
};

struct Publication {
  int chain = 0;
  BlockId block;
  double time = 0.0;
};

// Reply to a budget point: mine on `mine_on` (or skip) and schedule
// publications. The new block, if any, is passed to on_block_mined.
struct StrategyDecision {
  std::optional<BlockId> mine_on;
  std::vector<Publication> publish;
};

class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual std::string name() const = 0;

  // Called at every adversarial budget point of `chain`.
  virtual StrategyDecision on_budget_point(const StrategyContext& ctx, int chain) = 0;

  // Called after any block (honest or adversarial) joins a store.
  virtual void on_block_mined(const StrategyContext& /*ctx*/, int /*chain*/,
                              BlockId /*id*/, std::vector<Publication>& /*out*/) {}

  // Under the adversary-steered tie-break: which credible tip the next
  // honest block of `chain` extends. nullopt keeps the default.
  virtual std::optional<BlockId> steer_honest(const StrategyContext& /*ctx*/,
                                              int /*chain*/,
                                              std::span<const BlockId> /*candidates*/) {
    return std::nullopt;
  }

  // Adversarial blocks on `chain` carry no votes, references or
  // transactions when true; otherwise they follow the honest payload rule.
  virtual bool censors(int /*chain*/) const { return false; }

  // Lets an honest voter on `chain` also vote on a proposer height first
  // published within (T - Delta, T). nullopt declines.
  virtual std::optional<BlockId> votes_in_band(const StrategyContext& /*ctx*/,
                                               int /*chain*/,
                                               std::uint32_t /*height*/) {
    return std::nullopt;
  }

  // Outcome of a targeted attack, when the strategy has one.
  virtual std::optional<bool> attack_succeeded() const { return std::nullopt; }
};

class NullStrategy final : public Strategy {
 public:
  std::string name() const override { return "null"; }
  StrategyDecision on_budget_point(const StrategyContext&, int) override { return {}; }
};

// Double-spend race on chain 0. The target is the first honest block mined
// after `target_after`; the adversary forks from its parent and releases
// the whole fork once the fork is strictly higher than every published
// chain while the target sits at least k_confirm deep in the public
// preferred chain.
class PrivateChainStrategy final : public Strategy {
 public:
  explicit PrivateChainStrategy(std::uint32_t k_confirm, double target_after = 0.0)
      : k_confirm_(k_confirm), target_after_(target_after) {
    if (k_confirm < 1) throw std::invalid_argument("private_chain: k_confirm >= 1");
  }

  std::string name() const override { return "private_chain"; }

  StrategyDecision on_budget_point(const StrategyContext&, int chain) override {
    if (chain != 0 || !target_ || done_) return {};
    return {fork_tip_, {}};
  }

  void on_block_mined(const StrategyContext& ctx, int chain, BlockId id,
                      std::vector<Publication>& out) override {
    if (chain != 0 || done_) return;
    const Block& b = ctx.chain(0).at(id);
    if (b.honest()) {
      if (!target_ && b.mined_time > target_after_) {
        target_ = id;
        fork_tip_ = b.parent;
      }
    } else {
      fork_tip_ = id;
      fork_.push_back(id);
    }
    if (target_ && ready(ctx)) {
      for (BlockId f : fork_) out.push_back({0, f, ctx.now});
      done_ = true;
      success_ = true;
    }
  }

  std::optional<bool> attack_succeeded() const override {
    if (!target_) return std::nullopt;
    return success_;
  }

 private:
  bool ready(const StrategyContext& ctx) const {
    const BlockStore& store = ctx.chain(0);
    const ChainView& view = ctx.view(0);
    if (fork_.empty() || store.height(fork_tip_) <= view.max_height()) return false;
    const BlockId pub_tip = view.preferred();
    if (!store.is_ancestor(*target_, pub_tip)) return false;
    return store.height(pub_tip) - store.height(*target_) + 1 >= k_confirm_;
  }

  std::uint32_t k_confirm_;
  double target_after_;
  std::optional<BlockId> target_;
  BlockId fork_tip_;
  std::vector<BlockId> fork_;
  bool done_ = false;
  bool success_ = false;
};

// Lead-based withholding on chain 0: keep a private branch, answer each
// honest block by releasing just enough of it, race at equal height.
class SelfishMiningStrategy final : public Strategy {
 public:
  std::string name() const override { return "selfish_mining"; }

  StrategyDecision on_budget_point(const StrategyContext&, int chain) override {
    if (chain != 0) return {};
    return {private_tip_, {}};
  }

  void on_block_mined(const StrategyContext& ctx, int chain, BlockId id,
                      std::vector<Publication>& out) override {
    if (chain != 0) return;
    const BlockStore& store = ctx.chain(0);
    const ChainView& view = ctx.view(0);
    if (!store.at(id).honest()) {
      private_tip_ = id;
      withheld_.push_back(id);
      if (racing_) {
        release_up_to(store.height(id), ctx, out);
        racing_ = false;
      }
      return;
    }
    const std::uint32_t pub = view.max_height();
    const std::uint32_t priv = store.height(private_tip_);
    if (priv < pub) {
      private_tip_ = view.preferred();
      withheld_.clear();
      racing_ = false;
    } else if (priv == pub) {
      release_up_to(pub, ctx, out);
      racing_ = true;
    } else if (priv == pub + 1) {
      release_up_to(priv, ctx, out);
    } else {
      release_up_to(pub, ctx, out);
    }
  }

  std::optional<BlockId> steer_honest(const StrategyContext& ctx, int chain,
                                      std::span<const BlockId> candidates) override {
    const BlockStore& store = ctx.chain(chain);
    std::optional<BlockId> best;
    for (BlockId c : candidates) {
      if (store.at(c).honest()) continue;
      if (!best || store.height(c) > store.height(*best)) best = c;
    }
    return best;
  }

 private:
  void release_up_to(std::uint32_t h, const StrategyContext& ctx,
                     std::vector<Publication>& out) {
    const BlockStore& store = ctx.chain(0);
    std::size_t i = 0;
    while (i < withheld_.size() && store.height(withheld_[i]) <= h) {
      out.push_back({0, withheld_[i], ctx.now});
      ++i;
    }
    withheld_.erase(withheld_.begin(), withheld_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  BlockId private_tip_ = kGenesis;
  std::vector<BlockId> withheld_;
  bool racing_ = false;
};

// Mines at every budget point of every chain on the honest preferred tip,
// publishes at once, and leaves out all votes and reference links.
class CensorVotesStrategy final : public Strategy {
 public:
  std::string name() const override { return "censor_votes"; }

  StrategyDecision on_budget_point(const StrategyContext& ctx, int chain) override {
    return {ctx.view(chain).preferred(), {}};
  }

  void on_block_mined(const StrategyContext& ctx, int chain, BlockId id,
                      std::vector<Publication>& out) override {
    if (!ctx.chain(chain).at(id).honest()) out.push_back({chain, id, ctx.now});
  }

  bool censors(int) const override { return true; }
};

struct StrategySpec {
  std::string name = "null";
  std::map<std::string, double> params;
};

inline double spec_param(const StrategySpec& spec, const std::string& key,
                         double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

// Accepted names: null, private_chain (k_confirm, target_after),
// selfish_mining, censor_votes. Hyphens may stand in for underscores.
inline std::unique_ptr<Strategy> make_strategy(const StrategySpec& spec) {
  std::string name = spec.name;
  for (char& c : name) {
    if (c == '-') c = '_';
  }
  if (name == "null") return std::make_unique<NullStrategy>();
  if (name == "private_chain") {
    const double k = spec_param(spec, "k_confirm", 6.0);
    if (!(k >= 1.0) || k != std::floor(k)) {
      throw std::invalid_argument("private_chain: k_confirm must be a positive integer");
    }
    return std::make_unique<PrivateChainStrategy>(static_cast<std::uint32_t>(k),
                                                  spec_param(spec, "target_after", 0.0));
  }
  if (name == "selfish_mining") return std::make_unique<SelfishMiningStrategy>();
  if (name == "censor_votes") return std::make_unique<CensorVotesStrategy>();
  throw std::invalid_argument("unknown strategy: " + spec.name);
}

}  // namespace backbone

#endif  // BACKBONE_ADVERSARY_HPP_
