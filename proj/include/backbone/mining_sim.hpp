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

#ifndef BACKBONE_MINING_SIM_HPP_
#define BACKBONE_MINING_SIM_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "backbone/adversary.hpp"
#include "backbone/chain_store.hpp"
#include "backbone/chain_view.hpp"
#include "backbone/params.hpp"
#include "backbone/rng.hpp"
#include "backbone/trace.hpp"

namespace backbone {

class StrategyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimOptions {
  HonestTieBreak tie_break = HonestTieBreak::kEarliest;
  // Transactions per block carrying a payload; negative picks 2 for Prism
  // runs and 0 for a single chain.
  int txs_per_block = -1;
  double honest_conflict_rate = 0.1;
  double adversarial_conflict_rate = 0.5;
};

inline void validate_params(const ProtocolParams& p) {
  if (!(p.alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(p.beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(p.delta_net >= 0.0)) throw std::invalid_argument("delta_net must be >= 0");
  if (p.m < 0) throw std::invalid_argument("m must be >= 0");
  if (!(p.horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
}

inline ArrivalSchedule sample_schedule(const ProtocolParams& p, std::uint64_t seed) {
  ArrivalSchedule s;
  for (int j = 0; j < p.chain_count(); ++j) {
    const auto chain = static_cast<std::uint64_t>(j);
    s.honest.push_back(sample_poisson_arrivals(
        p.alpha, p.horizon, stream_seed(seed, SeedStream::kHonest, chain)));
    s.adversarial.push_back(sample_poisson_arrivals(
        p.beta, p.horizon, stream_seed(seed, SeedStream::kAdversarial, chain)));
  }
  return s;
}

namespace detail {

// Synthetic UTXO workload. Most transactions spend fresh outputs; a
// configurable share re-spends an already spent one.
class TxGenerator {
 public:
  explicit TxGenerator(std::uint64_t seed) : gen_(seed) {
    for (int i = 0; i < 16; ++i) unspent_.push_back(next_outpoint_++);
  }

  TxId make(std::vector<Transaction>& registry, double conflict_rate) {
    Transaction tx;
    tx.id = registry.size();
    std::uniform_int_distribution<int> one_or_two(1, 2);
    std::bernoulli_distribution double_spend(conflict_rate);
    const int n_in = one_or_two(gen_);
    for (int i = 0; i < n_in; ++i) {
      if (!spent_.empty() && double_spend(gen_)) {
        tx.inputs.push_back(pick(spent_));
      } else if (!unspent_.empty()) {
        std::uniform_int_distribution<std::size_t> idx(0, unspent_.size() - 1);
        const std::size_t k = idx(gen_);
        tx.inputs.push_back(unspent_[k]);
        spent_.push_back(unspent_[k]);
        unspent_[k] = unspent_.back();
        unspent_.pop_back();
      } else {
        tx.inputs.push_back(next_outpoint_);
        spent_.push_back(next_outpoint_++);
      }
    }
    std::sort(tx.inputs.begin(), tx.inputs.end());
    tx.inputs.erase(std::unique(tx.inputs.begin(), tx.inputs.end()), tx.inputs.end());
    const int n_out = one_or_two(gen_);
    for (int i = 0; i < n_out; ++i) {
      tx.outputs.push_back(next_outpoint_);
      unspent_.push_back(next_outpoint_++);
    }
    registry.push_back(std::move(tx));
    return registry.back().id;
  }

 private:
  Outpoint pick(const std::vector<Outpoint>& pool) {
    std::uniform_int_distribution<std::size_t> idx(0, pool.size() - 1);
    return pool[idx(gen_)];
  }

  std::mt19937_64 gen_;
  std::vector<Outpoint> unspent_;
  std::vector<Outpoint> spent_;
  Outpoint next_outpoint_ = 0;
};

class Simulator {
 public:
  Simulator(const ProtocolParams& params, const ArrivalSchedule& schedule,
            Strategy& strategy, std::uint64_t seed, const SimOptions& opts)
      : params_(params),
        strategy_(strategy),
        opts_(opts),
        prism_(params.m > 0),
        txs_(stream_seed(seed, SeedStream::kTransactions, 0)) {
    validate_params(params);
    trace_.params = params;
    trace_.tie_break = opts.tie_break;
    trace_.seed = seed;
    trace_.strategy = strategy.name();
    trace_.schedule = schedule;
    if (opts_.txs_per_block < 0) opts_.txs_per_block = prism_ ? 2 : 0;
    const int n = params.chain_count();
    if (static_cast<int>(schedule.honest.size()) != n ||
        static_cast<int>(schedule.adversarial.size()) != n) {
      throw std::invalid_argument("schedule does not match chain count");
    }
    trace_.chains.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) trace_.chains.emplace_back(j);
    views_.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) views_.emplace_back(trace_.chains[static_cast<std::size_t>(j)]);
    voted_.assign(static_cast<std::size_t>(n), std::vector<std::uint32_t>{0});
    watermark_.push_back(-1.0);
    stamps_.assign(static_cast<std::size_t>(n), std::vector<std::uint32_t>{0});
    for (int j = 0; j < n; ++j) released_.push_back({0.0, BlockRef{j, kGenesis}});
  }

  Trace run() {
    std::vector<std::tuple<double, int, int>> arrivals;  // time, kind, chain
    for (int j = 0; j < params_.chain_count(); ++j) {
      for (double t : trace_.schedule.honest[static_cast<std::size_t>(j)]) {
        arrivals.emplace_back(t, 0, j);
      }
      for (double t : trace_.schedule.adversarial[static_cast<std::size_t>(j)]) {
        arrivals.emplace_back(t, 1, j);
      }
    }
    std::sort(arrivals.begin(), arrivals.end());
    std::size_t next = 0;
    while (next < arrivals.size() || !pending_.empty()) {
      const bool take_pub =
          !pending_.empty() &&
          (next == arrivals.size() || std::get<0>(pending_.top()) <= std::get<0>(arrivals[next]));
      if (take_pub) {
        const auto [t, seq, chain, id] = pending_.top();
        pending_.pop();
        if (t > params_.horizon) continue;
        now_ = t;
        publish(chain, BlockId{id});
        continue;
      }
      const auto [t, kind, chain] = arrivals[next++];
      now_ = t;
      if (kind == 0) {
        honest_arrival(chain);
      } else {
        adversarial_arrival(chain);
      }
    }
    trace_.attack_success = strategy_.attack_succeeded();
    return std::move(trace_);
  }

 private:
  StrategyContext ctx() const {
    return StrategyContext{now_, params_, trace_.chains, views_};
  }

  BlockStore& store(int j) { return trace_.chains[static_cast<std::size_t>(j)]; }
  ChainView& view(int j) { return views_[static_cast<std::size_t>(j)]; }

  BlockId honest_parent(int j) {
    ChainView& v = view(j);
    switch (opts_.tie_break) {
      case HonestTieBreak::kEarliest:
        return v.preferred();
      case HonestTieBreak::kMaxDelay:
        v.lagged_height(now_ - params_.delta_net);
        return v.preferred_lagged();
      case HonestTieBreak::kAdversarySteered: {
        const auto candidates = v.credible_now(now_ - params_.delta_net);
        const auto pick = strategy_.steer_honest(ctx(), j, candidates);
        if (!pick) return v.preferred();
        if (std::find(candidates.begin(), candidates.end(), *pick) == candidates.end()) {
          throw StrategyViolation("steer_honest picked a non-credible tip on chain " +
                                  std::to_string(j));
        }
        return *pick;
      }
    }
    return v.preferred();
  }

  void honest_arrival(int j) {
    Block b;
    b.kind = BlockKind::kHonest;
    b.chain = j;
    b.parent = honest_parent(j);
    b.mined_time = now_;
    b.publish_time = now_;
    fill_payload(b, /*honest_rule=*/true, /*band=*/true);
    const BlockId id = append(std::move(b));
    publish(j, id);
    notify(j, id);
  }

  void adversarial_arrival(int j) {
    StrategyDecision d = strategy_.on_budget_point(ctx(), j);
    schedule(d.publish);
    if (!d.mine_on) return;
    if (!store(j).contains(*d.mine_on)) {
      throw StrategyViolation("unknown parent " + std::to_string(d.mine_on->value) +
                              " on chain " + std::to_string(j));
    }
    Block b;
    b.kind = BlockKind::kAdversarial;
    b.chain = j;
    b.parent = *d.mine_on;
    b.mined_time = now_;
    if (store(j).at(b.parent).mined_time >= now_) {
      throw StrategyViolation("non-causal parent on chain " + std::to_string(j));
    }
    fill_payload(b, !strategy_.censors(j), /*band=*/false);
    const BlockId id = append(std::move(b));
    notify(j, id);
  }

  BlockId append(Block b) {
    const int j = b.chain;
    const BlockId id = store(j).append(std::move(b));
    trace_.events.push_back({now_, EventKind::kMined, {j, id}});
    return id;
  }

  void notify(int j, BlockId id) {
    std::vector<Publication> out;
    strategy_.on_block_mined(ctx(), j, id, out);
    schedule(out);
  }

  void schedule(std::vector<Publication>& pubs) {
    std::sort(pubs.begin(), pubs.end(), [](const Publication& a, const Publication& b) {
      return std::tuple(a.time, a.chain, a.block) < std::tuple(b.time, b.chain, b.block);
    });
    for (const Publication& p : pubs) {
      if (p.chain < 0 || p.chain >= params_.chain_count()) {
        throw StrategyViolation("publication on unknown chain");
      }
      if (!store(p.chain).contains(p.block) || store(p.chain).at(p.block).honest()) {
        throw StrategyViolation("publication of an unknown or honest block");
      }
      if (!(p.time >= now_)) {
        throw StrategyViolation("publication scheduled in the past");
      }
      if (p.time == kNever) continue;
      pending_.emplace(p.time, seq_++, p.chain, p.block.value);
    }
  }

  void publish(int j, BlockId id) {
    if (!store(j).at(id).honest()) {
      try {
        store(j).publish(id, now_);
      } catch (const ChainStoreError& e) {
        throw StrategyViolation(std::string("bad publication: ") + e.what());
      }
    }
    view(j).on_published(id);
    released_.push_back({now_, BlockRef{j, id}});
    trace_.events.push_back({now_, EventKind::kPublished, {j, id}});
  }

  // Votes, reference links and transactions for a new block. Blocks that
  // skip the honest rule inherit their parent's vote and reference state.
  void fill_payload(Block& b, bool honest_rule, bool band) {
    const int j = b.chain;
    const auto next_index = store(j).size();
    if (prism_ && j > 0) {
      auto& voted = voted_[static_cast<std::size_t>(j)];
      std::uint32_t v = voted[b.parent.value];
      if (honest_rule) {
        ChainView& proposers = view(0);
        const std::uint32_t top = proposers.lagged_height(now_ - params_.delta_net);
        for (std::uint32_t h = v + 1; h <= top; ++h) {
          b.votes.push_back({h, proposers.first_published_at(h)});
          v = h;
        }
        while (band && proposers.has_height(v + 1) &&
               store(0).at(proposers.first_published_at(v + 1)).publish_time < now_) {
          const auto choice = strategy_.votes_in_band(ctx(), j, v + 1);
          if (!choice) break;
          const Block& p = store(0).at(*choice);
          if (store(0).height(*choice) != v + 1 || !(p.publish_time < now_)) {
            throw StrategyViolation("band vote for an ineligible proposer");
          }
          b.votes.push_back({v + 1, *choice});
          ++v;
        }
      }
      voted.resize(next_index + 1);
      voted[next_index] = v;
    }
    if (prism_ && j == 0) {
      double w = watermark_[b.parent.value];
      if (honest_rule) {
        b.refs = new_references(b.parent, now_ - params_.delta_net);
        w = now_ - params_.delta_net;
      }
      watermark_.resize(next_index + 1);
      watermark_[next_index] = w;
    }
    if (honest_rule) {
      const double rate =
          b.honest() ? opts_.honest_conflict_rate : opts_.adversarial_conflict_rate;
      for (int i = 0; i < opts_.txs_per_block; ++i) {
        b.txs.push_back(txs_.make(trace_.transactions, rate));
      }
    }
  }

  // Blocks published by `cutoff` that are not reachable from `parent` nor
  // from another such block. Everything published by the parent's
  // watermark is already reachable from the parent.
  std::vector<BlockRef> new_references(BlockId parent, double cutoff) {
    const double floor = watermark_[parent.value];
    auto first = std::upper_bound(
        released_.begin(), released_.end(), floor,
        [](double t, const std::pair<double, BlockRef>& e) { return t < e.first; });
    std::vector<BlockRef> candidates;
    double oldest = kNever;
    for (auto it = first; it != released_.end() && it->first <= cutoff; ++it) {
      const Block& c = trace_.block(it->second);
      if (c.mined_time >= now_) continue;
      candidates.push_back(it->second);
      oldest = std::min(oldest, c.mined_time);
    }
    if (candidates.empty()) return {};
    ++stamp_;
    std::vector<BlockRef> frontier;
    auto visit = [&](BlockRef r) {
      auto& marks = stamps_[static_cast<std::size_t>(r.chain)];
      if (marks.size() <= r.id.value) marks.resize(store(r.chain).size(), 0);
      if (marks[r.id.value] == stamp_) return;
      if (trace_.block(r).mined_time < oldest) return;
      marks[r.id.value] = stamp_;
      frontier.push_back(r);
    };
    auto expand = [&](BlockRef r) {
      const Block& x = trace_.block(r);
      if (x.id != kGenesis) visit({r.chain, x.parent});
      for (const BlockRef& ref : x.refs) visit(ref);
      for (const Vote& v : x.votes) visit({0, v.proposer});
    };
    visit({0, parent});
    for (const BlockRef& c : candidates) expand(c);
    while (!frontier.empty()) {
      const BlockRef r = frontier.back();
      frontier.pop_back();
      expand(r);
    }
    std::vector<BlockRef> refs;
    for (const BlockRef& c : candidates) {
      const auto& marks = stamps_[static_cast<std::size_t>(c.chain)];
      if (c.id.value < marks.size() && marks[c.id.value] == stamp_) continue;
      refs.push_back(c);
    }
    std::sort(refs.begin(), refs.end());
    return refs;
  }

  ProtocolParams params_;
  Strategy& strategy_;
  SimOptions opts_;
  bool prism_;
  TxGenerator txs_;
  Trace trace_;
  std::vector<ChainView> views_;
  double now_ = 0.0;
  std::uint64_t seq_ = 0;
  std::priority_queue<std::tuple<double, std::uint64_t, int, std::uint32_t>,
                      std::vector<std::tuple<double, std::uint64_t, int, std::uint32_t>>,
                      std::greater<>>
      pending_;
  std::vector<std::vector<std::uint32_t>> voted_;  // highest height voted, per voter block
  std::vector<double> watermark_;                  // per proposer block
  std::vector<std::pair<double, BlockRef>> released_;  // all chains, publication order
  std::vector<std::vector<std::uint32_t>> stamps_;
  std::uint32_t stamp_ = 0;
};

}  // namespace detail

// Runs one execution on a fixed arrival schedule.
inline Trace run_on_schedule(const ProtocolParams& params,
                             const ArrivalSchedule& schedule, Strategy& strategy,
                             std::uint64_t seed, const SimOptions& opts = {}) {
  return detail::Simulator(params, schedule, strategy, seed, opts).run();
}

// Samples every chain's honest and adversarial-budget arrivals from the
// seed, then runs the execution.
inline Trace run_simulation(const ProtocolParams& params, Strategy& strategy,
                            std::uint64_t seed, const SimOptions& opts = {}) {
  validate_params(params);
  return run_on_schedule(params, sample_schedule(params, seed), strategy, seed, opts);
}

}  // namespace backbone

#endif  // BACKBONE_MINING_SIM_HPP_
