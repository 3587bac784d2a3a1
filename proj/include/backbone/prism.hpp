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

#ifndef BACKBONE_PRISM_HPP_
#define BACKBONE_PRISM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "backbone/analysis.hpp"
#include "backbone/bounds.hpp"
#include "backbone/chain_store.hpp"
#include "backbone/params.hpp"
#include "backbone/trace.hpp"

namespace backbone {

// Block type picked by a uniform hash value u in [0, 1): proposer (0) or
// voter chain j, each owning a slice of width 1/(m+1).
inline int sortition(double u, int m) {
  if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("sortition: u must lie in [0, 1)");
  const int j = static_cast<int>(std::floor(u * (m + 1)));
  return std::min(j, m);
}

// R_h for every proposer height: earliest publication among proposer
// blocks at height h (kNever when all are withheld).
inline std::vector<double> first_publication_times(const BlockStore& proposers) {
  std::vector<double> r;
  for (const Block& b : proposers.blocks()) {
    const std::uint32_t h = proposers.height(b.id);
    if (r.size() <= h) r.resize(h + 1, kNever);
    r[h] = std::min(r[h], b.publish_time);
  }
  return r;
}

inline std::optional<double> first_publication_time(const Trace& trace, std::uint32_t h) {
  const auto r = first_publication_times(trace.chain(0));
  if (h >= r.size() || r[h] == kNever) return std::nullopt;
  return r[h];
}

// Earliest-published proposer at height h (ties: lowest id).
inline std::optional<BlockId> earliest_proposer(const BlockStore& proposers, std::uint32_t h,
                                                double by = kNever) {
  std::optional<BlockId> best;
  for (const Block& b : proposers.blocks()) {
    if (proposers.height(b.id) != h || !b.published_by(by)) continue;
    if (!best || std::pair(b.publish_time, b.id.value) <
                     std::pair(proposers.at(*best).publish_time, best->value)) {
      best = b.id;
    }
  }
  return best;
}

// Votes an honest voter block should carry, recomputed from the trace:
// every height with R_h <= T - Delta that no ancestor voted on, each for
// the earliest-published proposer at that height.
inline std::vector<Vote> honest_votes(const Trace& trace, BlockRef voter) {
  const BlockStore& store = trace.chain(voter.chain);
  const BlockStore& proposers = trace.chain(0);
  const Block& b = store.at(voter.id);
  std::set<std::uint32_t> voted;
  for (BlockId cur = b.parent;; cur = store.at(cur).parent) {
    for (const Vote& v : store.at(cur).votes) voted.insert(v.height);
    if (cur == kGenesis) break;
  }
  const auto r = first_publication_times(proposers);
  const double cutoff = b.mined_time - trace.params.delta_net;
  std::vector<Vote> out;
  for (std::uint32_t h = 1; h < r.size(); ++h) {
    if (!(r[h] <= cutoff) || voted.count(h)) continue;
    out.push_back({h, *earliest_proposer(proposers, h)});
  }
  return out;
}

// Outgoing edges of a block in the block DAG: parent, reference links and
// voted proposers.
template <typename F>
void for_each_edge(const Trace& trace, BlockRef ref, F&& f) {
  const Block& b = trace.block(ref);
  if (b.id != kGenesis) f(BlockRef{ref.chain, b.parent});
  for (const BlockRef& r : b.refs) f(r);
  for (const Vote& v : b.votes) f(BlockRef{0, v.proposer});
}

// Blocks reachable from `roots` (inclusive).
inline std::set<BlockRef> reachable(const Trace& trace, std::span<const BlockRef> roots) {
  std::set<BlockRef> seen(roots.begin(), roots.end());
  std::vector<BlockRef> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    const BlockRef cur = stack.back();
    stack.pop_back();
    for_each_edge(trace, cur, [&](BlockRef next) {
      if (seen.insert(next).second) stack.push_back(next);
    });
  }
  return seen;
}

// Reference links an honest proposer mined at T should carry: blocks
// published by T - Delta that are reachable neither from its parent nor
// from another such block.
inline std::vector<BlockRef> reference_links(const Trace& trace, BlockId proposer) {
  const Block& b = trace.chain(0).at(proposer);
  const double cutoff = b.mined_time - trace.params.delta_net;
  const BlockRef parent{0, b.parent};
  const auto covered = reachable(trace, std::span<const BlockRef>(&parent, 1));
  std::vector<BlockRef> candidates;
  for (const BlockStore& store : trace.chains) {
    for (const Block& c : store.blocks()) {
      const BlockRef ref{store.chain(), c.id};
      if (c.published_by(cutoff) && c.mined_time < b.mined_time && !covered.count(ref) &&
          !(ref.chain == 0 && ref.id == proposer)) {
        candidates.push_back(ref);
      }
    }
  }
  std::set<BlockRef> below;
  for (const BlockRef& c : candidates) {
    std::vector<BlockRef> next;
    for_each_edge(trace, c, [&](BlockRef n) { next.push_back(n); });
    for (const BlockRef& r : reachable(trace, next)) below.insert(r);
  }
  std::vector<BlockRef> refs;
  for (const BlockRef& c : candidates) {
    if (!below.count(c)) refs.push_back(c);
  }
  return refs;
}

inline constexpr std::uint32_t kNoVote = 0xFFFFFFFFu;

// First (lowest) vote per proposer height along the lineage of `tip`,
// heights 0..n; kNoVote where none.
inline std::vector<std::uint32_t> first_votes(const BlockStore& voters, BlockId tip,
                                              std::uint32_t n) {
  std::vector<std::uint32_t> out(n + 1, kNoVote);
  for (BlockId cur = tip;; cur = voters.at(cur).parent) {
    const Block& b = voters.at(cur);
    for (auto it = b.votes.rbegin(); it != b.votes.rend(); ++it) {
      if (it->height <= n) out[it->height] = it->proposer.value;
    }
    if (cur == kGenesis) break;
  }
  return out;
}

struct LeaderSequence {
  double elected_at = 0.0;
  std::vector<BlockId> leaders;   // index = height; leaders[0] is genesis
  std::vector<BlockId> electors;  // voter tip per chain 1..m (index j-1)

  std::uint32_t height() const { return static_cast<std::uint32_t>(leaders.size() - 1); }
};

class NoCredibleVoterTip : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct LeaderKey {
  std::uint32_t votes;
  double publish_time;
  std::uint32_t id;
};

inline bool better_leader(const LeaderKey& a, const LeaderKey& b) {
  if (a.votes != b.votes) return a.votes > b.votes;
  if (a.publish_time != b.publish_time) return a.publish_time < b.publish_time;
  return a.id < b.id;
}

}  // namespace detail

// Tallies one vote per voter chain (`choices`, kNoVote for none) over the
// proposers of one height published by t; other targets do not count.
inline BlockId elect(const BlockStore& proposers, std::span<const std::uint32_t> choices,
                     std::span<const BlockId> published_at_h) {
  std::map<std::uint32_t, std::uint32_t> tally;
  for (BlockId p : published_at_h) tally[p.value] = 0;
  for (std::uint32_t c : choices) {
    if (c == kNoVote) continue;
    auto it = tally.find(c);
    if (it != tally.end()) ++it->second;
  }
  std::optional<detail::LeaderKey> best;
  for (const auto& [id, votes] : tally) {
    const detail::LeaderKey key{votes, proposers.at(BlockId{id}).publish_time, id};
    if (!best || detail::better_leader(key, *best)) best = key;
  }
  return BlockId{best->id};
}

// Proposer blocks of each height published by t, for heights 0..n.
inline std::vector<std::vector<BlockId>> proposers_by_height(const BlockStore& proposers,
                                                             double t, std::uint32_t n) {
  std::vector<std::vector<BlockId>> out(n + 1);
  for (const Block& b : proposers.blocks()) {
    const std::uint32_t h = proposers.height(b.id);
    if (h <= n && b.published_by(t)) out[h].push_back(b.id);
  }
  return out;
}

// The leader sequence at t elected by one credible tip per voter chain.
// Without `electors`, each chain uses its preferred credible tip.
inline LeaderSequence leader_sequence(const Trace& trace, double t,
                                      std::optional<std::vector<BlockId>> electors = std::nullopt) {
  const BlockStore& proposers = trace.chain(0);
  const double delta = trace.params.delta_net;
  const int m = static_cast<int>(trace.chains.size()) - 1;
  LeaderSequence seq;
  seq.elected_at = t;
  if (electors) {
    if (static_cast<int>(electors->size()) != m) {
      throw std::invalid_argument("leader_sequence: one elector per voter chain");
    }
    seq.electors = *electors;
  } else {
    for (int j = 1; j <= m; ++j) {
      const auto tips = credible_tips(trace.chain(j), t, delta);
      if (tips.empty()) throw NoCredibleVoterTip("chain " + std::to_string(j));
      seq.electors.push_back(preferred_tip(trace.chain(j), tips));
    }
  }
  const std::uint32_t n = max_published_height(proposers, t - delta);
  std::vector<std::vector<std::uint32_t>> maps;
  for (int j = 1; j <= m; ++j) {
    maps.push_back(first_votes(trace.chain(j), seq.electors[static_cast<std::size_t>(j - 1)], n));
  }
  const auto at_height = proposers_by_height(proposers, t, n);
  seq.leaders.push_back(kGenesis);
  std::vector<std::uint32_t> choices(static_cast<std::size_t>(m));
  for (std::uint32_t h = 1; h <= n; ++h) {
    for (int j = 0; j < m; ++j) choices[static_cast<std::size_t>(j)] = maps[static_cast<std::size_t>(j)][h];
    seq.leaders.push_back(elect(proposers, choices, at_height[h]));
  }
  return seq;
}

// Every leader reachable at each height when each voter chain may elect
// through any of its t-credible tips. Exact: tip choices are independent
// across chains, so the achievable vote vectors at one height form a
// product set.
struct LeaderOptions {
  double t = 0.0;
  std::uint32_t n = 0;
  std::vector<std::vector<BlockId>> at;  // sorted, per height 0..n
  // Distinct first-vote maps per voter chain.
  std::vector<std::vector<std::vector<std::uint32_t>>> maps;
  bool truncated = false;
};

inline LeaderOptions leader_options(const Trace& trace, double t,
                                    std::size_t product_cap = 1u << 14) {
  const BlockStore& proposers = trace.chain(0);
  const double delta = trace.params.delta_net;
  const int m = static_cast<int>(trace.chains.size()) - 1;
  LeaderOptions opt;
  opt.t = t;
  opt.n = max_published_height(proposers, t - delta);
  for (int j = 1; j <= m; ++j) {
    std::set<std::vector<std::uint32_t>> distinct;
    for (BlockId tip : credible_tips(trace.chain(j), t, delta)) {
      distinct.insert(first_votes(trace.chain(j), tip, opt.n));
    }
    opt.maps.emplace_back(distinct.begin(), distinct.end());
  }
  const auto at_height = proposers_by_height(proposers, t, opt.n);
  opt.at.resize(opt.n + 1);
  opt.at[0] = {kGenesis};
  std::vector<std::uint32_t> choices(static_cast<std::size_t>(m));
  for (std::uint32_t h = 1; h <= opt.n; ++h) {
    std::vector<std::vector<std::uint32_t>> sets;
    std::size_t product = 1;
    for (int j = 0; j < m; ++j) {
      std::set<std::uint32_t> s;
      for (const auto& map : opt.maps[static_cast<std::size_t>(j)]) s.insert(map[h]);
      sets.emplace_back(s.begin(), s.end());
      product *= sets.back().size();
      if (product > product_cap) break;
    }
    std::set<BlockId> leaders;
    if (product > product_cap) {
      opt.truncated = true;
      leaders.insert(at_height[h].begin(), at_height[h].end());
    } else {
      std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
      for (;;) {
        for (int j = 0; j < m; ++j) {
          choices[static_cast<std::size_t>(j)] = sets[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
        }
        leaders.insert(elect(proposers, choices, at_height[h]));
        int j = 0;
        while (j < m && ++idx[static_cast<std::size_t>(j)] == sets[static_cast<std::size_t>(j)].size()) {
          idx[static_cast<std::size_t>(j)] = 0;
          ++j;
        }
        if (j == m) break;
      }
    }
    opt.at[h].assign(leaders.begin(), leaders.end());
  }
  return opt;
}

// Distinct full leader sequences from the product of per-chain vote maps,
// stopping after `cap` combinations.
inline std::vector<std::vector<BlockId>> enumerate_leader_sequences(
    const Trace& trace, const LeaderOptions& opt, std::size_t cap, bool& truncated) {
  const BlockStore& proposers = trace.chain(0);
  const int m = static_cast<int>(opt.maps.size());
  const auto at_height = proposers_by_height(proposers, opt.t, opt.n);
  std::set<std::vector<BlockId>> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  std::vector<std::uint32_t> choices(static_cast<std::size_t>(m));
  std::size_t visited = 0;
  truncated = false;
  for (;;) {
    if (visited++ == cap) {
      truncated = true;
      break;
    }
    std::vector<BlockId> seq{kGenesis};
    for (std::uint32_t h = 1; h <= opt.n; ++h) {
      for (int j = 0; j < m; ++j) {
        choices[static_cast<std::size_t>(j)] =
            opt.maps[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]][h];
      }
      seq.push_back(elect(proposers, choices, at_height[h]));
    }
    out.insert(std::move(seq));
    int j = 0;
    while (j < m && ++idx[static_cast<std::size_t>(j)] == opt.maps[static_cast<std::size_t>(j)].size()) {
      idx[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == m) break;
  }
  return {out.begin(), out.end()};
}

struct LedgerEntry {
  TxId tx = 0;
  std::uint32_t epoch = 0;
};

struct EpochRecord {
  BlockId leader;
  std::vector<BlockRef> blocks;  // topological order, dependencies first
};

struct Ledger {
  std::vector<LedgerEntry> entries;
  std::vector<EpochRecord> epochs;  // epochs[h-1] for leader height h

  std::vector<TxId> txs() const {
    std::vector<TxId> out;
    for (const LedgerEntry& e : entries) out.push_back(e.tx);
    return out;
  }
  bool contains(TxId tx) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const LedgerEntry& e) { return e.tx == tx; });
  }
};

// Keeps each transaction's first occurrence unless it conflicts with a
// transaction already kept.
inline std::vector<LedgerEntry> sanitize(const Trace& trace, std::span<const LedgerEntry> raw) {
  std::set<TxId> seen;
  std::set<Outpoint> spent;
  std::vector<LedgerEntry> out;
  for (const LedgerEntry& e : raw) {
    if (!seen.insert(e.tx).second) continue;
    const Transaction& tx = trace.tx(e.tx);
    if (std::any_of(tx.inputs.begin(), tx.inputs.end(),
                    [&](Outpoint o) { return spent.count(o) > 0; })) {
      continue;
    }
    spent.insert(tx.inputs.begin(), tx.inputs.end());
    out.push_back(e);
  }
  return out;
}

// Epoch h holds every block reachable from leader b_h (itself included)
// that no earlier epoch holds, in topological order with ties by
// (chain, id). The ledger concatenates their transactions and sanitizes.
inline Ledger build_ledger(const Trace& trace, std::span<const BlockId> leaders) {
  Ledger ledger;
  std::set<BlockRef> included;
  std::vector<LedgerEntry> raw;
  for (std::size_t h = 1; h < leaders.size(); ++h) {
    EpochRecord epoch;
    epoch.leader = leaders[h];
    std::set<BlockRef> fresh;
    std::vector<BlockRef> stack;
    const BlockRef root{0, leaders[h]};
    if (!included.count(root)) {
      fresh.insert(root);
      stack.push_back(root);
    }
    while (!stack.empty()) {
      const BlockRef cur = stack.back();
      stack.pop_back();
      for_each_edge(trace, cur, [&](BlockRef next) {
        if (!included.count(next) && fresh.insert(next).second) stack.push_back(next);
      });
    }
    std::map<BlockRef, int> pending;
    std::map<BlockRef, std::vector<BlockRef>> dependents;
    for (const BlockRef& b : fresh) {
      std::set<BlockRef> deps;
      for_each_edge(trace, b, [&](BlockRef d) {
        if (fresh.count(d)) deps.insert(d);
      });
      pending[b] = static_cast<int>(deps.size());
      for (const BlockRef& d : deps) dependents[d].push_back(b);
    }
    std::priority_queue<BlockRef, std::vector<BlockRef>, std::greater<>> ready;
    for (const auto& [b, n] : pending) {
      if (n == 0) ready.push(b);
    }
    while (!ready.empty()) {
      const BlockRef b = ready.top();
      ready.pop();
      epoch.blocks.push_back(b);
      for (TxId tx : trace.block(b).txs) raw.push_back({tx, static_cast<std::uint32_t>(h)});
      for (const BlockRef& d : dependents[b]) {
        if (--pending[d] == 0) ready.push(d);
      }
    }
    included.insert(fresh.begin(), fresh.end());
    ledger.epochs.push_back(std::move(epoch));
  }
  ledger.entries = sanitize(trace, raw);
  return ledger;
}

inline Ledger build_ledger(const Trace& trace, const LeaderSequence& seq) {
  return build_ledger(trace, seq.leaders);
}

// Publication facts about transactions: earliest publication of a block
// carrying each one, and who shares an input with whom.
class TxIndex {
 public:
  explicit TxIndex(const Trace& trace) : first_pub_(trace.transactions.size(), kNever) {
    for (const BlockStore& store : trace.chains) {
      for (const Block& b : store.blocks()) {
        for (TxId tx : b.txs) first_pub_[tx] = std::min(first_pub_[tx], b.publish_time);
      }
    }
    for (const Transaction& tx : trace.transactions) {
      for (Outpoint o : tx.inputs) spenders_[o].push_back(tx.id);
    }
    txs_ = &trace.transactions;
  }

  double first_published(TxId tx) const { return first_pub_.at(tx); }

  bool credible_until(TxId tx, double t) const {
    if (!(first_pub_.at(tx) <= t)) return false;
    for (Outpoint o : (*txs_)[tx].inputs) {
      for (TxId other : spenders_.at(o)) {
        if (other != tx && first_pub_[other] <= t) return false;
      }
    }
    return true;
  }

 private:
  std::vector<double> first_pub_;
  std::unordered_map<Outpoint, std::vector<TxId>> spenders_;
  const std::vector<Transaction>* txs_ = nullptr;
};

inline bool tx_credible_until(const Trace& trace, TxId tx, double t) {
  return TxIndex(trace).credible_until(tx, t);
}

struct PrismCheck {
  CheckResult result;
  bool vacuous = false;  // theorem's time window falls before 0
  double s = 0.0;        // growth start, leader-prefix R_h cutoff or tx r
  std::uint32_t h = 0;   // leader-prefix height
  bool truncated = false;
};

struct PrismReport {
  PrismCheck growth;
  PrismCheck quality;
  PrismCheck leader_prefix;
  PrismCheck tx;
};

class PrismAnalysis {
 public:
  PrismAnalysis(const Trace& trace, const ProtocolParams& p)
      : trace_(trace), params_(p), derived_(derive(p.alpha, p.delta_net, p.delta_typ)) {
    for (const BlockStore& store : trace.chains) {
      chains_.emplace_back(std::make_unique<ChainAnalysis>(store, p));
    }
    r_ = first_publication_times(trace.chain(0));
  }

  int m() const { return static_cast<int>(trace_.chains.size()) - 1; }
  const ChainAnalysis& chain(int j) const { return *chains_[static_cast<std::size_t>(j)]; }

  bool proxy(int j, double t, double k) const {
    bool long_enough = false;
    return chain(j).quality_event(t, k, long_enough);
  }

  PrismCheck growth(double t, std::uint32_t k) const {
    PrismCheck c;
    const double gc = derived_.growth_coeff;
    c.s = std::max(0.0, t - k / (gc * derived_.g * params_.alpha));
    const double d = params_.delta_net;
    c.result.preconditions_met =
        t - c.s > min_event_interval(params_.delta_net, params_.delta_typ);
    const ChainAnalysis& a = chain(0);
    c.result.event_held =
        c.s + d < t - d &&
        good_event(a.counter().counts(c.s + d, t - d), c.s + d, t - d, params_).all();
    const double need = static_cast<double>(a.credibility().max_credible_height(c.s)) +
                        gc * derived_.g * params_.alpha * (t - c.s);
    c.result.predicate_held =
        static_cast<double>(a.credibility().min_credible_height(t, d)) >= need;
    return c;
  }

  PrismCheck quality(double t, std::uint32_t k) const {
    PrismCheck c;
    bool long_enough = false;
    c.result.event_held = chain(0).quality_event(t, k, long_enough);
    c.result.preconditions_met = long_enough && chain(0).depth_preconditions(t, k);
    const LeaderOptions opt = leader_options(trace_, t);
    const std::uint32_t lo = opt.n > k ? opt.n - k + 1 : 1;
    std::uint32_t worst = 0;
    for (std::uint32_t h = lo; h <= opt.n; ++h) {
      if (std::any_of(opt.at[h].begin(), opt.at[h].end(),
                      [&](BlockId b) { return !trace_.chain(0).at(b).honest(); })) {
        ++worst;
      }
    }
    if (worst > derived_.g * k) {
      bool truncated = false;
      worst = 0;
      for (const auto& seq : enumerate_leader_sequences(trace_, opt, 1u << 12, truncated)) {
        std::uint32_t adv = 0;
        for (std::uint32_t h = lo; h <= opt.n; ++h) adv += trace_.chain(0).at(seq[h]).honest() ? 0 : 1;
        worst = std::max(worst, adv);
      }
      c.truncated = truncated;
    }
    c.result.predicate_held = worst <= derived_.g * k;
    return c;
  }

  // Highest h whose R_h is at most `cutoff`; 0 when none.
  std::uint32_t settled_height(double cutoff) const {
    std::uint32_t h = 0;
    while (h + 1 < r_.size() && r_[h + 1] <= cutoff) ++h;
    return h;
  }

  PrismCheck leader_prefix(double t, std::uint32_t k, std::span<const double> grid) const {
    PrismCheck c;
    const double gc = derived_.growth_coeff;
    const double g = derived_.g;
    c.s = t - k / (gc * (1.0 - g) * g * params_.alpha) - params_.delta_net;
    c.h = settled_height(c.s);
    c.vacuous = c.s < 0.0 || c.h == 0;
    bool all = true;
    bool long_enough = true;
    for (int j = 1; j <= m(); ++j) {
      bool le = false;
      all = chain(j).quality_event(t, k, le) && all;
      long_enough = long_enough && le;
    }
    c.result.event_held = all;
    c.result.preconditions_met = long_enough && chain(0).depth_preconditions(t, k) && g < 1.0;
    c.result.predicate_held = true;
    if (c.vacuous) return c;
    const LeaderOptions at_t = leader_options(trace_, t);
    c.truncated = at_t.truncated;
    std::vector<BlockId> prefix;
    for (std::uint32_t i = 1; i <= c.h; ++i) {
      if (at_t.at[i].size() != 1) {
        c.result.predicate_held = false;
        return c;
      }
      prefix.push_back(at_t.at[i].front());
    }
    for (double r : with_endpoints(t, grid)) {
      const LeaderOptions later = leader_options(trace_, r);
      c.truncated = c.truncated || later.truncated;
      for (std::uint32_t i = 1; i <= c.h; ++i) {
        if (later.at[i].size() != 1 || later.at[i].front() != prefix[i - 1]) {
          c.result.predicate_held = false;
          return c;
        }
      }
    }
    return c;
  }

  PrismCheck tx_permanence(double t, std::uint32_t k, std::span<const double> grid,
                           std::size_t sequence_cap = 64) const {
    PrismCheck c;
    const double gc = derived_.growth_coeff;
    const double g = derived_.g;
    c.s = t - 2.0 * (k + 1.0) / (gc * gc * g * g * (1.0 - g) * (1.0 - g) * params_.alpha) -
          params_.delta_net;
    c.vacuous = !(c.s >= 0.0);
    bool all = true;
    bool long_enough = true;
    for (int j = 0; j <= m(); ++j) {
      bool le = false;
      all = chain(j).quality_event(t, k, le) && all;
      long_enough = long_enough && le;
    }
    c.result.event_held = all;
    c.result.preconditions_met = long_enough && chain(0).depth_preconditions(t, k) && g < 1.0;
    c.result.predicate_held = true;
    if (c.vacuous) return c;
    const TxIndex index(trace_);
    std::vector<TxId> watched;
    for (TxId tx = 0; tx < trace_.transactions.size(); ++tx) {
      if (index.first_published(tx) <= c.s && index.credible_until(tx, t)) watched.push_back(tx);
    }
    if (watched.empty()) return c;
    std::vector<double> times = with_endpoints(t, grid);
    times.insert(times.begin(), t);
    for (double r : times) {
      const LeaderOptions opt = leader_options(trace_, r);
      bool truncated = false;
      for (const auto& seq : enumerate_leader_sequences(trace_, opt, sequence_cap, truncated)) {
        const Ledger ledger = build_ledger(trace_, seq);
        std::set<TxId> kept;
        for (const LedgerEntry& e : ledger.entries) kept.insert(e.tx);
        for (TxId tx : watched) {
          if (!kept.count(tx)) {
            c.result.predicate_held = false;
            return c;
          }
        }
      }
      c.truncated = c.truncated || truncated;
    }
    return c;
  }

  PrismReport check_all(double t, std::uint32_t k, std::span<const double> grid) const {
    return {growth(t, k), quality(t, k), leader_prefix(t, k, grid), tx_permanence(t, k, grid)};
  }

 private:
  std::vector<double> with_endpoints(double t, std::span<const double> grid) const {
    std::vector<double> out;
    for (double r : grid) {
      if (r >= t) out.push_back(r);
    }
    out.push_back(params_.horizon);
    return out;
  }

  const Trace& trace_;
  ProtocolParams params_;
  DerivedParams derived_;
  std::vector<std::unique_ptr<ChainAnalysis>> chains_;
  std::vector<double> r_;
};

inline PrismReport check_prism_theorems(const Trace& trace, double t, std::uint32_t k,
                                        const ProtocolParams& p,
                                        std::span<const double> grid = {}) {
  return PrismAnalysis(trace, p).check_all(t, k, grid);
}

}  // namespace backbone

#endif  // BACKBONE_PRISM_HPP_
