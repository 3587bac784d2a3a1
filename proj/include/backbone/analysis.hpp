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

#ifndef BACKBONE_ANALYSIS_HPP_
#define BACKBONE_ANALYSIS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "backbone/bounds.hpp"
#include "backbone/chain_store.hpp"
#include "backbone/params.hpp"
#include "backbone/trace.hpp"

namespace backbone {

class IntervalTooShort : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class LonerFlag : std::uint8_t { kNo, kYes, kUnknown };

// Lagger/loner flags of one chain's honest blocks, in mining order.
// Genesis is an honest block mined at time 0: it is not listed, but it
// sits in the windows of blocks mined within Delta of the start.
struct HonestBlockFlags {
  std::vector<BlockId> blocks;
  std::vector<double> times;
  std::vector<std::uint8_t> lagger;
  std::vector<LonerFlag> loner;
};

// Windows [T - Delta, T + Delta] that run past `horizon` and hold no other
// observed block give an unknown loner flag.
inline HonestBlockFlags classify(const BlockStore& store, double delta_net,
                                 double horizon) {
  HonestBlockFlags f;
  std::vector<double> all{0.0};  // genesis
  for (const Block& b : store.blocks()) {
    if (b.id == kGenesis || !b.honest()) continue;
    f.blocks.push_back(b.id);
    f.times.push_back(b.mined_time);
    all.push_back(b.mined_time);
  }
  const std::size_t n = f.blocks.size();
  f.lagger.resize(n);
  f.loner.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = all[i + 1];
    const bool alone_before = !(all[i] >= t - delta_net);
    f.lagger[i] = alone_before ? 1 : 0;
    const bool has_next = i + 2 < all.size();
    const bool alone_after = !has_next || all[i + 2] > t + delta_net;
    if (!alone_before || !alone_after) {
      f.loner[i] = LonerFlag::kNo;
    } else if (!has_next && t + delta_net > horizon) {
      f.loner[i] = LonerFlag::kUnknown;
    } else {
      f.loner[i] = LonerFlag::kYes;
    }
  }
  return f;
}

inline HonestBlockFlags classify(const Trace& trace, int chain) {
  return classify(trace.chain(chain), trace.params.delta_net, trace.params.horizon);
}

struct IntervalCounts {
  std::int64_t n = 0;  // honest blocks
  std::int64_t x = 0;  // laggers
  std::int64_t y = 0;  // loners (unknown flags count as 0)
  std::int64_t z = 0;  // adversarial blocks

  friend bool operator==(const IntervalCounts&, const IntervalCounts&) = default;
};

// Prefix-count index over one chain for repeated (s, t] queries.
class ChainCounter {
 public:
  ChainCounter(const BlockStore& store, double delta_net, double horizon)
      : flags_(classify(store, delta_net, horizon)) {
    std::int64_t x = 0;
    std::int64_t y = 0;
    cum_x_.push_back(0);
    cum_y_.push_back(0);
    for (std::size_t i = 0; i < flags_.blocks.size(); ++i) {
      x += flags_.lagger[i];
      y += flags_.loner[i] == LonerFlag::kYes ? 1 : 0;
      cum_x_.push_back(x);
      cum_y_.push_back(y);
    }
    for (const Block& b : store.blocks()) {
      if (!b.honest()) adversarial_.push_back(b.mined_time);
    }
    const auto last = static_cast<std::size_t>(std::max(0.0, std::floor(horizon)));
    grid_.reserve(last + 1);
    for (std::size_t k = 0; k <= last; ++k) grid_.push_back(at(static_cast<double>(k)));
  }

  const HonestBlockFlags& flags() const { return flags_; }

  // Counts over (s, t]; zero when s >= t.
  IntervalCounts counts(double s, double t) const {
    if (!(s < t)) return {};
    return diff(at(s), at(t));
  }

  // Same as counts() for integer endpoints, served from the unit grid.
  IntervalCounts grid_counts(std::int64_t k, std::int64_t l) const {
    if (k >= l) return {};
    return diff(point(k), point(l));
  }

 private:
  struct Cum {
    std::int64_t n, x, y, z;
  };

  Cum at(double t) const {
    const auto hi = static_cast<std::size_t>(
        std::upper_bound(flags_.times.begin(), flags_.times.end(), t) - flags_.times.begin());
    const auto adv = std::upper_bound(adversarial_.begin(), adversarial_.end(), t) -
                     adversarial_.begin();
    return {static_cast<std::int64_t>(hi), cum_x_[hi], cum_y_[hi], adv};
  }

  Cum point(std::int64_t k) const {
    if (k >= 0 && static_cast<std::size_t>(k) < grid_.size()) {
      return grid_[static_cast<std::size_t>(k)];
    }
    return at(static_cast<double>(k));
  }

  static IntervalCounts diff(const Cum& a, const Cum& b) {
    return {b.n - a.n, b.x - a.x, b.y - a.y, b.z - a.z};
  }

  HonestBlockFlags flags_;
  std::vector<std::int64_t> cum_x_;
  std::vector<std::int64_t> cum_y_;
  std::vector<double> adversarial_;
  std::vector<Cum> grid_;
};

inline IntervalCounts interval_counts(const Trace& trace, int chain, double s,
                                      double t) {
  return ChainCounter(trace.chain(chain), trace.params.delta_net, trace.params.horizon)
      .counts(s, t);
}

struct GoodEvent {
  bool e1 = false;
  bool e2 = false;
  bool e3 = false;
  bool e4 = false;

  bool all() const { return e1 && e2 && e3 && e4; }
};

inline GoodEvent good_event(const IntervalCounts& c, double s, double t,
                            const ProtocolParams& p, double delta) {
  const double len = t - s;
  const double g = std::exp(-p.alpha * p.delta_net);
  const double a = p.alpha;
  const auto n = static_cast<double>(c.n);
  GoodEvent e;
  // Expanded so that exact boundaries such as 1.1 * 100 do not round upward.
  const double base = len * a;
  e.e1 = base - base * delta < n && n < base + base * delta;
  e.e2 = (1.0 - delta) * len * g * a < static_cast<double>(c.x);
  e.e3 = (1.0 - delta) * len * g * g * a < static_cast<double>(c.y);
  e.e4 = static_cast<double>(c.z) < len * p.beta + len * g * g * a * delta;
  return e;
}

inline GoodEvent good_event(const IntervalCounts& c, double s, double t,
                            const ProtocolParams& p) {
  return good_event(c, s, t, p, p.delta_typ);
}

// Inner typicality factor used on the integer grid.
inline double grid_delta(double delta) { return (39.0 * delta / 40.0) / (1.0 + delta / 40.0); }

// Good event with factor grid_delta(delta) on every (k, l] with integer
// k in [0, ceil(s)] and l in [floor(t), max(floor(t), floor(horizon))].
// Does not check the interval length.
inline bool typical_event_proxy_unchecked(const ChainCounter& counter, double s,
                                          double t, const ProtocolParams& p,
                                          double horizon) {
  const double dj = grid_delta(p.delta_typ);
  const auto k_max = static_cast<std::int64_t>(std::ceil(std::max(0.0, s)));
  const auto l_min = static_cast<std::int64_t>(std::floor(t));
  const auto l_max = std::max(l_min, static_cast<std::int64_t>(std::floor(horizon)));
  for (std::int64_t k = 0; k <= k_max; ++k) {
    for (std::int64_t l = l_min; l <= l_max; ++l) {
      if (k >= l) return false;
      const auto c = counter.grid_counts(k, l);
      if (!good_event(c, static_cast<double>(k), static_cast<double>(l), p, dj).all()) {
        return false;
      }
    }
  }
  return true;
}

inline void require_event_interval(double s, double t, const ProtocolParams& p) {
  const double need = min_event_interval(p.delta_net, p.delta_typ);
  if (!(t - s > need)) {
    throw IntervalTooShort("IntervalTooShort: t - s = " + std::to_string(t - s) +
                           " must exceed 80(1+Delta)/delta = " + std::to_string(need));
  }
}

inline bool typical_event_proxy(const ChainCounter& counter, double s, double t,
                                const ProtocolParams& p, double horizon) {
  require_event_interval(s, t, p);
  return typical_event_proxy_unchecked(counter, s, t, p, horizon);
}

inline bool typical_event_proxy(const Trace& trace, int chain, double s, double t,
                                const ProtocolParams& p, double horizon) {
  require_event_interval(s, t, p);
  const ChainCounter counter(trace.chain(chain), p.delta_net, trace.params.horizon);
  return typical_event_proxy_unchecked(counter, s, t, p, horizon);
}

// Outcome of one theorem check on one trace. The theorem claims
// event_held implies predicate_held when preconditions_met.
struct CheckResult {
  bool event_held = false;
  bool predicate_held = false;
  bool preconditions_met = true;

  bool violation() const { return event_held && !predicate_held; }
};

// Per-chain state shared by the bitcoin theorem checks.
class ChainAnalysis {
 public:
  ChainAnalysis(const BlockStore& store, const ProtocolParams& p)
      : store_(store),
        params_(p),
        counter_(store, p.delta_net, p.horizon),
        credible_(store),
        derived_(derive(p.alpha, p.delta_net, p.delta_typ)) {
    adversarial_depth_.resize(store.size());
    for (const Block& b : store.blocks()) {
      if (b.id == kGenesis) continue;
      adversarial_depth_[b.id.value] =
          adversarial_depth_[b.parent.value] + (b.honest() ? 0 : 1);
    }
  }

  const BlockStore& store() const { return store_; }
  const ChainCounter& counter() const { return counter_; }
  const CredibilityIndex& credibility() const { return credible_; }
  const DerivedParams& derived() const { return derived_; }

  std::vector<BlockId> credible_tips_at(double t) const {
    const std::uint32_t floor = credible_.min_credible_height(t, params_.delta_net);
    std::vector<BlockId> tips;
    for (const Block& b : store_.blocks()) {
      if (b.published_by(t) && store_.height(b.id) >= floor) tips.push_back(b.id);
    }
    return tips;
  }

  CheckResult growth(double s, double t) const {
    require_event_interval(s, t, params_);
    CheckResult r;
    const double d = params_.delta_net;
    r.event_held = good_event(counter_.counts(s + d, t - d), s + d, t - d, params_).all();
    const double need = static_cast<double>(credible_.max_credible_height(s)) +
                        derived_.growth_coeff * derived_.g * params_.alpha * (t - s);
    r.predicate_held =
        static_cast<double>(credible_.min_credible_height(t, d)) >= need;
    return r;
  }

  bool quality_event(double t, double k, bool& long_enough) const {
    const double s = t - k / (2.0 * params_.alpha) + params_.delta_net;
    const double e = t - params_.delta_net;
    long_enough = e - s > min_event_interval(params_.delta_net, params_.delta_typ);
    return typical_event_proxy_unchecked(counter_, s, e, params_, params_.horizon);
  }

  bool depth_preconditions(double t, double k) const {
    return k >= min_theorem_depth(params_.alpha, params_.delta_net, params_.delta_typ) &&
           t >= k / (derived_.growth_coeff * derived_.g * params_.alpha);
  }

  CheckResult quality(double t, std::uint32_t k) const {
    CheckResult r;
    bool long_enough = false;
    r.event_held = quality_event(t, k, long_enough);
    r.preconditions_met = long_enough && depth_preconditions(t, k);
    r.predicate_held = true;
    for (BlockId tip : credible_tips_at(t)) {
      if (adversarial_in_last(tip, k) > derived_.g * k) {
        r.predicate_held = false;
        break;
      }
    }
    return r;
  }

  // Adversarial blocks among the last min(k, height) blocks of `tip`.
  std::uint32_t adversarial_in_last(BlockId tip, std::uint32_t k) const {
    const std::uint32_t h = store_.height(tip);
    const BlockId base = store_.ancestor_at_height(tip, h > k ? h - k : 0);
    return adversarial_depth_[tip.value] - adversarial_depth_[base.value];
  }

  // The (k-1)-deep prefix of every t-credible chain must lie on every
  // r-credible chain, for r in `grid` plus t and the horizon.
  CheckResult common_prefix(double t, std::uint32_t k, std::span<const double> grid) const {
    CheckResult r;
    bool long_enough = false;
    r.event_held = quality_event(t, k, long_enough);
    r.preconditions_met = long_enough && depth_preconditions(t, k);
    r.predicate_held = prefix_persists(t, k, grid);
    return r;
  }

  bool prefix_persists(double t, std::uint32_t k, std::span<const double> grid) const {
    std::set<BlockId> prefixes;
    for (BlockId tip : credible_tips_at(t)) {
      const std::uint32_t h = store_.height(tip);
      prefixes.insert(store_.ancestor_at_height(tip, h + 1 > k ? h + 1 - k : 0));
    }
    std::vector<double> times(grid.begin(), grid.end());
    times.push_back(t);
    times.push_back(params_.horizon);
    for (double r : times) {
      if (r < t) continue;
      for (BlockId tip : credible_tips_at(r)) {
        for (BlockId q : prefixes) {
          if (!store_.is_ancestor(q, tip)) return false;
        }
      }
    }
    return true;
  }

 private:
  const BlockStore& store_;
  ProtocolParams params_;
  ChainCounter counter_;
  CredibilityIndex credible_;
  DerivedParams derived_;
  std::vector<std::uint32_t> adversarial_depth_;
};

inline CheckResult check_growth(const Trace& trace, int chain, double s, double t,
                                const ProtocolParams& p) {
  return ChainAnalysis(trace.chain(chain), p).growth(s, t);
}

inline CheckResult check_quality(const Trace& trace, int chain, double t,
                                 std::uint32_t k, const ProtocolParams& p) {
  return ChainAnalysis(trace.chain(chain), p).quality(t, k);
}

inline CheckResult check_common_prefix(const Trace& trace, int chain, double t,
                                       std::uint32_t k, std::span<const double> grid,
                                       const ProtocolParams& p) {
  return ChainAnalysis(trace.chain(chain), p).common_prefix(t, k, grid);
}

struct StructuralReport {
  bool distinct_lagger_heights = true;
  bool loner_unique = true;
  bool height_consensus = true;

  bool all() const { return distinct_lagger_heights && loner_unique && height_consensus; }
};

// Checks that follow from honest compliance alone. Height consensus is
// evaluated at every publication time (and Delta before it) with the
// definition's linear scan on up to `consensus_samples` of them.
inline StructuralReport structural_lemmas(const BlockStore& store, double delta_net,
                                          double horizon,
                                          std::size_t consensus_samples = 64) {
  StructuralReport r;
  const HonestBlockFlags f = classify(store, delta_net, horizon);
  std::vector<std::uint32_t> lagger_heights;
  std::vector<std::uint32_t> honest_per_height;
  for (const Block& b : store.blocks()) {
    if (!b.honest() || b.id == kGenesis) continue;
    const std::uint32_t h = store.height(b.id);
    if (honest_per_height.size() <= h) honest_per_height.resize(h + 1, 0);
    ++honest_per_height[h];
  }
  for (std::size_t i = 0; i < f.blocks.size(); ++i) {
    const std::uint32_t h = store.height(f.blocks[i]);
    if (f.lagger[i]) lagger_heights.push_back(h);
    if (f.loner[i] == LonerFlag::kYes && honest_per_height[h] != 1) r.loner_unique = false;
  }
  std::sort(lagger_heights.begin(), lagger_heights.end());
  r.distinct_lagger_heights =
      std::adjacent_find(lagger_heights.begin(), lagger_heights.end()) == lagger_heights.end();

  std::vector<double> times;
  for (const Block& b : store.blocks()) {
    if (b.published()) times.push_back(b.publish_time);
  }
  std::sort(times.begin(), times.end());
  const std::size_t stride =
      std::max<std::size_t>(1, times.size() / std::max<std::size_t>(1, consensus_samples));
  for (std::size_t i = 0; i < times.size(); i += stride) {
    // Derive t from t' so that t' - delta reproduces t bit for bit.
    const double later = times[i] + delta_net;
    const double t = later - delta_net;
    std::uint32_t top = 0;
    for (BlockId id : credible_tips(store, t, delta_net)) top = std::max(top, store.height(id));
    std::uint32_t low = UINT32_MAX;
    for (BlockId id : credible_tips(store, later, delta_net)) {
      low = std::min(low, store.height(id));
    }
    if (low < top) {
      r.height_consensus = false;
      break;
    }
  }
  return r;
}

inline StructuralReport structural_lemmas(const Trace& trace, int chain) {
  return structural_lemmas(trace.chain(chain), trace.params.delta_net, trace.params.horizon);
}

// Every honest block extends a chain credible at its mining time.
inline bool honest_compliant(const BlockStore& store, double delta_net) {
  const CredibilityIndex idx(store);
  for (const Block& b : store.blocks()) {
    if (!b.honest() || b.id == kGenesis) continue;
    const Block& parent = store.at(b.parent);
    if (!parent.published_by(b.mined_time)) return false;
    if (store.height(b.parent) < idx.min_credible_height(b.mined_time, delta_net)) {
      return false;
    }
  }
  return true;
}

// Adversarial mined times on every (s, t] never exceed the budget points
// there. Equivalent to: the i-th adversarial block (in time order) is no
// earlier than the i-th budget point and uses a budget point exactly.
inline bool budget_dominated(const BlockStore& store, std::span<const double> budget) {
  std::vector<double> adv;
  for (const Block& b : store.blocks()) {
    if (!b.honest()) adv.push_back(b.mined_time);
  }
  std::sort(adv.begin(), adv.end());
  std::size_t j = 0;
  for (double t : adv) {
    while (j < budget.size() && budget[j] < t) ++j;
    if (j == budget.size() || budget[j] != t) return false;
    ++j;
  }
  return true;
}

}  // namespace backbone

#endif  // BACKBONE_ANALYSIS_HPP_
