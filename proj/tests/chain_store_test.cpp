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

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "backbone/chain_store.hpp"
#include "backbone/chain_view.hpp"
#include "backbone/trace.hpp"
#include "oracles.hpp"

namespace backbone {
namespace {

Block make(BlockId parent, double t, BlockKind kind = BlockKind::kHonest,
           double pub = kNever) {
  Block b;
  b.parent = parent;
  b.mined_time = t;
  b.kind = kind;
  b.publish_time = pub;
  return b;
}

std::set<BlockId> as_set(const std::vector<BlockId>& v) { return {v.begin(), v.end()}; }

TEST(BlockStore, FirstExtension) {
  BlockStore s;
  const BlockId id = s.append(make(kGenesis, 1.0));
  EXPECT_EQ(id.value, 1u);
  EXPECT_EQ(s.height(id), 1u);
  EXPECT_EQ(s.at(id).publish_time, 1.0);
}

TEST(BlockStore, EqualTimeParentIsNonCausal) {
  BlockStore s;
  const BlockId a = s.append(make(kGenesis, 1.0));
  try {
    s.append(make(a, 1.0));
    FAIL() << "expected NonCausalParent";
  } catch (const ChainStoreError& e) {
    EXPECT_EQ(e.code(), ChainErrc::kNonCausalParent);
  }
}

TEST(BlockStore, Errors) {
  BlockStore s;
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const ChainStoreError& e) {
      return e.code();
    }
    ADD_FAILURE() << "no error";
    return ChainErrc::kUnknownBlock;
  };
  EXPECT_EQ(code_of([&] { s.append(make(BlockId{5}, 1.0)); }), ChainErrc::kUnknownParent);
  Block other = make(kGenesis, 1.0);
  other.chain = 2;
  EXPECT_EQ(code_of([&] { s.append(other); }), ChainErrc::kCrossChainParent);
  const BlockId w = s.append(make(kGenesis, 1.0, BlockKind::kAdversarial));
  EXPECT_EQ(code_of([&] { s.append(make(w, 2.0)); }), ChainErrc::kUnpublishedParent);
  EXPECT_EQ(code_of([&] { s.publish(w, 0.5); }), ChainErrc::kPublishBeforeMined);
  s.publish(w, 1.5);
  EXPECT_EQ(code_of([&] { s.publish(w, 2.0); }), ChainErrc::kAlreadyPublished);
  EXPECT_EQ(code_of([&] { s.publish(BlockId{9}, 2.0); }), ChainErrc::kUnknownBlock);
  EXPECT_EQ(code_of([&] { k_deep(s, w, 2); }), ChainErrc::kDepthExceedsHeight);
  EXPECT_EQ(code_of([&] { k_deep(s, w, 0); }), ChainErrc::kDepthExceedsHeight);
}

TEST(BlockStore, LineHeights) {
  const BlockStore s = oracle::honest_line({1, 2, 3, 4, 5});
  for (std::uint32_t i = 1; i <= 5; ++i) {
    EXPECT_EQ(s.height(BlockId{i}), i);
    EXPECT_EQ(s.height(BlockId{i}), oracle::walk_height(s, BlockId{i}));
  }
}

TEST(KDeep, Examples) {
  const BlockStore s = oracle::honest_line({1, 2, 3});
  KDeep d = k_deep(s, BlockId{3}, 1);
  EXPECT_EQ(d.block, BlockId{3});
  EXPECT_EQ(d.prefix, BlockId{2});
  d = k_deep(s, BlockId{3}, 3);
  EXPECT_EQ(d.block, BlockId{1});
  EXPECT_EQ(d.prefix, kGenesis);
}

TEST(KDeep, MatchesParentWalk) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const BlockStore s = oracle::random_store(rng, 60);
    for (const Block& b : s.blocks()) {
      const std::uint32_t h = s.height(b.id);
      for (std::uint32_t k = 1; k <= h; ++k) {
        const KDeep d = k_deep(s, b.id, k);
        EXPECT_EQ(d.block, oracle::walk_k_deep(s, b.id, k));
        EXPECT_EQ(d.prefix, s.at(d.block).parent);
      }
    }
  }
}

TEST(Credible, OnlyGenesis) {
  BlockStore s;
  EXPECT_EQ(credible_tips(s, 0.5, 0.3), std::vector<BlockId>{kGenesis});
}

TEST(Credible, ForkExample) {
  BlockStore s;
  const BlockId b1 = s.append(make(kGenesis, 1.0));
  const BlockId b2 = s.append(make(kGenesis, 1.2));
  EXPECT_EQ(as_set(credible_tips(s, 1.25, 0.3)), (std::set<BlockId>{kGenesis, b1, b2}));
  EXPECT_EQ(as_set(credible_tips(s, 1.5, 0.3)), (std::set<BlockId>{b1, b2}));
}

TEST(Credible, WithheldNeverCredible) {
  BlockStore s;
  const BlockId w = s.append(make(kGenesis, 0.5, BlockKind::kAdversarial));
  for (double t : {0.5, 1.0, 100.0}) {
    const auto tips = credible_tips(s, t, 0.1);
    EXPECT_EQ(std::count(tips.begin(), tips.end(), w), 0);
  }
}

TEST(Credible, PropertiesOnRandomStores) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const BlockStore s = oracle::random_store(rng, 50);
    const double delta = 0.1 * rep / 10.0;
    const CredibilityIndex idx(s);
    std::uint32_t last_top = 0;
    for (double t = 0.0; t < 60.0; t += 0.37) {
      const auto tips = credible_tips(s, t, delta);
      ASSERT_EQ(as_set(tips), as_set(oracle::credible(s, t, delta)));
      std::uint32_t top = 0;
      std::uint32_t low = UINT32_MAX;
      for (BlockId id : tips) {
        top = std::max(top, s.height(id));
        low = std::min(low, s.height(id));
      }
      EXPECT_GE(top, last_top);
      last_top = top;
      EXPECT_EQ(idx.max_published_height(t), max_published_height(s, t));
      EXPECT_EQ(idx.max_credible_height(t), top);
      EXPECT_EQ(idx.min_credible_height(t, delta), max_published_height(s, t - delta));
    }
    for (const Block& b : s.blocks()) {
      EXPECT_EQ(s.height(b.id), b.id == kGenesis ? 0u : s.height(b.parent) + 1);
      EXPECT_EQ(s.height(b.id), oracle::walk_height(s, b.id));
    }
  }
}

TEST(Credible, HonestBlockOnItsOwnCredibleChain) {
  // Honest blocks that extend a credible tip are credible at mining time.
  BlockStore s;
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> gap(1.0);
  double t = 0.0;
  const double delta = 0.4;
  for (int i = 0; i < 200; ++i) {
    t += gap(rng);
    const auto tips = credible_tips(s, t, delta);
    const BlockId parent = tips[rng() % tips.size()];
    const BlockId id = s.append(make(parent, t));
    const auto now = credible_tips(s, t, delta);
    EXPECT_NE(std::find(now.begin(), now.end(), id), now.end());
  }
}

TEST(BlockStore, IsAncestorMatchesWalk) {
  std::mt19937_64 rng(8);
  const BlockStore s = oracle::random_store(rng, 80);
  for (const Block& a : s.blocks()) {
    for (const Block& b : s.blocks()) {
      EXPECT_EQ(s.is_ancestor(a.id, b.id), oracle::walk_is_ancestor(s, a.id, b.id));
    }
  }
}

TEST(ChainView, MatchesDefinition) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const BlockStore s = oracle::random_store(rng, 80);
    std::vector<BlockId> order;
    for (const Block& b : s.blocks()) {
      if (b.published() && b.id != kGenesis) order.push_back(b.id);
    }
    std::stable_sort(order.begin(), order.end(), [&](BlockId a, BlockId b) {
      return s.at(a).publish_time < s.at(b).publish_time;
    });
    ChainView view(s);
    const double delta = 0.5;
    for (BlockId id : order) {
      view.on_published(id);
      const double now = s.at(id).publish_time;
      EXPECT_EQ(view.max_height(), max_published_height(s, now));
      EXPECT_EQ(view.lagged_height(now - delta), max_published_height(s, now - delta));
      EXPECT_EQ(view.preferred(), preferred_tip(s, credible_tips(s, now, 0.0)));
    }
  }
}

TEST(TraceIo, RoundTrip) {
  std::mt19937_64 rng(2);
  Trace trace = oracle::wrap(oracle::random_store(rng, 40), ProtocolParams{});
  std::ostringstream out;
  write_trace_jsonl(trace, out);
  std::istringstream in(out.str());
  const auto chains = read_trace_jsonl(in);
  ASSERT_EQ(chains.size(), 1u);
  ASSERT_EQ(chains[0].size(), trace.chain(0).size());
  for (const Block& b : trace.chain(0).blocks()) {
    const Block& c = chains[0].at(b.id);
    EXPECT_EQ(c.parent, b.parent);
    EXPECT_EQ(c.kind, b.kind);
    EXPECT_EQ(c.mined_time, b.mined_time);
    EXPECT_EQ(c.publish_time, b.publish_time);
  }
  std::ostringstream again;
  Trace copy = trace;
  copy.chains = chains;
  write_trace_jsonl(copy, again);
  EXPECT_EQ(out.str(), again.str());
}

}  // namespace
}  // namespace backbone
