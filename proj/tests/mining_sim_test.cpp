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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "backbone/analysis.hpp"
#include "backbone/mining_sim.hpp"
#include "backbone/rng.hpp"
#include "oracles.hpp"

namespace backbone {
namespace {

std::string dump(const Trace& t) {
  std::ostringstream out;
  write_trace_jsonl(t, out);
  return out.str();
}

TEST(PoissonArrivals, RateZero) { EXPECT_TRUE(sample_poisson_arrivals(0.0, 100.0, 1).empty()); }

TEST(PoissonArrivals, CountWithinBand) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto a = sample_poisson_arrivals(100.0, 1000.0, seed);
    EXPECT_NEAR(static_cast<double>(a.size()), 1e5, 2e3);
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    EXPECT_GT(a.front(), 0.0);
    EXPECT_LE(a.back(), 1000.0);
  }
}

TEST(PoissonArrivals, Deterministic) {
  EXPECT_EQ(sample_poisson_arrivals(3.0, 50.0, 9), sample_poisson_arrivals(3.0, 50.0, 9));
  EXPECT_NE(sample_poisson_arrivals(3.0, 50.0, 9), sample_poisson_arrivals(3.0, 50.0, 10));
}

TEST(Simulation, NullAdversaryBuildsOneChain) {
  ProtocolParams p{1.0, 0.5, 0.05, 0.2, 0, 20.0};
  NullStrategy null;
  const Trace t = run_simulation(p, null, 4);
  const auto& honest = t.schedule.honest[0];
  double min_gap = honest.empty() ? 1.0 : honest.front();
  for (std::size_t i = 1; i < honest.size(); ++i) min_gap = std::min(min_gap, honest[i] - honest[i - 1]);
  ASSERT_GT(min_gap, p.delta_net) << "pick a seed with no honest gap below Delta";
  EXPECT_EQ(t.chain(0).size(), honest.size() + 1);
  for (const Block& b : t.chain(0).blocks()) {
    EXPECT_TRUE(b.honest());
    EXPECT_EQ(t.chain(0).height(b.id), b.id.value);
  }
}

TEST(Simulation, WithheldBlocksNeverCredible) {
  ProtocolParams p{1.0, 0.4, 0.1, 0.2, 0, 200.0};
  PrivateChainStrategy attack(1000000);
  const Trace t = run_simulation(p, attack, 3);
  std::size_t adversarial = 0;
  for (const Block& b : t.chain(0).blocks()) adversarial += !b.honest();
  EXPECT_GT(adversarial, 0u);
  for (BlockId id : credible_tips(t.chain(0), p.horizon, p.delta_net)) {
    EXPECT_TRUE(t.chain(0).at(id).honest());
  }
}

TEST(Simulation, ReplayIsByteIdentical) {
  ProtocolParams p{1.0, 0.3, 0.2, 0.2, 0, 300.0};
  for (const char* name : {"null", "private_chain", "selfish_mining"}) {
    auto a = make_strategy({name, {}});
    auto b = make_strategy({name, {}});
    EXPECT_EQ(dump(run_simulation(p, *a, 77)), dump(run_simulation(p, *b, 77))) << name;
  }
  ProtocolParams prism{1.0, 0.2, 0.3, 0.2, 3, 100.0};
  CensorVotesStrategy c1;
  CensorVotesStrategy c2;
  EXPECT_EQ(dump(run_simulation(prism, c1, 5)), dump(run_simulation(prism, c2, 5)));
}

TEST(Simulation, DominationAndCompliance) {
  const std::vector<std::string> names{"null", "private_chain", "selfish_mining", "censor_votes"};
  const std::vector<HonestTieBreak> ties{HonestTieBreak::kEarliest,
                                         HonestTieBreak::kAdversarySteered,
                                         HonestTieBreak::kMaxDelay};
  int trial = 0;
  for (const auto& name : names) {
    for (HonestTieBreak tb : ties) {
      for (double beta : {0.2, 1.5}) {
        ProtocolParams p{1.0, beta, 0.5, 0.2, name == "censor_votes" ? 2 : 0, 150.0};
        auto s = make_strategy({name, {}});
        SimOptions opts;
        opts.tie_break = tb;
        const Trace t = run_simulation(p, *s, 1000 + trial++, opts);
        for (int j = 0; j <= p.m; ++j) {
          EXPECT_TRUE(budget_dominated(t.chain(j), t.schedule.adversarial[static_cast<std::size_t>(j)]));
          EXPECT_TRUE(honest_compliant(t.chain(j), p.delta_net)) << name << " " << to_string(tb);
          std::size_t honest = 0;
          for (const Block& b : t.chain(j).blocks()) honest += b.honest() && b.id != kGenesis;
          EXPECT_EQ(honest, t.schedule.honest[static_cast<std::size_t>(j)].size());
        }
        // Publications beyond the horizon are dropped.
        for (const TraceEvent& e : t.events) EXPECT_LE(e.time, p.horizon);
      }
    }
  }
}

TEST(Simulation, PrismChainsIndependent) {
  ProtocolParams p{1.0, 0.0, 0.1, 0.2, 5, 2000.0};
  const ArrivalSchedule s = sample_schedule(p, 42);
  // Arrival counts per window on chains 0 and 1, 200 windows of length 10.
  std::vector<double> a(200, 0.0);
  std::vector<double> b(200, 0.0);
  for (double t : s.honest[0]) a[std::min<std::size_t>(199, static_cast<std::size_t>(t / 10.0))] += 1;
  for (double t : s.honest[1]) b[std::min<std::size_t>(199, static_cast<std::size_t>(t / 10.0))] += 1;
  double ma = 0;
  double mb = 0;
  for (int i = 0; i < 200; ++i) {
    ma += a[i] / 200;
    mb += b[i] / 200;
  }
  double cov = 0;
  double va = 0;
  double vb = 0;
  for (int i = 0; i < 200; ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  EXPECT_LT(std::abs(cov / std::sqrt(va * vb)), 0.1);
}

class BadStrategy final : public Strategy {
 public:
  enum Mode { kUnknownParent, kPastPublication, kEarlyPublication, kSteerOff };
  explicit BadStrategy(Mode m) : mode_(m) {}
  std::string name() const override { return "bad"; }
  StrategyDecision on_budget_point(const StrategyContext& ctx, int) override {
    StrategyDecision d;
    switch (mode_) {
      case kUnknownParent:
        d.mine_on = BlockId{999999};
        break;
      case kPastPublication:
        d.publish.push_back({0, kGenesis, ctx.now - 1.0});
        break;
      case kEarlyPublication:
        d.mine_on = kGenesis;
        d.publish.push_back({0, BlockId{static_cast<std::uint32_t>(ctx.chain(0).size() + 5)}, ctx.now});
        break;
      case kSteerOff:
        d.mine_on = kGenesis;
        break;
    }
    return d;
  }
  std::optional<BlockId> steer_honest(const StrategyContext& ctx, int,
                                      std::span<const BlockId>) override {
    if (mode_ != kSteerOff || ctx.chain(0).size() < 3) return std::nullopt;
    return kGenesis;  // stale once the chain has grown
  }

 private:
  Mode mode_;
};

TEST(Simulation, StrategyViolations) {
  ProtocolParams p{1.0, 1.0, 0.1, 0.2, 0, 50.0};
  for (auto mode : {BadStrategy::kUnknownParent, BadStrategy::kPastPublication,
                    BadStrategy::kEarlyPublication, BadStrategy::kSteerOff}) {
    BadStrategy s(mode);
    SimOptions opts;
    opts.tie_break = HonestTieBreak::kAdversarySteered;
    EXPECT_THROW(run_simulation(p, s, 1, opts), StrategyViolation) << mode;
  }
}

TEST(Simulation, InvalidParams) {
  NullStrategy n;
  EXPECT_THROW(run_simulation({0.0, 0.0, 0.0, 0.2, 0, 10.0}, n, 1), std::invalid_argument);
  EXPECT_THROW(run_simulation({1.0, -1.0, 0.0, 0.2, 0, 10.0}, n, 1), std::invalid_argument);
  EXPECT_THROW(run_simulation({1.0, 0.0, -0.1, 0.2, 0, 10.0}, n, 1), std::invalid_argument);
  EXPECT_THROW(run_simulation({1.0, 0.0, 0.0, 0.2, -1, 10.0}, n, 1), std::invalid_argument);
  EXPECT_THROW(run_simulation({1.0, 0.0, 0.0, 0.2, 0, 0.0}, n, 1), std::invalid_argument);
}

TEST(Simulation, MaxDelayTieBreakMakesMoreForks) {
  // Honest blocks that ignore the last Delta of publications fork more.
  ProtocolParams p{1.0, 0.0, 0.8, 0.2, 0, 2000.0};
  NullStrategy n;
  SimOptions slow;
  slow.tie_break = HonestTieBreak::kMaxDelay;
  const Trace fast_t = run_simulation(p, n, 9);
  const Trace slow_t = run_simulation(p, n, 9, slow);
  EXPECT_LT(max_published_height(slow_t.chain(0), p.horizon),
            max_published_height(fast_t.chain(0), p.horizon));
  EXPECT_TRUE(honest_compliant(slow_t.chain(0), p.delta_net));
}

TEST(Seeds, MixIsStableAndSpreads) {
  EXPECT_EQ(mix_seed(1, 0), mix_seed(1, 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(mix_seed(7, i));
  EXPECT_EQ(seen.size(), 1000u);
}

}  // namespace
}  // namespace backbone
