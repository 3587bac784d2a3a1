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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "backbone/cli.hpp"
#include "backbone/experiment.hpp"

namespace backbone {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("backbone_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const std::string& path, const std::string& body) { std::ofstream(path) << body; }

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "backbone");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.params = {1.0, 0.2, 0.1, 0.45, 0, 400.0};
  cfg.seed = 5;
  cfg.strategy = {"selfish_mining", {}};
  cfg.trials = 12;
  cfg.checks = {{"good-event", 0.0, 300.0, 0, {}, 0},
                {"growth", 0.0, 300.0, 0, {}, 0},
                {"structural", 0, 0, 0, {}, 0},
                {"lagger-frequency", 0, 0, 0, {}, 0}};
  return cfg;
}

TEST(Experiment, ZeroTrials) {
  ExperimentConfig cfg = small_config();
  cfg.trials = 0;
  const ExperimentReport r = run_experiment(cfg);
  ASSERT_EQ(r.checks.size(), cfg.checks.size());
  for (const auto& c : r.checks) EXPECT_EQ(c.trials, 0);
}

TEST(Experiment, ParallelEqualsSerial) {
  ExperimentConfig cfg = small_config();
  cfg.threads = 1;
  const auto serial = report_to_json(run_experiment(cfg), false).dump();
  cfg.threads = 4;
  const auto parallel = report_to_json(run_experiment(cfg), false).dump();
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(serial, report_to_json(run_experiment(cfg), false).dump());
}

TEST(Experiment, TrialSeedsDiffer) {
  ExperimentConfig cfg = small_config();
  std::ostringstream a;
  std::ostringstream b;
  write_trace_jsonl(run_trial(cfg, 0), a);
  write_trace_jsonl(run_trial(cfg, 1), b);
  EXPECT_NE(a.str(), b.str());
  EXPECT_EQ(trial_seed(5, 3), mix_seed(5, 3));
}

TEST(Experiment, LaggerFrequencyWithinBand) {
  ExperimentConfig cfg;
  cfg.params = {1.0, 0.0, 0.3, 0.2, 0, 1e5};
  cfg.checks = {{"lagger-frequency", 0, 0, 0, {}, 0}, {"loner-frequency", 0, 0, 0, {}, 0}};
  const ExperimentReport r = run_experiment(cfg);
  for (const auto& c : r.checks) {
    EXPECT_TRUE(c.bound_respected) << c.spec.name << " " << c.frequency << " vs " << *c.bound;
    EXPECT_GT(c.samples, 90000);
  }
}

TEST(Config, ParseAndReject) {
  const auto j = nlohmann::json::parse(R"({
    "alpha": 1, "beta": 0.2, "delta_net": 0.1, "delta_typ": 0.3, "horizon": 500,
    "seed": 3, "strategy": {"name": "private_chain", "params": {"k_confirm": 4}},
    "honest_tie_break": "adversary-steered", "trials": 7,
    "checks": ["structural", {"name": "growth", "s": 0, "t": 400}]})");
  const ExperimentConfig cfg = parse_config(j);
  EXPECT_EQ(cfg.trials, 7);
  EXPECT_EQ(cfg.strategy.params.at("k_confirm"), 4.0);
  EXPECT_EQ(cfg.tie_break, HonestTieBreak::kAdversarySteered);
  ASSERT_EQ(cfg.checks.size(), 2u);
  EXPECT_EQ(cfg.checks[1].t, 400.0);

  auto bad = [&](const std::string& text) {
    EXPECT_THROW(parse_config(nlohmann::json::parse(text)), ConfigInvalid) << text;
  };
  bad(R"({"alpha": 1, "horizon": 10, "bogus": 1})");
  bad(R"({"alpha": -1, "horizon": 10})");
  bad(R"({"alpha": 1, "horizon": 10, "delta_typ": 0.6})");
  bad(R"({"alpha": 1, "horizon": 10, "strategy": "teleport"})");
  bad(R"({"alpha": 1, "horizon": 10, "checks": ["nonsense"]})");
  bad(R"({"alpha": 1, "horizon": 10, "checks": [{"name": "growth", "s": 0, "t": 5}]})");
  bad(R"({"alpha": 1, "horizon": 10, "checks": ["prism-growth"]})");
  bad(R"({"alpha": "one", "horizon": 10})");
  bad(R"({"alpha": 1, "horizon": 10, "trials": -2})");
  EXPECT_THROW(load_config("/nonexistent/config.json"), IoFailure);
}

TEST(Cli, BoundsExample) {
  const CliRun r = cli({"bounds", "--alpha", "6", "--beta", "2", "--delta-net", "0.000555555",
                        "--delta-typ", "0.3285"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0.996672"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("0.64317"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1.99537"), std::string::npos) << r.out;
  const CliRun m = cli({"bounds", "--alpha", "6", "--delta-net", "0.000555555", "--delta-typ",
                        "0.3285", "--eta", "0.65", "--ref-mu", "201.8"});
  EXPECT_NE(m.out.find("not reproduced"), std::string::npos) << m.out;
  EXPECT_NE(m.out.find("16691.2"), std::string::npos) << m.out;
}

TEST(Cli, BoundsJsonAndErrors) {
  TempDir dir;
  const CliRun r = cli({"bounds", "--alpha", "1", "--delta-net", "0.1", "--delta-typ", "0.2",
                        "--eps", "1e-3", "--m", "5", "--out", dir.file("b.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(dir.file("b.json")));
  EXPECT_NEAR(j["g"].get<double>(), std::exp(-0.1), 1e-12);
  EXPECT_TRUE(j.contains("leader_k"));
  EXPECT_EQ(cli({"bounds", "--delta-typ", "0.7"}).code, kExitUsage);
  EXPECT_EQ(cli({"bounds", "--out", "/nonexistent/dir/b.json"}).code, kExitIo);
}

TEST(Cli, SimulateIsDeterministic) {
  TempDir dir;
  EXPECT_EQ(cli({"simulate", "--seed", "7", "--beta", "0.3", "--strategy", "selfish_mining",
                 "--out", dir.file("a.jsonl")}).code, 0);
  EXPECT_EQ(cli({"simulate", "--seed", "7", "--beta", "0.3", "--strategy", "selfish_mining",
                 "--out", dir.file("b.jsonl")}).code, 0);
  const std::string a = slurp(dir.file("a.jsonl"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir.file("b.jsonl")));
}

TEST(Cli, SimulateRequiresSeedAndConfigOverrides) {
  TempDir dir;
  EXPECT_EQ(cli({"simulate"}).code, kExitUsage);
  spit(dir.file("c.json"), R"({"seed": 9, "horizon": 50, "beta": 0.0})");
  const CliRun r = cli({"simulate", "--config", dir.file("c.json"), "--horizon", "500",
                        "--out", dir.file("t.jsonl")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("seed 9"), std::string::npos);
  EXPECT_NE(r.out.find("horizon 50\n"), std::string::npos);
  spit(dir.file("bad.json"), R"({"seed": 9, "colour": "red"})");
  EXPECT_EQ(cli({"simulate", "--config", dir.file("bad.json")}).code, kExitUsage);
  spit(dir.file("broken.json"), "{ not json");
  EXPECT_EQ(cli({"simulate", "--config", dir.file("broken.json")}).code, kExitUsage);
  EXPECT_EQ(cli({"simulate", "--config", dir.file("missing.json")}).code, kExitIo);
  EXPECT_EQ(cli({"simulate", "--seed", "1", "--strategy", "teleport"}).code, kExitUsage);
  EXPECT_EQ(cli({"simulate", "--seed", "1", "--out", "/nonexistent/x/t.jsonl"}).code, kExitIo);
}

TEST(Cli, MontecarloWritesReports) {
  TempDir dir;
  spit(dir.file("mc.json"), R"({"alpha": 1, "beta": 0.2, "delta_net": 0.1, "delta_typ": 0.45,
    "horizon": 400, "seed": 2, "trials": 6, "threads": 2,
    "checks": [{"name": "good-event", "s": 0, "t": 300}, "structural"],
    "json_out": ")" + dir.file("r.json") + R"(", "csv_out": ")" + dir.file("r.csv") + R"("})");
  const CliRun r = cli({"montecarlo", "--config", dir.file("mc.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir.file("r.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "check,trials,violations,frequency,bound,ci_high");
  const auto j = nlohmann::json::parse(slurp(dir.file("r.json")));
  EXPECT_EQ(j["checks"].size(), 2u);
  const CliRun again = cli({"montecarlo", "--config", dir.file("mc.json"), "--csv", dir.file("s.csv"),
                            "--out", dir.file("s.json"), "--threads", "1"});
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(slurp(dir.file("s.csv")), csv);
  EXPECT_EQ(cli({"montecarlo"}).code, kExitUsage);
}

TEST(Cli, PrismSimWritesLedger) {
  TempDir dir;
  const CliRun r = cli({"prism-sim", "--seed", "3", "--m", "3", "--horizon", "60", "--beta", "0.2",
                        "--strategy", "censor_votes", "--out", dir.file("t.jsonl"), "--ledger",
                        dir.file("l.jsonl")});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream rows(slurp(dir.file("l.jsonl")));
  std::string line;
  int n = 0;
  std::int64_t last_epoch = 0;
  while (std::getline(rows, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_GE(j["epoch"].get<std::int64_t>(), last_epoch);
    last_epoch = j["epoch"].get<std::int64_t>();
    ++n;
  }
  EXPECT_GT(n, 0);
  EXPECT_EQ(cli({"prism-sim", "--seed", "3", "--m", "0"}).code, kExitUsage);
}

TEST(Cli, VerifyStrictPasses) {
  TempDir dir;
  const CliRun r = cli({"verify", "--check", "common-prefix", "--trials", "100", "--strict",
                        "--out", dir.file("v.jsonl")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  std::istringstream rows(slurp(dir.file("v.jsonl")));
  std::string line;
  int n = 0;
  while (std::getline(rows, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* key : {"check", "s", "t", "k", "event_held", "predicate_held"}) {
      EXPECT_TRUE(j.contains(key)) << key;
    }
    ++n;
  }
  EXPECT_EQ(n, 100);
}

TEST(Cli, VerifyRejectsBadInput) {
  EXPECT_EQ(cli({"verify", "--check", "bogus"}).code, kExitUsage);
  EXPECT_EQ(cli({"verify", "--check", "growth", "--t", "10"}).code, kExitUsage);
  EXPECT_EQ(cli({"verify", "--trials", "-1"}).code, kExitUsage);
}

TEST(Cli, ProcessExitCodes) {
  const std::string bin = BACKBONE_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("bounds"), 0);
  EXPECT_EQ(status("--help"), 0);
  EXPECT_EQ(status(""), 2);
  EXPECT_EQ(status("simulate"), 2);
  EXPECT_EQ(status("simulate --seed 1 --config /nonexistent.json"), 3);
}

}  // namespace
}  // namespace backbone
