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

#ifndef BACKBONE_EXPERIMENT_HPP_
#define BACKBONE_EXPERIMENT_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "backbone/adversary.hpp"
#include "backbone/analysis.hpp"
#include "backbone/bounds.hpp"
#include "backbone/mining_sim.hpp"
#include "backbone/params.hpp"
#include "backbone/prism.hpp"
#include "backbone/rng.hpp"
#include "backbone/stats.hpp"

namespace backbone {

class ConfigInvalid : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "good-event",   "typical-event",    "growth",        "quality",
      "common-prefix", "structural",      "lagger-frequency", "loner-frequency",
      "private-chain", "prism-growth",    "prism-quality", "prism-leader-prefix",
      "prism-tx",      "ledger-safety"};
  return names;
}

struct CheckSpec {
  std::string name;
  double s = 0.0;
  double t = 0.0;
  std::uint32_t k = 0;
  std::vector<double> grid;
  int chain = 0;
};

struct ExperimentConfig {
  ProtocolParams params;
  std::uint64_t seed = 1;
  StrategySpec strategy;
  HonestTieBreak tie_break = HonestTieBreak::kEarliest;
  int txs_per_block = -1;
  std::int64_t trials = 1;
  unsigned threads = 1;  // 0: one per hardware thread
  std::vector<CheckSpec> checks;
  std::string json_out;
  std::string csv_out;
};

// Seed of trial i: the base seed mixed with the index.
inline std::uint64_t trial_seed(std::uint64_t base, std::int64_t trial) {
  return mix_seed(base, static_cast<std::uint64_t>(trial));
}

namespace detail {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigInvalid("unknown key '" + it.key() + "' in " + where);
    }
  }
}

}  // namespace detail

inline StrategySpec parse_strategy(const nlohmann::json& j) {
  StrategySpec s;
  if (j.is_string()) {
    s.name = j.get<std::string>();
    return s;
  }
  detail::reject_unknown(j, {"name", "params"}, "strategy");
  s.name = detail::get_or<std::string>(j, "name", "null");
  if (j.contains("params")) {
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
      s.params[it.key()] = it.value().get<double>();
    }
  }
  return s;
}

// Applies the protocol keys of `j` on top of `p` (missing keys keep their
// value).
inline void apply_params(const nlohmann::json& j, ProtocolParams& p) {
  p.alpha = detail::get_or(j, "alpha", p.alpha);
  p.beta = detail::get_or(j, "beta", p.beta);
  p.delta_net = detail::get_or(j, "delta_net", p.delta_net);
  p.delta_typ = detail::get_or(j, "delta_typ", p.delta_typ);
  p.m = detail::get_or(j, "m", p.m);
  p.horizon = detail::get_or(j, "horizon", p.horizon);
}

inline const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{
      "alpha", "beta",   "delta_net", "delta_typ", "m",      "horizon",  "seed",
      "strategy", "honest_tie_break", "txs_per_block", "trials", "threads", "checks",
      "json_out", "csv_out"};
  return keys;
}

inline void validate_check(const CheckSpec& c, const ExperimentConfig& cfg) {
  const auto& names = check_names();
  if (std::find(names.begin(), names.end(), c.name) == names.end()) {
    throw ConfigInvalid("unknown check '" + c.name + "'");
  }
  const ProtocolParams& p = cfg.params;
  if (c.chain < 0 || c.chain > p.m) throw ConfigInvalid(c.name + ": chain out of range");
  const bool interval = c.name == "good-event" || c.name == "typical-event" || c.name == "growth";
  if (interval && !(c.s >= 0.0 && c.s < c.t)) {
    throw ConfigInvalid(c.name + ": need 0 <= s < t");
  }
  if ((c.name == "typical-event" || c.name == "growth") &&
      !(c.t - c.s > min_event_interval(p.delta_net, p.delta_typ))) {
    throw ConfigInvalid(c.name + ": IntervalTooShort, t - s must exceed 80(1+Delta)/delta = " +
                        std::to_string(min_event_interval(p.delta_net, p.delta_typ)));
  }
  const bool depth = c.name == "quality" || c.name == "common-prefix" ||
                     c.name.rfind("prism-", 0) == 0;
  if (depth && (c.k < 1 || !(c.t > 0.0))) throw ConfigInvalid(c.name + ": need k >= 1 and t > 0");
  if (c.name.rfind("prism-", 0) == 0 && p.m < 1) {
    throw ConfigInvalid(c.name + ": needs m >= 1");
  }
  if (c.name == "ledger-safety" && p.m < 1) throw ConfigInvalid("ledger-safety: needs m >= 1");
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigInvalid("config must be a JSON object");
  detail::reject_unknown(j, config_keys(), "config");
  ExperimentConfig cfg;
  try {
    apply_params(j, cfg.params);
    cfg.seed = detail::get_or<std::uint64_t>(j, "seed", cfg.seed);
    if (j.contains("strategy")) cfg.strategy = parse_strategy(j["strategy"]);
    if (j.contains("honest_tie_break")) {
      cfg.tie_break = parse_tie_break(j["honest_tie_break"].get<std::string>());
    }
    cfg.txs_per_block = detail::get_or(j, "txs_per_block", cfg.txs_per_block);
    cfg.trials = detail::get_or<std::int64_t>(j, "trials", cfg.trials);
    cfg.threads = detail::get_or<unsigned>(j, "threads", cfg.threads);
    cfg.json_out = detail::get_or<std::string>(j, "json_out", "");
    cfg.csv_out = detail::get_or<std::string>(j, "csv_out", "");
    if (j.contains("checks")) {
      for (const auto& c : j["checks"]) {
        CheckSpec spec;
        if (c.is_string()) {
          spec.name = c.get<std::string>();
        } else {
          detail::reject_unknown(c, {"name", "s", "t", "k", "grid", "chain"}, "check");
          spec.name = c.at("name").get<std::string>();
          spec.s = detail::get_or(c, "s", 0.0);
          spec.t = detail::get_or(c, "t", 0.0);
          spec.k = detail::get_or<std::uint32_t>(c, "k", 0);
          spec.grid = detail::get_or(c, "grid", std::vector<double>{});
          spec.chain = detail::get_or(c, "chain", 0);
        }
        cfg.checks.push_back(std::move(spec));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigInvalid(e.what());
  }
  try {
    validate_params(cfg.params);
    derive(cfg.params.alpha, cfg.params.delta_net, cfg.params.delta_typ);
    make_strategy(cfg.strategy);
  } catch (const std::exception& e) {
    throw ConfigInvalid(e.what());
  }
  if (cfg.trials < 0) throw ConfigInvalid("trials must be >= 0");
  for (const CheckSpec& c : cfg.checks) validate_check(c, cfg);
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

// Result of one check on one trial.
struct TrialOutcome {
  bool event_held = false;
  bool predicate_held = false;
  bool preconditions_met = true;
  bool vacuous = false;
  bool truncated = false;
  std::int64_t samples = 0;    // frequency checks: blocks or attacks observed
  std::int64_t successes = 0;  // laggers, loners or successful attacks
  double seconds = 0.0;
};

struct CheckReport {
  CheckSpec spec;
  std::int64_t trials = 0;
  std::int64_t event_held = 0;
  std::int64_t predicate_held = 0;
  std::int64_t preconditions_met = 0;
  std::int64_t violations = 0;  // event_held and not predicate_held
  std::int64_t failures = 0;    // not predicate_held
  std::int64_t vacuous = 0;
  std::int64_t truncated = 0;
  std::int64_t samples = 0;
  std::int64_t successes = 0;
  double frequency = 0.0;
  std::optional<double> bound;
  bool bound_vacuous = false;
  double ci_high = 1.0;  // one-sided 99% upper limit of `frequency`
  double ci95_lo = 0.0;  // two-sided 95% interval, frequency checks
  double ci95_hi = 1.0;
  double band = 0.0;     // 4-sigma band for lagger/loner checks
  bool bound_respected = true;
  double wall_time = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CheckReport> checks;
  double wall_time = 0.0;
};

inline std::vector<double> default_grid(double t, double horizon) {
  std::vector<double> grid;
  if (!(horizon > t)) return grid;
  for (int i = 1; i < 10; ++i) grid.push_back(t + (horizon - t) * i / 10.0);
  return grid;
}

// Analytic failure bound for a check, if it has one.
inline std::optional<double> analytic_bound(const CheckSpec& c, const ProtocolParams& p) {
  const DerivedParams d = derive(p.alpha, p.delta_net, p.delta_typ);
  const double depth = depth_bound(d, p.alpha, c.k, p.delta_net);
  if (c.name == "good-event" || c.name == "growth") return event_bounds(d, c.s, c.t).good.value;
  if (c.name == "typical-event") return event_bounds(d, c.s, c.t).typical.value;
  if (c.name == "quality" || c.name == "common-prefix" || c.name == "prism-quality") return depth;
  if (c.name == "prism-growth") {
    const double s = std::max(0.0, c.t - c.k / (d.growth_coeff * d.g * p.alpha));
    return event_bounds(d, s, c.t).good.value;
  }
  if (c.name == "prism-leader-prefix") return p.m * depth;
  if (c.name == "prism-tx") return (p.m + 1) * depth;
  if (c.name == "structural" || c.name == "ledger-safety") return 0.0;
  if (c.name == "lagger-frequency") return d.g;
  if (c.name == "loner-frequency") return d.g * d.g;
  return std::nullopt;
}

// Ledger checks: retained transactions pairwise conflict-free and a second
// sanitization pass changes nothing.
inline bool ledger_safe(const Trace& trace, const Ledger& ledger) {
  const auto& e = ledger.entries;
  for (std::size_t a = 0; a < e.size(); ++a) {
    for (std::size_t b = a + 1; b < e.size(); ++b) {
      if (e[a].tx == e[b].tx || conflicts(trace.tx(e[a].tx), trace.tx(e[b].tx))) return false;
    }
  }
  const auto again = sanitize(trace, e);
  if (again.size() != e.size()) return false;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (again[i].tx != e[i].tx) return false;
  }
  return true;
}

inline std::vector<TrialOutcome> evaluate_trial(const ExperimentConfig& cfg, const Trace& trace) {
  std::vector<TrialOutcome> out;
  const ProtocolParams& p = cfg.params;
  std::vector<std::unique_ptr<ChainAnalysis>> chains(static_cast<std::size_t>(p.m + 1));
  std::unique_ptr<PrismAnalysis> prism;
  auto chain = [&](int j) -> const ChainAnalysis& {
    auto& slot = chains[static_cast<std::size_t>(j)];
    if (!slot) slot = std::make_unique<ChainAnalysis>(trace.chain(j), p);
    return *slot;
  };
  auto prism_analysis = [&]() -> const PrismAnalysis& {
    if (!prism) prism = std::make_unique<PrismAnalysis>(trace, p);
    return *prism;
  };
  for (const CheckSpec& c : cfg.checks) {
    const auto start = std::chrono::steady_clock::now();
    TrialOutcome o;
    const std::vector<double> grid = c.grid.empty() ? default_grid(c.t, p.horizon) : c.grid;
    auto take = [&](const CheckResult& r) {
      o.event_held = r.event_held;
      o.predicate_held = r.predicate_held;
      o.preconditions_met = r.preconditions_met;
    };
    auto take_prism = [&](const PrismCheck& r) {
      take(r.result);
      o.vacuous = r.vacuous;
      o.truncated = r.truncated;
    };
    if (c.name == "good-event") {
      const auto counts = chain(c.chain).counter().counts(c.s, c.t);
      o.event_held = good_event(counts, c.s, c.t, p).all();
      o.predicate_held = o.event_held;
    } else if (c.name == "typical-event") {
      o.event_held = typical_event_proxy(chain(c.chain).counter(), c.s, c.t, p, p.horizon);
      o.predicate_held = o.event_held;
    } else if (c.name == "growth") {
      take(chain(c.chain).growth(c.s, c.t));
    } else if (c.name == "quality") {
      take(chain(c.chain).quality(c.t, c.k));
    } else if (c.name == "common-prefix") {
      take(chain(c.chain).common_prefix(c.t, c.k, grid));
    } else if (c.name == "structural") {
      o.event_held = true;
      o.predicate_held = true;
      for (int j = 0; j <= p.m; ++j) {
        const StructuralReport s = structural_lemmas(trace, j);
        o.predicate_held = o.predicate_held && s.all() &&
                           honest_compliant(trace.chain(j), p.delta_net) &&
                           budget_dominated(trace.chain(j),
                                            trace.schedule.adversarial[static_cast<std::size_t>(j)]);
      }
    } else if (c.name == "lagger-frequency" || c.name == "loner-frequency") {
      const HonestBlockFlags& f = chain(c.chain).counter().flags();
      o.event_held = true;
      o.predicate_held = true;
      for (std::size_t i = 0; i < f.blocks.size(); ++i) {
        if (c.name == "lagger-frequency") {
          ++o.samples;
          o.successes += f.lagger[i];
        } else if (f.loner[i] != LonerFlag::kUnknown) {
          ++o.samples;
          o.successes += f.loner[i] == LonerFlag::kYes ? 1 : 0;
        }
      }
    } else if (c.name == "private-chain") {
      o.event_held = true;
      o.predicate_held = true;
      if (trace.attack_success) {
        o.samples = 1;
        o.successes = *trace.attack_success ? 1 : 0;
      }
    } else if (c.name == "prism-growth") {
      take_prism(prism_analysis().growth(c.t, c.k));
    } else if (c.name == "prism-quality") {
      take_prism(prism_analysis().quality(c.t, c.k));
    } else if (c.name == "prism-leader-prefix") {
      take_prism(prism_analysis().leader_prefix(c.t, c.k, grid));
    } else if (c.name == "prism-tx") {
      take_prism(prism_analysis().tx_permanence(c.t, c.k, grid));
    } else if (c.name == "ledger-safety") {
      const LeaderSequence seq = leader_sequence(trace, p.horizon);
      const Ledger ledger = build_ledger(trace, seq);
      o.event_held = true;
      o.predicate_held = ledger_safe(trace, ledger);
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(o);
  }
  return out;
}

inline Trace run_trial(const ExperimentConfig& cfg, std::int64_t trial) {
  auto strategy = make_strategy(cfg.strategy);
  SimOptions opts;
  opts.tie_break = cfg.tie_break;
  opts.txs_per_block = cfg.txs_per_block;
  return run_simulation(cfg.params, *strategy, trial_seed(cfg.seed, trial), opts);
}

inline void finalize(CheckReport& r, const ProtocolParams& p) {
  const std::string& name = r.spec.name;
  r.bound = analytic_bound(r.spec, p);
  r.bound_vacuous = r.bound && !(*r.bound < 1.0);
  const bool frequency_check = name == "lagger-frequency" || name == "loner-frequency" ||
                               name == "private-chain";
  if (frequency_check) {
    r.frequency = r.samples > 0 ? static_cast<double>(r.successes) / r.samples : 0.0;
    r.ci_high = clopper_pearson_upper(r.successes, r.samples, 0.99);
    const Interval ci = clopper_pearson(r.successes, r.samples, 0.95);
    r.ci95_lo = ci.lo;
    r.ci95_hi = ci.hi;
    if (name != "private-chain" && r.samples > 0) {
      r.band = sigma_band(*r.bound, static_cast<double>(r.samples), 4.0);
      r.bound_respected = std::abs(r.frequency - *r.bound) <= r.band;
      r.predicate_held = r.bound_respected ? r.trials : 0;
      r.failures = r.trials - r.predicate_held;
    }
    return;
  }
  r.frequency = r.trials > 0 ? static_cast<double>(r.failures) / r.trials : 0.0;
  r.ci_high = clopper_pearson_upper(r.failures, r.trials, 0.99);
  const Interval ci = clopper_pearson(r.failures, r.trials, 0.95);
  r.ci95_lo = ci.lo;
  r.ci95_hi = ci.hi;
  if (r.bound && !r.bound_vacuous) r.bound_respected = r.ci_high <= *r.bound;
  if (r.bound && *r.bound == 0.0) r.bound_respected = r.failures == 0;
}

// Runs every trial (in parallel when threads != 1) and aggregates the
// checks in trial order, so the report does not depend on scheduling.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = cfg;
  const auto n = static_cast<std::size_t>(std::max<std::int64_t>(cfg.trials, 0));
  std::vector<std::vector<TrialOutcome>> results(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        const Trace trace = run_trial(cfg, static_cast<std::int64_t>(i));
        results[i] = evaluate_trial(cfg, trace);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : cfg.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  for (std::size_t c = 0; c < cfg.checks.size(); ++c) {
    CheckReport r;
    r.spec = cfg.checks[c];
    r.trials = static_cast<std::int64_t>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const TrialOutcome& o = results[i][c];
      r.event_held += o.event_held;
      r.predicate_held += o.predicate_held;
      r.preconditions_met += o.preconditions_met;
      r.violations += o.event_held && !o.predicate_held;
      r.failures += !o.predicate_held;
      r.vacuous += o.vacuous;
      r.truncated += o.truncated;
      r.samples += o.samples;
      r.successes += o.successes;
      r.wall_time += o.seconds;
    }
    finalize(r, cfg.params);
    report.checks.push_back(std::move(r));
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["alpha"] = cfg.params.alpha;
  j["beta"] = cfg.params.beta;
  j["delta_net"] = cfg.params.delta_net;
  j["delta_typ"] = cfg.params.delta_typ;
  j["m"] = cfg.params.m;
  j["horizon"] = cfg.params.horizon;
  j["seed"] = cfg.seed;
  j["strategy"] = {{"name", cfg.strategy.name}, {"params", cfg.strategy.params}};
  j["honest_tie_break"] = std::string(to_string(cfg.tie_break));
  j["txs_per_block"] = cfg.txs_per_block;
  j["trials"] = cfg.trials;
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckSpec& c : cfg.checks) {
    checks.push_back({{"name", c.name}, {"s", c.s}, {"t", c.t}, {"k", c.k},
                      {"grid", c.grid}, {"chain", c.chain}});
  }
  j["checks"] = std::move(checks);
  return j;
}

inline nlohmann::json report_to_json(const ExperimentReport& report, bool with_times = true) {
  nlohmann::json j;
  j["config"] = config_to_json(report.config);
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckReport& r : report.checks) {
    nlohmann::json c;
    c["check"] = r.spec.name;
    c["s"] = r.spec.s;
    c["t"] = r.spec.t;
    c["k"] = r.spec.k;
    c["chain"] = r.spec.chain;
    c["trials"] = r.trials;
    c["event_held"] = r.event_held;
    c["predicate_held"] = r.predicate_held;
    c["preconditions_met"] = r.preconditions_met;
    c["violations"] = r.violations;
    c["failures"] = r.failures;
    c["vacuous"] = r.vacuous;
    c["truncated"] = r.truncated;
    c["samples"] = r.samples;
    c["successes"] = r.successes;
    c["frequency"] = r.frequency;
    c["bound"] = r.bound ? nlohmann::json(*r.bound) : nlohmann::json(nullptr);
    c["bound_vacuous"] = r.bound_vacuous;
    c["ci_high"] = r.ci_high;
    c["ci95"] = {r.ci95_lo, r.ci95_hi};
    c["band"] = r.band;
    c["bound_respected"] = r.bound_respected;
    if (with_times) c["wall_time_s"] = r.wall_time;
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  if (with_times) j["wall_time_s"] = report.wall_time;
  return j;
}

inline void write_csv(const ExperimentReport& report, std::ostream& out) {
  out << "check,trials,violations,frequency,bound,ci_high\n";
  out << std::setprecision(10);
  for (const CheckReport& r : report.checks) {
    out << r.spec.name << ',' << r.trials << ',' << r.violations << ',' << r.frequency << ',';
    if (r.bound) out << *r.bound;
    out << ',' << r.ci_high << '\n';
  }
}

inline void write_outputs(const ExperimentReport& report, const std::string& json_path,
                          const std::string& csv_path) {
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) throw IoFailure("cannot write " + json_path);
    out << report_to_json(report).dump(2) << '\n';
    if (!out) throw IoFailure("write failed: " + json_path);
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw IoFailure("cannot write " + csv_path);
    write_csv(report, out);
    if (!out) throw IoFailure("write failed: " + csv_path);
  }
}

inline void print_table(const ExperimentReport& report, std::ostream& out) {
  out << std::left << std::setw(20) << "check" << std::right << std::setw(8) << "trials"
      << std::setw(8) << "event" << std::setw(8) << "pred" << std::setw(8) << "viol"
      << std::setw(13) << "frequency" << std::setw(13) << "bound" << std::setw(13) << "ci_high"
      << std::setw(10) << "time_s" << '\n';
  for (const CheckReport& r : report.checks) {
    std::ostringstream bound;
    if (r.bound) {
      bound << std::setprecision(4) << *r.bound << (r.bound_vacuous ? "*" : "");
    } else {
      bound << "-";
    }
    out << std::left << std::setw(20) << r.spec.name << std::right << std::setw(8) << r.trials
        << std::setw(8) << r.event_held << std::setw(8) << r.predicate_held << std::setw(8)
        << r.violations << std::setw(13) << std::setprecision(5) << r.frequency << std::setw(13)
        << bound.str() << std::setw(13) << std::setprecision(5) << r.ci_high << std::setw(10)
        << std::setprecision(3) << r.wall_time << '\n';
  }
  out << "(* vacuous bound >= 1)\n";
}

}  // namespace backbone

#endif  // BACKBONE_EXPERIMENT_HPP_
