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

#ifndef BACKBONE_CLI_HPP_
#define BACKBONE_CLI_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "backbone/adversary.hpp"
#include "backbone/bounds.hpp"
#include "backbone/experiment.hpp"
#include "backbone/mining_sim.hpp"
#include "backbone/prism.hpp"
#include "backbone/trace.hpp"

namespace backbone {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

namespace cli_detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamFlags {
  std::optional<double> alpha, beta, delta_net, delta_typ, horizon;
  std::optional<int> m;
  std::optional<std::uint64_t> seed;
  std::string strategy;
  std::vector<std::string> strategy_params;
  std::string tie_break;
  std::string config;

  void add_to(CLI::App* app, bool with_m) {
    app->add_option("--alpha", alpha, "honest mining rate per chain");
    app->add_option("--beta", beta, "adversarial mining rate per chain");
    app->add_option("--delta-net", delta_net, "propagation delay bound");
    app->add_option("--delta-typ", delta_typ, "typicality factor in (0, 40/81)");
    app->add_option("--horizon", horizon, "simulated time span");
    if (with_m) app->add_option("--m", m, "voter chain count (0: single chain)");
    app->add_option("--seed", seed, "base seed");
    app->add_option("--strategy", strategy,
                    "null | private_chain | selfish_mining | censor_votes");
    app->add_option("--strategy-param", strategy_params, "strategy parameter key=value")
        ->take_all();
    app->add_option("--tie-break", tie_break, "earliest | adversary-steered | max-delay");
    app->add_option("--config", config, "JSON config file; its keys override flags");
  }

  // Flags first, then config keys on top.
  void apply(ProtocolParams& p, StrategySpec& s, HonestTieBreak& tb,
             std::optional<std::uint64_t>& seed_out, nlohmann::json* raw = nullptr) const {
    if (alpha) p.alpha = *alpha;
    if (beta) p.beta = *beta;
    if (delta_net) p.delta_net = *delta_net;
    if (delta_typ) p.delta_typ = *delta_typ;
    if (horizon) p.horizon = *horizon;
    if (m) p.m = *m;
    if (seed) seed_out = seed;
    if (!strategy.empty()) s.name = strategy;
    for (const std::string& kv : strategy_params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--strategy-param expects key=value");
      try {
        s.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw UsageError("--strategy-param value must be numeric: " + kv);
      }
    }
    if (!tie_break.empty()) tb = parse_tie_break(tie_break);
    if (config.empty()) return;
    std::ifstream in(config);
    if (!in) throw IoFailure("cannot open config " + config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigInvalid("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigInvalid("config must be a JSON object");
    detail::reject_unknown(j, config_keys(), "config");
    try {
      apply_params(j, p);
      if (j.contains("seed")) seed_out = j["seed"].get<std::uint64_t>();
      if (j.contains("strategy")) s = parse_strategy(j["strategy"]);
      if (j.contains("honest_tie_break")) {
        tb = parse_tie_break(j["honest_tie_break"].get<std::string>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigInvalid(std::string("bad config value: ") + e.what());
    }
    if (raw) *raw = std::move(j);
  }
};

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot write " + path);
  out << body;
  if (!out) throw IoFailure("write failed: " + path);
}

inline std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

struct BoundsFlags {
  double alpha = 1.0;
  double beta = 0.0;
  double delta_net = 0.0;
  double delta_typ = 0.1;
  int m = 1;
  std::optional<double> eps;
  std::optional<double> k;
  double interval = 100.0;
  std::optional<double> eta;
  std::optional<double> mu;
  std::optional<double> ref_mu;
  std::string out;
};

inline int run_bounds(const BoundsFlags& f, std::ostream& out) {
  DerivedParams d = derive(f.alpha, f.delta_net, f.delta_typ);
  const double mu_formula = d.mu;
  if (f.eta) {
    d.eta = *f.eta;
    d.mu = mu_from_eta(d.eta);
  }
  const double mu_of_eta = d.mu;
  if (f.mu) d.mu = *f.mu;
  const Admissibility adm = admissible(f.alpha, f.beta, f.delta_net, f.delta_typ);
  const EventBounds ev = event_bounds(d, 0.0, f.interval);
  const double k = f.k ? *f.k : std::ceil(min_theorem_depth(f.alpha, f.delta_net, f.delta_typ));
  const double depth = depth_bound(d, f.alpha, k, f.delta_net);
  nlohmann::json j;
  auto row = [&](const std::string& name, const std::string& value) {
    out << std::left << std::setw(34) << name << value << '\n';
  };
  row("g", fmt(d.g, 12));
  row("eta", fmt(d.eta, 12) + (f.eta ? "  (override)" : ""));
  row("mu", fmt(d.mu, 12) + (f.mu ? "  (override; formula gives " + fmt(mu_of_eta, 8) + ")" : ""));
  row("growth coefficient 1-41d/40", fmt(d.growth_coeff, 12));
  row("admissibility lhs", fmt(adm.lhs, 12));
  row("admissible (lhs > beta)", std::string(adm.ok ? "yes" : "no") + "  (beta = " + fmt(f.beta) + ")");
  row("good-event bound, t-s=" + fmt(f.interval), fmt(ev.good.value, 8) + (ev.good.vacuous ? "  (vacuous)" : ""));
  row("typical-event bound, t-s=" + fmt(f.interval),
      fmt(ev.typical.value, 8) + (ev.typical.vacuous ? "  (vacuous)" : ""));
  row("depth bound, k=" + fmt(k, 10), fmt(depth, 8) + (depth >= 1.0 ? "  (vacuous)" : ""));
  row("minimum event interval", fmt(min_event_interval(f.delta_net, f.delta_typ), 10));
  row("minimum theorem depth", fmt(min_theorem_depth(f.alpha, f.delta_net, f.delta_typ), 10));
  j["g"] = d.g;
  j["eta"] = d.eta;
  j["mu"] = d.mu;
  j["mu_formula"] = mu_formula;
  j["growth_coeff"] = d.growth_coeff;
  j["admissible_lhs"] = adm.lhs;
  j["admissible"] = adm.ok;
  j["good_bound"] = ev.good.value;
  j["typical_bound"] = ev.typical.value;
  j["k"] = k;
  j["depth_bound"] = depth;
  if (f.ref_mu) {
    const bool same = std::abs(*f.ref_mu - mu_of_eta) <= 1e-3 * std::abs(mu_of_eta);
    row("reference mu " + fmt(*f.ref_mu),
        same ? "reproduced" : "not reproduced (formula gives " + fmt(mu_of_eta, 8) + ")");
    j["ref_mu"] = *f.ref_mu;
    j["ref_mu_reproduced"] = same;
  }
  if (f.eps) {
    try {
      const double t = prism_leader_time(0.0, *f.eps, f.m, d, f.alpha, f.delta_net);
      const auto depth_leader = confirmation_depth(d, f.m, *f.eps, f.alpha, f.delta_net);
      row("leader depth k (m=" + std::to_string(f.m) + ")", std::to_string(depth_leader));
      row("leader time t - R_h", std::isinf(t) ? "inf (diverges: g = 1)" : fmt(t, 10));
      j["leader_k"] = depth_leader;
      j["leader_time"] = std::isinf(t) ? nlohmann::json(nullptr) : nlohmann::json(t);
    } catch (const BoundsError& e) {
      row("leader time", e.what());
    }
    try {
      const TxConfirmation c = prism_tx_time(0.0, *f.eps, f.m, d, f.alpha, f.delta_net);
      row("tx depth k (m=" + std::to_string(f.m) + ")", std::to_string(c.k));
      row("tx time t - r", std::isinf(c.t) ? "inf (diverges: g = 1)" : fmt(c.t, 10));
      j["tx_k"] = c.k;
      j["tx_time"] = std::isinf(c.t) ? nlohmann::json(nullptr) : nlohmann::json(c.t);
    } catch (const BoundsError& e) {
      row("tx time", e.what());
    }
  }
  if (!f.out.empty()) write_file(f.out, j.dump(2) + "\n");
  return kExitOk;
}

inline void print_trace_summary(const Trace& trace, std::ostream& out) {
  out << "strategy " << trace.strategy << ", seed " << trace.seed << ", horizon "
      << trace.params.horizon << '\n';
  for (const BlockStore& store : trace.chains) {
    std::size_t honest = 0;
    std::size_t adversarial = 0;
    std::size_t withheld = 0;
    for (const Block& b : store.blocks()) {
      if (b.id == kGenesis) continue;
      if (b.honest()) {
        ++honest;
      } else {
        ++adversarial;
        if (!b.published()) ++withheld;
      }
    }
    out << "chain " << store.chain() << ": honest " << honest << ", adversarial " << adversarial
        << " (never published " << withheld << "), max published height "
        << max_published_height(store, trace.params.horizon) << '\n';
  }
  if (trace.attack_success) {
    out << "attack " << (*trace.attack_success ? "succeeded" : "failed") << '\n';
  }
}

inline Trace simulate_from(const ProtocolParams& p, const StrategySpec& s, HonestTieBreak tb,
                           std::uint64_t seed) {
  auto strategy = make_strategy(s);
  SimOptions opts;
  opts.tie_break = tb;
  return run_simulation(p, *strategy, seed, opts);
}

struct VerifyDefaults {
  ProtocolParams params;
  std::uint32_t k = 0;
  double t = 0.0;
};

// Admissible defaults for `verify`: a single chain for the bitcoin
// checks, five voter chains for the Prism ones.
inline VerifyDefaults verify_defaults(bool prism) {
  VerifyDefaults v;
  if (prism) {
    v.params = {1.0, 0.03, 0.7, 0.4, 5, 0.0};
    v.k = 700;
    v.t = 4800.0;
    v.params.horizon = v.t + 20.0;
    return v;
  }
  v.params = {1.0, 0.3, 0.05, 0.2, 0, 0.0};
  const DerivedParams d = derive(1.0, 0.05, 0.2);
  v.k = static_cast<std::uint32_t>(std::ceil(min_theorem_depth(1.0, 0.05, 0.2)));
  v.t = std::ceil(v.k / (d.growth_coeff * d.g * 1.0));
  v.params.horizon = v.t + 100.0;
  return v;
}

}  // namespace cli_detail

// Entry point of the `backbone` tool. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Continuous-time bitcoin and Prism backbone laboratory", "backbone"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  BoundsFlags bf;
  auto* bounds = app.add_subcommand("bounds", "closed-form quantities and bounds");
  bounds->add_option("--alpha", bf.alpha, "honest mining rate");
  bounds->add_option("--beta", bf.beta, "adversarial mining rate");
  bounds->add_option("--delta-net", bf.delta_net, "propagation delay bound");
  bounds->add_option("--delta-typ", bf.delta_typ, "typicality factor");
  bounds->add_option("--m", bf.m, "voter chain count for the Prism confirmation formulas");
  bounds->add_option("--eps", bf.eps, "target failure probability");
  bounds->add_option("--k", bf.k, "confirmation depth for the depth bound");
  bounds->add_option("--interval", bf.interval, "interval length t - s for event bounds");
  bounds->add_option("--eta", bf.eta, "override eta (mu is recomputed from it)");
  bounds->add_option("--mu", bf.mu, "override mu");
  bounds->add_option("--ref-mu", bf.ref_mu, "reference mu value to compare with the formula");
  bounds->add_option("--out", bf.out, "JSON output file");

  ParamFlags sim_flags;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "run one simulation and write its trace");
  sim_flags.add_to(simulate, true);
  simulate->add_option("--out", sim_out, "trace JSONL output");

  std::string mc_config;
  std::optional<std::int64_t> mc_trials;
  std::optional<unsigned> mc_threads;
  std::string mc_json;
  std::string mc_csv;
  auto* montecarlo = app.add_subcommand("montecarlo", "run a Monte Carlo experiment");
  montecarlo->add_option("--config", mc_config, "experiment config (JSON)")->required();
  montecarlo->add_option("--trials", mc_trials, "override trial count");
  montecarlo->add_option("--threads", mc_threads, "worker threads (0: all cores)");
  montecarlo->add_option("--out", mc_json, "JSON report (overrides json_out)");
  montecarlo->add_option("--csv", mc_csv, "CSV summary (overrides csv_out)");

  ParamFlags prism_flags;
  std::string prism_out;
  std::string prism_ledger;
  auto* prism_sim = app.add_subcommand("prism-sim", "run one Prism simulation, dump trace and ledger");
  prism_flags.add_to(prism_sim, true);
  prism_sim->add_option("--out", prism_out, "trace JSONL output");
  prism_sim->add_option("--ledger", prism_ledger, "ledger JSONL output");

  ParamFlags verify_flags;
  std::string verify_check = "common-prefix";
  std::int64_t verify_trials = 100;
  bool verify_strict = false;
  std::optional<std::uint32_t> verify_k;
  std::optional<double> verify_t;
  std::optional<double> verify_s;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "check theorem implications on seeded trials");
  verify_flags.add_to(verify, true);
  verify->add_option("--check", verify_check, "check name");
  verify->add_option("--trials", verify_trials, "trial count");
  verify->add_flag("--strict", verify_strict, "exit 1 on any event_held && !predicate_held");
  verify->add_option("--k", verify_k, "depth");
  verify->add_option("--t", verify_t, "evaluation time");
  verify->add_option("--s", verify_s, "interval start");
  verify->add_option("--out", verify_out, "JSONL rows per (trial, check)");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*bounds) return run_bounds(bf, out);

    if (*simulate || *prism_sim) {
      const bool is_prism = static_cast<bool>(*prism_sim);
      ParamFlags& flags = is_prism ? prism_flags : sim_flags;
      ProtocolParams p;
      if (is_prism) {
        p.m = 5;
        p.delta_net = 0.1;
      }
      StrategySpec s;
      HonestTieBreak tb = HonestTieBreak::kEarliest;
      std::optional<std::uint64_t> seed;
      flags.apply(p, s, tb, seed);
      if (!seed) throw UsageError("--seed is required (or a config with a seed)");
      if (is_prism && p.m < 1) throw UsageError("prism-sim needs --m >= 1");
      const Trace trace = simulate_from(p, s, tb, *seed);
      print_trace_summary(trace, out);
      const std::string& trace_path = is_prism ? prism_out : sim_out;
      if (!trace_path.empty()) {
        std::ostringstream body;
        write_trace_jsonl(trace, body);
        write_file(trace_path, body.str());
      }
      if (is_prism) {
        const LeaderSequence seq = leader_sequence(trace, p.horizon);
        const Ledger ledger = build_ledger(trace, seq);
        out << "leader sequence height " << seq.height() << ", ledger " << ledger.entries.size()
            << " transactions\n";
        if (!prism_ledger.empty()) {
          std::ostringstream body;
          for (const LedgerEntry& e : ledger.entries) {
            nlohmann::json row;
            row["epoch"] = e.epoch;
            row["leader"] = seq.leaders[e.epoch].value;
            row["tx"] = e.tx;
            body << row.dump() << '\n';
          }
          write_file(prism_ledger, body.str());
        }
      }
      return kExitOk;
    }

    if (*montecarlo) {
      ExperimentConfig cfg = load_config(mc_config);
      if (mc_trials) {
        if (*mc_trials < 0) throw UsageError("--trials must be >= 0");
        cfg.trials = *mc_trials;
      }
      if (mc_threads) cfg.threads = *mc_threads;
      if (!mc_json.empty()) cfg.json_out = mc_json;
      if (!mc_csv.empty()) cfg.csv_out = mc_csv;
      const ExperimentReport report = run_experiment(cfg);
      print_table(report, out);
      write_outputs(report, cfg.json_out, cfg.csv_out);
      return kExitOk;
    }

    if (*verify) {
      const auto& names = check_names();
      if (std::find(names.begin(), names.end(), verify_check) == names.end()) {
        throw UsageError("unknown check '" + verify_check + "'");
      }
      const bool is_prism = verify_check.rfind("prism-", 0) == 0 || verify_check == "ledger-safety";
      VerifyDefaults v = verify_defaults(is_prism);
      StrategySpec s;
      HonestTieBreak tb = HonestTieBreak::kEarliest;
      std::optional<std::uint64_t> seed;
      verify_flags.apply(v.params, s, tb, seed);
      if (verify_trials < 0) throw UsageError("--trials must be >= 0");
      ExperimentConfig cfg;
      cfg.params = v.params;
      cfg.seed = seed.value_or(1);
      cfg.strategy = s;
      cfg.tie_break = tb;
      cfg.trials = verify_trials;
      CheckSpec c;
      c.name = verify_check;
      c.k = verify_k.value_or(v.k);
      c.t = verify_t.value_or(v.t);
      if (verify_s) {
        c.s = *verify_s;
      } else if (verify_check == "growth" || verify_check == "good-event" ||
                 verify_check == "typical-event") {
        c.s = 0.0;
      }
      cfg.checks.push_back(c);
      for (const CheckSpec& spec : cfg.checks) validate_check(spec, cfg);
      std::ostringstream rows;
      std::int64_t violations = 0;
      for (std::int64_t i = 0; i < cfg.trials; ++i) {
        const Trace trace = run_trial(cfg, i);
        const TrialOutcome o = evaluate_trial(cfg, trace).front();
        violations += o.event_held && !o.predicate_held;
        nlohmann::json row;
        row["trial"] = i;
        row["check"] = c.name;
        row["s"] = c.s;
        row["t"] = c.t;
        row["k"] = c.k;
        row["event_held"] = o.event_held;
        row["predicate_held"] = o.predicate_held;
        rows << row.dump() << '\n';
      }
      if (!verify_out.empty()) write_file(verify_out, rows.str());
      out << "verify " << c.name << ": " << cfg.trials << " trials, " << violations
          << " violations (event_held && !predicate_held)\n";
      if (verify_strict && violations > 0) return kExitCheckFailed;
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigInvalid& e) {
    err << "ConfigInvalid: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BoundsError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoFailure& e) {
    err << "IoFailure: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace backbone

#endif  // BACKBONE_CLI_HPP_
