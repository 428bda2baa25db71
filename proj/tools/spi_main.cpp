// Command-line surface: operator verification, single searches, and
// training runs. All commands are seed-deterministic and write their
// resolved configuration beside their outputs.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sampled/bandit.hpp"
#include "sampled/gridworld.hpp"
#include "sampled/learner.hpp"
#include "sampled/mcts.hpp"
#include "sampled/operators.hpp"
#include "sampled/stats.hpp"
#include "sampled/tictactoe.hpp"

namespace fs = std::filesystem;
using namespace sampled;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitGateFailure = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string out = "out";
  std::string env = "gridworld";
  int k = 20;
  int simulations = 50;
  std::string prior_mode = "pi-hat-beta";
  bool exhaustive = false;
  int replicas = 1000;
  double temperature = 1.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "Global RNG seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--k", o.k, "Samples per node expansion");
  cmd->add_option("--simulations", o.simulations, "Search simulations");
  cmd->add_option("--prior-mode", o.prior_mode, "pi-hat-beta or raw-pi")
      ->check(CLI::IsMember({"pi-hat-beta", "raw-pi"}));
  cmd->add_flag("--exhaustive", o.exhaustive,
                "Expand every action once (test mode)");
  cmd->add_option("--temperature", o.temperature, "Proposal temperature");
}

PriorMode parse_prior_mode(const std::string& s) {
  return s == "raw-pi" ? PriorMode::kRawPi : PriorMode::kPiHatBeta;
}

void write_resolved_config(const fs::path& path, const std::string& section,
                           const std::vector<std::pair<std::string,
                                                       std::string>>& kv) {
  std::ofstream out(path);
  out << "[" << section << "]\n";
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

std::vector<std::pair<std::string, std::string>> common_kv(
    const CommonOpts& o) {
  return {{"seed", std::to_string(o.seed)},
          {"out", o.out},
          {"env", o.env},
          {"k", std::to_string(o.k)},
          {"simulations", std::to_string(o.simulations)},
          {"prior-mode", o.prior_mode},
          {"exhaustive", o.exhaustive ? "true" : "false"},
          {"replicas", std::to_string(o.replicas)},
          {"temperature", std::to_string(o.temperature)}};
}

// The frozen one-step probe used by the pi-bar tracking check: 10 arms
// with fixed deterministic rewards.
const std::vector<double> kFrozenRewards{0.0,  0.2,   0.35, 0.45, 0.52,
                                         0.57, 0.60, 0.625, 0.64, 0.65};

class FrozenArms final : public Environment {
 public:
  struct State final : ModelState {
    bool done = false;
  };
  int num_actions() const override {
    return static_cast<int>(kFrozenRewards.size());
  }
  StateHandle initial_state() const override {
    return std::make_shared<State>();
  }
  EnvStep step(const StateHandle& state, ActionId a) const override {
    if (dynamic_cast<const State&>(*state).done) {
      throw std::logic_error("FrozenArms: past terminal");
    }
    auto next = std::make_shared<State>();
    next->done = true;
    return {next, kFrozenRewards.at(a), true};
  }
  std::vector<double> legal_mask(const StateHandle&) const override {
    return std::vector<double>(kFrozenRewards.size(), 1.0);
  }
  std::string state_key(const StateHandle& state) const override {
    return dynamic_cast<const State&>(*state).done ? "ft" : "f";
  }
  bool is_terminal(const StateHandle& state) const override {
    return dynamic_cast<const State&>(*state).done;
  }
};

int cmd_verify_operators(const CommonOpts& o) {
  if (o.replicas <= 0) {
    std::cerr << "verify-operators: --replicas must be positive\n";
    return kExitUsage;
  }
  fs::create_directories(o.out);
  SuiteSpec spec;
  spec.replicas = o.replicas;
  spec.seed = {o.seed, 0};
  const auto report = run_operator_convergence_suite(spec);

  std::ofstream csv(fs::path(o.out) / "verify_operators.csv");
  write_suite_csv(report, csv);
  write_resolved_config(fs::path(o.out) / "verify_operators.config",
                        "verify-operators", common_kv(o));

  const auto failures = check_suite_gates(report, SuiteGates{});
  for (const auto& fam : report.families) {
    std::cout << family_name(fam.op.family)
              << ": slope=" << fam.variance_slope
              << " tv@K=" << fam.per_k.back().k << "="
              << fam.per_k.back().tv << "\n";
  }
  if (!failures.empty()) {
    for (const auto& f : failures) std::cout << "GATE FAIL: " << f << "\n";
    return kExitGateFailure;
  }
  std::cout << "all operator gates passed\n";
  return kExitPass;
}

std::unique_ptr<Environment> make_env(const std::string& name) {
  if (name == "gridworld") {
    return std::make_unique<GridWorld>(5, 5, std::set<int>{7, 12}, 24, 0.0,
                                       0);
  }
  if (name == "tictactoe") return std::make_unique<TicTacToe>();
  if (name == "frozen") return std::make_unique<FrozenArms>();
  if (name == "bandit") {
    FactoredActionCodec codec{6, 7};
    const std::vector<int> star{1, 4, 2, 5, 3, 0};
    return std::make_unique<FactoredBanditEnv>(
        ContinuousBandit::on_centers(6, codec, star), codec);
  }
  return nullptr;
}

SearchConfig search_config_from(const CommonOpts& o, const Environment& env) {
  SearchConfig config;
  config.k_samples = o.k;
  config.num_simulations = o.simulations;
  config.prior_mode = parse_prior_mode(o.prior_mode);
  config.exhaustive_mode = o.exhaustive;
  config.proposal_temperature = o.temperature;
  if (env.two_player()) {
    config.two_player = true;
    config.gamma = 1.0;
  }
  return config;
}

void dump_search_result(const SearchResult& result, std::ostream& out) {
  out << "action visits visit_prob prior q\n";
  out.precision(12);
  for (std::size_t i = 0; i < result.sampled_actions.size(); ++i) {
    out << result.sampled_actions[i] << " " << result.per_action_visits[i]
        << " " << result.visit_distribution[static_cast<ActionId>(i)] << " "
        << result.per_action_prior[i] << " " << result.per_action_q[i]
        << "\n";
  }
  out << "root_value " << result.root_value << "\n";
}

int cmd_search(const CommonOpts& o, bool reference) {
  const auto env = make_env(o.env);
  if (!env) {
    std::cerr << "search: unknown env '" << o.env << "'\n";
    return kExitUsage;
  }
  fs::create_directories(o.out);
  auto config = search_config_from(o, *env);
  if (o.env == "frozen") {
    config.exhaustive_mode = true;
    config.root_q_init = true;
    config.gamma = 1.0;
    config.dirichlet_fraction = 0.0;
  }
  EnvBackedModel model(*env, nullptr);
  Rng rng({o.seed, 0});
  const auto result =
      reference
          ? run_search_full_reference(env->initial_state(), model, config,
                                      rng)
          : run_search(env->initial_state(), model, config, rng);

  std::ofstream dump(fs::path(o.out) / "search.txt");
  dump_search_result(result, dump);
  dump_search_result(result, std::cout);
  auto kv = common_kv(o);
  kv.emplace_back("reference", reference ? "true" : "false");
  write_resolved_config(fs::path(o.out) / "search.config", "search", kv);

  if (o.env == "frozen") {
    // Report distance to the analytic regularized target on the
    // normalized-Q scale the search uses.
    const int n = static_cast<int>(kFrozenRewards.size());
    const double q_lo = kFrozenRewards.front();
    const double q_hi = kFrozenRewards.back();
    std::vector<double> qn(n);
    for (int i = 0; i < n; ++i) {
      qn[i] = (kFrozenRewards[i] - q_lo) / (q_hi - q_lo);
    }
    const int sims = config.num_simulations;
    const double c =
        config.c1 + std::log((1.0 + config.c2 + sims) / config.c2);
    const double lambda =
        c * std::sqrt(static_cast<double>(sims)) / (sims + n);
    const auto pi_bar = improve_exact(
        DiscreteDistribution::uniform(n), {qn, 0.0},
        {OperatorFamily::kMuZeroRegularized, 1.0, lambda});
    std::vector<double> visits(result.visit_distribution.probs().begin(),
                               result.visit_distribution.probs().end());
    const double tv = tv_distance(visits, pi_bar.probs);
    std::cout << "tv_to_analytic_target " << tv << "\n";
  }
  return kExitPass;
}

int cmd_train(const CommonOpts& o, int episodes, double lr_pi, double lr_v) {
  const auto env = make_env(o.env);
  if (!env || o.env == "frozen") {
    std::cerr << "train: unknown env '" << o.env << "'\n";
    return kExitUsage;
  }
  if (episodes <= 0) {
    std::cerr << "train: --episodes must be positive\n";
    return kExitUsage;
  }
  fs::create_directories(o.out);
  auto config = search_config_from(o, *env);
  config.root_q_init = true;

  TrainConfig tc;
  tc.episodes = episodes;
  tc.gamma = config.gamma;
  tc.eval_every = std::max(1, episodes / 20);
  tc.eval_episodes = 10;
  tc.outcome_targets = env->two_player();

  TabularAgent agent(lr_pi, lr_v);
  Rng rng({o.seed, 0});
  const auto result = train(agent, *env, config, tc, rng);

  std::ofstream curve(fs::path(o.out) / "learning_curve.csv");
  curve << "episode,mean_return\n";
  curve.precision(12);
  for (const auto& p : result.curve) {
    curve << p.episode << "," << p.mean_return << "\n";
  }
  std::ofstream ckpt(fs::path(o.out) / "checkpoint.txt");
  agent.save(ckpt);
  auto kv = common_kv(o);
  kv.emplace_back("episodes", std::to_string(episodes));
  kv.emplace_back("lr-pi", std::to_string(lr_pi));
  kv.emplace_back("lr-v", std::to_string(lr_v));
  write_resolved_config(fs::path(o.out) / "train.config", "train", kv);

  Rng eval_rng({o.seed, 0xE0A1});
  const double final_eval = evaluate(agent, *env, config, 20, eval_rng);
  std::cout << "final_eval_mean_return " << final_eval << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample-based policy iteration and sampled-PUCT search"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value config file with "
                                 "per-command sections");

  CommonOpts verify_opts, search_opts, train_opts;
  bool reference = false;
  int episodes = 2000;
  double lr_pi = 0.3, lr_v = 0.3;

  auto* verify = app.add_subcommand(
      "verify-operators", "Run the operator convergence/variance gates");
  add_common(verify, verify_opts);
  verify->add_option("--replicas", verify_opts.replicas,
                     "Monte-Carlo replicas per K");

  auto* search = app.add_subcommand("search", "Run one search and dump it");
  add_common(search, search_opts);
  search->add_option("--env", search_opts.env,
                     "gridworld | tictactoe | bandit | frozen");
  search->add_flag("--reference", reference,
                   "Use the full-enumeration reference search");

  auto* train_cmd = app.add_subcommand("train", "Train a tabular agent");
  add_common(train_cmd, train_opts);
  train_cmd->add_option("--env", train_opts.env,
                        "gridworld | tictactoe | bandit");
  train_cmd->add_option("--episodes", episodes, "Training episodes");
  train_cmd->add_option("--lr-pi", lr_pi, "Policy learning rate");
  train_cmd->add_option("--lr-v", lr_v, "Value learning rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify_operators(verify_opts);
    if (search->parsed()) return cmd_search(search_opts, reference);
    if (train_cmd->parsed()) {
      return cmd_train(train_opts, episodes, lr_pi, lr_v);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
