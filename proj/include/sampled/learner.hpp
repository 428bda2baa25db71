#pragma once

#include <deque>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "sampled/env.hpp"
#include "sampled/mcts.hpp"

namespace sampled {

// Tabular policy and value tables keyed by environment state keys.
// Unseen states fall back to a uniform policy and value 0.
class TabularAgent final : public PolicyValueSource {
 public:
  TabularAgent(double learning_rate_pi, double learning_rate_v)
      : lr_pi_(learning_rate_pi), lr_v_(learning_rate_v) {}

  std::vector<double> policy(const std::string& state_key,
                             int num_actions) const override;
  double value(const std::string& state_key) const override;

  // KL projection step: mixes the full-space visit target into the stored
  // row (unsampled actions keep their mass scaled by 1 - lr_pi).
  void update_policy(const std::string& state_key,
                     const std::vector<double>& full_space_target);
  void update_value(const std::string& state_key, double target);

  double lr_pi() const { return lr_pi_; }
  double lr_v() const { return lr_v_; }
  std::size_t policy_rows() const { return policy_.size(); }

  void save(std::ostream& out) const;
  static TabularAgent load(std::istream& in);

 private:
  double lr_pi_;
  double lr_v_;
  std::unordered_map<std::string, std::vector<double>> policy_;
  std::unordered_map<std::string, double> value_;
};

struct TrajectoryStep {
  std::string state_key;
  SearchResult search;
  ActionId action = 0;
  double reward = 0.0;
  bool done = false;
  int to_play = 0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  double episode_return = 0.0;
  bool truncated = false;
};

// FIFO buffer of recent trajectories with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(Trajectory t);
  const Trajectory& sample(Rng& rng) const;
  std::size_t size() const { return buffer_.size(); }

 private:
  std::size_t capacity_;
  std::deque<Trajectory> buffer_;
};

struct ActOptions {
  bool evaluation = false;  // argmax visits instead of sampling
  int max_steps = 200;
  int episode = 0;          // selects the start state during training
  bool from_canonical_start = false;
};

// Runs one episode: a search per step with the agent backing the model's
// policy/value heads and the exact simulator backing dynamics. Training
// mode samples the executed action from the visit distribution.
Trajectory act(const TabularAgent& agent, const Environment& env,
               const SearchConfig& config, Rng& rng,
               const ActOptions& options = {});

// n-step return: sum of discounted rewards plus a bootstrapped tail value,
// truncated at terminal (bootstrap 0 past the end of a finished episode).
double n_step_target(const Trajectory& trajectory, std::size_t t, int n,
                     double gamma, const TabularAgent& agent);

struct UpdateItem {
  std::string state_key;
  std::vector<double> full_space_target;  // zero off the sampled support
  double value_target = 0.0;
};

void update(TabularAgent& agent, const std::vector<UpdateItem>& batch);

// Builds the full-space policy target from a search result: visit mass on
// the sampled actions, zero elsewhere.
std::vector<double> visit_target(const SearchResult& search, int num_actions);

struct TrainConfig {
  int episodes = 2000;
  int n_step = 5;
  double gamma = 0.99;
  std::size_t replay_capacity = 2000;
  int updates_per_episode = 1;  // replayed trajectories per fresh episode
  int eval_every = 0;           // 0 disables periodic evaluation
  int eval_episodes = 10;
  // Two-player self-play trains from final outcomes instead of n-step
  // bootstrapped returns.
  bool outcome_targets = false;
};

struct EvalPoint {
  int episode = 0;
  double mean_return = 0.0;
};

struct TrainResult {
  std::vector<EvalPoint> curve;
};

TrainResult train(TabularAgent& agent, const Environment& env,
                  const SearchConfig& search_config,
                  const TrainConfig& train_config, Rng& rng);

double evaluate(const TabularAgent& agent, const Environment& env,
                const SearchConfig& config, int episodes, Rng& rng);

}  // namespace sampled
