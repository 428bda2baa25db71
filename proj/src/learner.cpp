#include "sampled/learner.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace sampled {

std::vector<double> TabularAgent::policy(const std::string& state_key,
                                         int num_actions) const {
  if (auto it = policy_.find(state_key); it != policy_.end()) {
    return it->second;
  }
  return std::vector<double>(num_actions,
                             1.0 / static_cast<double>(num_actions));
}

double TabularAgent::value(const std::string& state_key) const {
  if (auto it = value_.find(state_key); it != value_.end()) return it->second;
  return 0.0;
}

void TabularAgent::update_policy(const std::string& state_key,
                                 const std::vector<double>& target) {
  auto it = policy_.find(state_key);
  std::vector<double> row =
      it != policy_.end()
          ? it->second
          : std::vector<double>(target.size(),
                                1.0 / static_cast<double>(target.size()));
  if (row.size() != target.size()) {
    throw std::invalid_argument("update_policy: action count mismatch");
  }
  for (std::size_t a = 0; a < row.size(); ++a) {
    row[a] = (1.0 - lr_pi_) * row[a] + lr_pi_ * target[a];
  }
  policy_[state_key] = std::move(row);
}

void TabularAgent::update_value(const std::string& state_key, double target) {
  auto& v = value_[state_key];
  v += lr_v_ * (target - v);
}

void TabularAgent::save(std::ostream& out) const {
  out << "tabular-agent v1\n" << lr_pi_ << " " << lr_v_ << "\n";
  out << "policy " << policy_.size() << "\n";
  out.precision(17);
  for (const auto& [key, row] : policy_) {
    out << key << " " << row.size();
    for (double p : row) out << " " << p;
    out << "\n";
  }
  out << "value " << value_.size() << "\n";
  for (const auto& [key, v] : value_) out << key << " " << v << "\n";
}

TabularAgent TabularAgent::load(std::istream& in) {
  std::string tag, version;
  in >> tag >> version;
  if (tag != "tabular-agent" || version != "v1") {
    throw std::runtime_error("checkpoint: unknown header");
  }
  double lr_pi = 0.0, lr_v = 0.0;
  in >> lr_pi >> lr_v;
  TabularAgent agent(lr_pi, lr_v);
  std::size_t count = 0;
  in >> tag >> count;
  if (tag != "policy") throw std::runtime_error("checkpoint: bad section");
  for (std::size_t i = 0; i < count; ++i) {
    std::string key;
    std::size_t n = 0;
    in >> key >> n;
    std::vector<double> row(n);
    for (auto& p : row) in >> p;
    agent.policy_[key] = std::move(row);
  }
  in >> tag >> count;
  if (tag != "value") throw std::runtime_error("checkpoint: bad section");
  for (std::size_t i = 0; i < count; ++i) {
    std::string key;
    double v = 0.0;
    in >> key >> v;
    agent.value_[key] = v;
  }
  if (!in) throw std::runtime_error("checkpoint: truncated");
  return agent;
}

void ReplayBuffer::push(Trajectory t) {
  buffer_.push_back(std::move(t));
  while (buffer_.size() > capacity_) buffer_.pop_front();
}

const Trajectory& ReplayBuffer::sample(Rng& rng) const {
  if (buffer_.empty()) throw std::logic_error("ReplayBuffer: empty");
  const auto i = static_cast<std::size_t>(rng.uniform() * buffer_.size());
  return buffer_[std::min(i, buffer_.size() - 1)];
}

Trajectory act(const TabularAgent& agent, const Environment& env,
               const SearchConfig& config, Rng& rng,
               const ActOptions& options) {
  EnvBackedModel model(env, &agent);
  Trajectory traj;
  StateHandle state = options.evaluation || options.from_canonical_start
                          ? env.initial_state()
                          : env.start_for_episode(options.episode);
  for (int step_i = 0; step_i < options.max_steps; ++step_i) {
    if (env.is_terminal(state)) return traj;
    auto result = run_search(state, model, config, rng);
    ActionId action;
    if (options.evaluation) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < result.sampled_actions.size(); ++i) {
        if (result.visit_distribution[static_cast<ActionId>(i)] >
            result.visit_distribution[static_cast<ActionId>(best)]) {
          best = i;
        }
      }
      action = result.sampled_actions[best];
    } else {
      const auto i = rng.categorical(result.visit_distribution.probs());
      action = result.sampled_actions[i];
    }
    const auto step = env.step(state, action);
    traj.episode_return += step.reward;
    traj.steps.push_back({env.state_key(state), std::move(result), action,
                          step.reward, step.done, env.to_play(state)});
    state = step.next;
    if (step.done) return traj;
  }
  traj.truncated = true;
  return traj;
}

double n_step_target(const Trajectory& trajectory, std::size_t t, int n,
                     double gamma, const TabularAgent& agent) {
  if (t >= trajectory.steps.size()) {
    throw std::invalid_argument("n_step_target: step index out of range");
  }
  const std::size_t len = trajectory.steps.size();
  const std::size_t m = std::min<std::size_t>(n, len - t);
  double g = 0.0;
  double discount = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    g += discount * trajectory.steps[t + i].reward;
    discount *= gamma;
  }
  const bool episode_ended = trajectory.steps.back().done;
  if (t + m < len) {
    g += discount * agent.value(trajectory.steps[t + m].state_key);
  } else if (!episode_ended) {
    // Truncated rollout: no stored bootstrap state, tail value omitted.
    return g;
  }
  return g;  // past terminal the bootstrap is 0 by convention
}

std::vector<double> visit_target(const SearchResult& search,
                                 int num_actions) {
  std::vector<double> target(num_actions, 0.0);
  for (std::size_t i = 0; i < search.sampled_actions.size(); ++i) {
    target[search.sampled_actions[i]] +=
        search.visit_distribution[static_cast<ActionId>(i)];
  }
  return target;
}

void update(TabularAgent& agent, const std::vector<UpdateItem>& batch) {
  for (const auto& item : batch) {
    agent.update_policy(item.state_key, item.full_space_target);
    agent.update_value(item.state_key, item.value_target);
  }
}

namespace {

// Final-outcome value targets for two-player self-play: +1 for the winner's
// decision states, -1 for the loser's, 0 for draws.
std::vector<double> outcome_values(const Trajectory& traj) {
  std::vector<double> out(traj.steps.size(), 0.0);
  if (traj.steps.empty()) return out;
  const auto& last = traj.steps.back();
  if (last.done && last.reward > 0.0) {
    const int winner = last.to_play;
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
      out[t] = traj.steps[t].to_play == winner ? 1.0 : -1.0;
    }
  }
  return out;
}

std::vector<UpdateItem> batch_from(const Trajectory& traj,
                                   const Environment& env,
                                   const TrainConfig& cfg,
                                   const TabularAgent& agent) {
  std::vector<UpdateItem> batch;
  const auto outcomes =
      cfg.outcome_targets ? outcome_values(traj) : std::vector<double>{};
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    UpdateItem item;
    item.state_key = traj.steps[t].state_key;
    item.full_space_target =
        visit_target(traj.steps[t].search, env.num_actions());
    item.value_target = cfg.outcome_targets
                            ? outcomes[t]
                            : n_step_target(traj, t, cfg.n_step, cfg.gamma,
                                            agent);
    batch.push_back(std::move(item));
  }
  return batch;
}

}  // namespace

double evaluate(const TabularAgent& agent, const Environment& env,
                const SearchConfig& config, int episodes, Rng& rng) {
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    ActOptions opts;
    opts.evaluation = true;
    total += act(agent, env, config, rng, opts).episode_return;
  }
  return episodes > 0 ? total / episodes : 0.0;
}

TrainResult train(TabularAgent& agent, const Environment& env,
                  const SearchConfig& search_config,
                  const TrainConfig& train_config, Rng& rng) {
  TrainResult result;
  ReplayBuffer buffer(train_config.replay_capacity);
  for (int ep = 0; ep < train_config.episodes; ++ep) {
    ActOptions opts;
    opts.episode = ep;
    buffer.push(act(agent, env, search_config, rng, opts));
    for (int u = 0; u < train_config.updates_per_episode; ++u) {
      const auto& traj = buffer.sample(rng);
      update(agent, batch_from(traj, env, train_config, agent));
    }
    if (train_config.eval_every > 0 &&
        (ep + 1) % train_config.eval_every == 0) {
      const double mean = evaluate(agent, env, search_config,
                                   train_config.eval_episodes, rng);
      result.curve.push_back({ep + 1, mean});
    }
  }
  return result;
}

}  // namespace sampled
