#pragma once

#include <string>
#include <vector>

#include "sampled/mcts.hpp"

namespace sampled {

struct EnvStep {
  StateHandle next;
  double reward = 0.0;
  bool done = false;
};

// Deterministic environment with a finite (possibly codec-discretized)
// action set. States are immutable values behind StateHandle.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int num_actions() const = 0;
  virtual StateHandle initial_state() const = 0;
  // Start state for a training episode; defaults to the canonical start.
  virtual StateHandle start_for_episode(int episode) const {
    (void)episode;
    return initial_state();
  }
  virtual EnvStep step(const StateHandle& state, ActionId action) const = 0;
  virtual std::vector<double> legal_mask(const StateHandle& state) const = 0;
  virtual std::string state_key(const StateHandle& state) const = 0;
  virtual bool is_terminal(const StateHandle& state) const = 0;
  virtual int to_play(const StateHandle& state) const {
    (void)state;
    return 0;
  }
  virtual bool two_player() const { return false; }
};

// Where the model's policy/value heads come from (a tabular agent during
// training, or nothing: uniform policy and zero value).
class PolicyValueSource {
 public:
  virtual ~PolicyValueSource() = default;
  virtual std::vector<double> policy(const std::string& state_key,
                                     int num_actions) const = 0;
  virtual double value(const std::string& state_key) const = 0;
};

// ModelInterface over an exact simulator: dynamics from the environment,
// policy/value from a PolicyValueSource.
class EnvBackedModel final : public ModelInterface {
 public:
  EnvBackedModel(const Environment& env, const PolicyValueSource* source)
      : env_(env), source_(source) {}

  ModelOutput initial_inference(const StateHandle& observation) const override;
  ModelOutput recurrent_inference(const StateHandle& state,
                                  ActionId action) const override;

 private:
  ModelOutput describe(const StateHandle& state, double reward) const;

  const Environment& env_;
  const PolicyValueSource* source_;  // may be null
};

}  // namespace sampled
