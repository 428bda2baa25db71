#include "sampled/env.hpp"

namespace sampled {

ModelOutput EnvBackedModel::describe(const StateHandle& state,
                                     double reward) const {
  ModelOutput out;
  out.state = state;
  out.reward = reward;
  out.terminal = env_.is_terminal(state);
  out.to_play = env_.to_play(state);
  const int n = env_.num_actions();
  if (out.terminal) {
    out.value = 0.0;
    out.policy.assign(n, 1.0);  // unused past a terminal node
    return out;
  }
  const auto key = env_.state_key(state);
  const auto mask = env_.legal_mask(state);
  std::vector<double> pi =
      source_ ? source_->policy(key, n) : std::vector<double>(n, 1.0);
  double mass = 0.0;
  for (int a = 0; a < n; ++a) {
    pi[a] = mask[a] > 0.0 ? pi[a] : 0.0;
    mass += pi[a];
  }
  if (mass <= 0.0) {
    // Stored row lost all legal mass; fall back to uniform over legal.
    for (int a = 0; a < n; ++a) pi[a] = mask[a];
  }
  out.policy = std::move(pi);
  out.value = source_ ? source_->value(key) : 0.0;
  return out;
}

ModelOutput EnvBackedModel::initial_inference(
    const StateHandle& observation) const {
  return describe(observation, 0.0);
}

ModelOutput EnvBackedModel::recurrent_inference(const StateHandle& state,
                                                ActionId action) const {
  const auto step = env_.step(state, action);
  return describe(step.next, step.reward);
}

}  // namespace sampled
