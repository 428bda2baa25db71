#pragma once

#include <set>
#include <string>
#include <vector>

#include "sampled/env.hpp"

namespace sampled {

// Deterministic gridworld: 4 actions (N/E/S/W), bumping into a wall or the
// border stays in place, entering the goal yields reward 1 and terminates.
class GridWorld final : public Environment {
 public:
  struct State final : ModelState {
    int cell = 0;
    bool terminal = false;
  };

  GridWorld(int width, int height, std::set<int> walls, int goal_cell,
            double step_reward = 0.0, int start_cell = 0);

  int num_actions() const override { return 4; }
  StateHandle initial_state() const override;
  StateHandle start_for_episode(int episode) const override;
  EnvStep step(const StateHandle& state, ActionId action) const override;
  std::vector<double> legal_mask(const StateHandle& state) const override;
  std::string state_key(const StateHandle& state) const override;
  bool is_terminal(const StateHandle& state) const override;

  StateHandle state_at(int cell) const;
  int width() const { return width_; }
  int height() const { return height_; }
  int goal() const { return goal_; }
  bool is_wall(int cell) const { return walls_.count(cell) > 0; }
  int cell_count() const { return width_ * height_; }
  double step_reward() const { return step_reward_; }
  // All non-wall, non-goal cells (every start-reachable interior state).
  std::vector<int> free_cells() const;

  // Next cell under an action, with stay-in-place on walls and borders.
  int move(int cell, ActionId action) const;

 private:
  int width_;
  int height_;
  std::set<int> walls_;
  int goal_;
  double step_reward_;
  int start_;
};

struct ValueIterationResult {
  std::vector<double> values;       // per cell; walls stay 0
  std::vector<ActionId> greedy;     // per cell
};

// Sup-norm Bellman iteration until the residual drops below tol.
ValueIterationResult value_iteration_oracle(const GridWorld& env,
                                            double gamma, double tol);

}  // namespace sampled
