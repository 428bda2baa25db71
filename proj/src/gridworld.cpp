#include "sampled/gridworld.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace sampled {

GridWorld::GridWorld(int width, int height, std::set<int> walls,
                     int goal_cell, double step_reward, int start_cell)
    : width_(width),
      height_(height),
      walls_(std::move(walls)),
      goal_(goal_cell),
      step_reward_(step_reward),
      start_(start_cell) {
  if (width_ < 1 || height_ < 1) {
    throw std::invalid_argument("GridWorld: degenerate size");
  }
  if (walls_.count(goal_) || walls_.count(start_)) {
    throw std::invalid_argument("GridWorld: goal or start inside a wall");
  }
}

StateHandle GridWorld::state_at(int cell) const {
  auto s = std::make_shared<State>();
  s->cell = cell;
  s->terminal = false;
  return s;
}

StateHandle GridWorld::initial_state() const { return state_at(start_); }

StateHandle GridWorld::start_for_episode(int episode) const {
  // Cycle starts over all free cells so every state gets on-policy data.
  const auto cells = free_cells();
  return state_at(cells[episode % cells.size()]);
}

std::vector<int> GridWorld::free_cells() const {
  std::vector<int> cells;
  for (int c = 0; c < cell_count(); ++c) {
    if (!is_wall(c) && c != goal_) cells.push_back(c);
  }
  return cells;
}

int GridWorld::move(int cell, ActionId action) const {
  const int x = cell % width_;
  const int y = cell / width_;
  int nx = x, ny = y;
  switch (action) {
    case 0: ny = y - 1; break;  // N
    case 1: nx = x + 1; break;  // E
    case 2: ny = y + 1; break;  // S
    case 3: nx = x - 1; break;  // W
    default: throw std::invalid_argument("GridWorld: bad action");
  }
  if (nx < 0 || nx >= width_ || ny < 0 || ny >= height_) return cell;
  const int next = ny * width_ + nx;
  return is_wall(next) ? cell : next;
}

EnvStep GridWorld::step(const StateHandle& state, ActionId action) const {
  const auto& s = dynamic_cast<const State&>(*state);
  auto next = std::make_shared<State>();
  if (s.terminal) {
    next->cell = s.cell;
    next->terminal = true;
    return {next, 0.0, true};
  }
  next->cell = move(s.cell, action);
  next->terminal = next->cell == goal_;
  const double reward = next->terminal ? 1.0 : step_reward_;
  return {next, reward, next->terminal};
}

std::vector<double> GridWorld::legal_mask(const StateHandle&) const {
  return std::vector<double>(4, 1.0);
}

std::string GridWorld::state_key(const StateHandle& state) const {
  const auto& s = dynamic_cast<const State&>(*state);
  return "g" + std::to_string(s.cell) + (s.terminal ? "t" : "");
}

bool GridWorld::is_terminal(const StateHandle& state) const {
  return dynamic_cast<const State&>(*state).terminal;
}

ValueIterationResult value_iteration_oracle(const GridWorld& env,
                                            double gamma, double tol) {
  const int n = env.cell_count();
  ValueIterationResult out;
  out.values.assign(n, 0.0);
  out.greedy.assign(n, 0);
  double residual = tol + 1.0;
  while (residual > tol) {
    residual = 0.0;
    for (int c = 0; c < n; ++c) {
      if (env.is_wall(c) || c == env.goal()) continue;
      double best = -std::numeric_limits<double>::infinity();
      ActionId best_a = 0;
      for (ActionId a = 0; a < 4; ++a) {
        const int next = env.move(c, a);
        const double r = next == env.goal() ? 1.0 : env.step_reward();
        const double v = next == env.goal() ? 0.0 : out.values[next];
        const double q = r + gamma * v;
        if (q > best) {
          best = q;
          best_a = a;
        }
      }
      residual = std::max(residual, std::abs(best - out.values[c]));
      out.values[c] = best;
      out.greedy[c] = best_a;
    }
  }
  return out;
}

}  // namespace sampled
