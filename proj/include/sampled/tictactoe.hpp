#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sampled/env.hpp"

namespace sampled {

// Standard 3x3 tic-tac-toe. Rewards are emitted from the perspective of
// the player who just moved: +1 for completing a line, 0 otherwise.
class TicTacToe final : public Environment {
 public:
  struct State final : ModelState {
    std::array<std::int8_t, 9> board{};  // 0 empty, 1 X, 2 O
    int to_play = 1;
    bool terminal = false;
    int winner = 0;  // 0 none/draw
  };

  int num_actions() const override { return 9; }
  StateHandle initial_state() const override;
  EnvStep step(const StateHandle& state, ActionId action) const override;
  std::vector<double> legal_mask(const StateHandle& state) const override;
  std::string state_key(const StateHandle& state) const override;
  bool is_terminal(const StateHandle& state) const override;
  int to_play(const StateHandle& state) const override;
  bool two_player() const override { return true; }

  static StateHandle make_state(const std::array<std::int8_t, 9>& board,
                                int to_play);
  static int line_winner(const std::array<std::int8_t, 9>& board);
};

struct MinimaxResult {
  int value = 0;  // -1/0/+1 from the perspective of the player to move
  std::vector<ActionId> optimal_moves;
};

// Exact negamax over the full game tree, memoized.
MinimaxResult minimax_oracle(const StateHandle& state);

}  // namespace sampled
