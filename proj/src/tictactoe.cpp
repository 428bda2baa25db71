#include "sampled/tictactoe.hpp"

#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace sampled {

namespace {

constexpr int kLines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                              {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};

bool board_full(const std::array<std::int8_t, 9>& board) {
  for (auto c : board) {
    if (c == 0) return false;
  }
  return true;
}

std::string board_key(const TicTacToe::State& s) {
  std::string key(10, '0');
  for (int i = 0; i < 9; ++i) key[i] = static_cast<char>('0' + s.board[i]);
  key[9] = static_cast<char>('0' + s.to_play);
  return key;
}

}  // namespace

int TicTacToe::line_winner(const std::array<std::int8_t, 9>& board) {
  for (const auto& line : kLines) {
    const auto c = board[line[0]];
    if (c != 0 && c == board[line[1]] && c == board[line[2]]) return c;
  }
  return 0;
}

StateHandle TicTacToe::make_state(const std::array<std::int8_t, 9>& board,
                                  int to_play) {
  auto s = std::make_shared<State>();
  s->board = board;
  s->to_play = to_play;
  s->winner = line_winner(board);
  s->terminal = s->winner != 0 || board_full(board);
  return s;
}

StateHandle TicTacToe::initial_state() const {
  return make_state({}, 1);
}

EnvStep TicTacToe::step(const StateHandle& state, ActionId action) const {
  const auto& s = dynamic_cast<const State&>(*state);
  if (s.terminal) throw std::invalid_argument("TicTacToe: step past terminal");
  if (action >= 9 || s.board[action] != 0) {
    throw std::invalid_argument("TicTacToe: illegal move");
  }
  auto board = s.board;
  board[action] = static_cast<std::int8_t>(s.to_play);
  auto next = make_state(board, 3 - s.to_play);
  const auto& ns = dynamic_cast<const State&>(*next);
  // Reward from the mover's perspective; a mover can only win or tie.
  const double reward = ns.winner == s.to_play ? 1.0 : 0.0;
  return {next, reward, ns.terminal};
}

std::vector<double> TicTacToe::legal_mask(const StateHandle& state) const {
  const auto& s = dynamic_cast<const State&>(*state);
  std::vector<double> mask(9, 0.0);
  if (s.terminal) return mask;
  for (int i = 0; i < 9; ++i) {
    if (s.board[i] == 0) mask[i] = 1.0;
  }
  return mask;
}

std::string TicTacToe::state_key(const StateHandle& state) const {
  return board_key(dynamic_cast<const State&>(*state));
}

bool TicTacToe::is_terminal(const StateHandle& state) const {
  return dynamic_cast<const State&>(*state).terminal;
}

int TicTacToe::to_play(const StateHandle& state) const {
  return dynamic_cast<const State&>(*state).to_play;
}

namespace {

int negamax(const TicTacToe::State& s,
            std::unordered_map<std::string, MinimaxResult>& memo,
            MinimaxResult* result_out) {
  if (s.terminal) {
    // Value from the perspective of the player to move; a finished win
    // always belongs to the other player.
    const int v = s.winner == 0 ? 0 : (s.winner == s.to_play ? 1 : -1);
    if (result_out) *result_out = {v, {}};
    return v;
  }
  const auto key = board_key(s);
  if (auto it = memo.find(key); it != memo.end()) {
    if (result_out) *result_out = it->second;
    return it->second.value;
  }
  MinimaxResult res;
  res.value = -2;
  for (ActionId a = 0; a < 9; ++a) {
    if (s.board[a] != 0) continue;
    TicTacToe::State child;
    child.board = s.board;
    child.board[a] = static_cast<std::int8_t>(s.to_play);
    child.to_play = 3 - s.to_play;
    child.winner = TicTacToe::line_winner(child.board);
    child.terminal = child.winner != 0 || board_full(child.board);
    const int v = -negamax(child, memo, nullptr);
    if (v > res.value) {
      res.value = v;
      res.optimal_moves.clear();
    }
    if (v == res.value) res.optimal_moves.push_back(a);
  }
  memo.emplace(key, res);
  if (result_out) *result_out = res;
  return res.value;
}

}  // namespace

MinimaxResult minimax_oracle(const StateHandle& state) {
  const auto& s = dynamic_cast<const TicTacToe::State&>(*state);
  static thread_local std::unordered_map<std::string, MinimaxResult> memo;
  MinimaxResult out;
  negamax(s, memo, &out);
  return out;
}

}  // namespace sampled
