#include "sampled/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace sampled {

int FactoredActionCodec::encode1(double x) const {
  x = std::clamp(x, -1.0, 1.0);
  const int bin = static_cast<int>(std::floor((x + 1.0) * bins / 2.0));
  return std::clamp(bin, 0, bins - 1);
}

std::vector<int> FactoredActionCodec::encode(
    std::span<const double> continuous) const {
  if (static_cast<int>(continuous.size()) != dims) {
    throw std::invalid_argument("codec: dimension mismatch");
  }
  std::vector<int> out(dims);
  for (int i = 0; i < dims; ++i) out[i] = encode1(continuous[i]);
  return out;
}

std::vector<double> FactoredActionCodec::decode(
    std::span<const int> bin_indices) const {
  if (static_cast<int>(bin_indices.size()) != dims) {
    throw std::invalid_argument("codec: dimension mismatch");
  }
  std::vector<double> out(dims);
  for (int i = 0; i < dims; ++i) {
    if (bin_indices[i] < 0 || bin_indices[i] >= bins) {
      throw std::invalid_argument("codec: bin index out of range");
    }
    out[i] = center(bin_indices[i]);
  }
  return out;
}

long FactoredActionCodec::joint_size() const {
  long n = 1;
  for (int i = 0; i < dims; ++i) n *= bins;
  return n;
}

double ContinuousBandit::reward(std::span<const double> action) const {
  if (static_cast<int>(action.size()) != dims) {
    throw std::invalid_argument("bandit: dimension mismatch");
  }
  double d2 = 0.0;
  for (int i = 0; i < dims; ++i) {
    const double d = action[i] - a_star[i];
    d2 += d * d;
  }
  return -d2;
}

ContinuousBandit ContinuousBandit::on_centers(
    int dims, const FactoredActionCodec& codec,
    std::span<const int> bin_indices) {
  ContinuousBandit b;
  b.dims = dims;
  b.a_star = codec.decode(bin_indices);
  return b;
}

FactoredBanditEnv::FactoredBanditEnv(ContinuousBandit bandit,
                                     FactoredActionCodec codec)
    : bandit_(std::move(bandit)), codec_(codec) {
  if (bandit_.dims != codec_.dims) {
    throw std::invalid_argument("FactoredBanditEnv: dims mismatch");
  }
}

StateHandle FactoredBanditEnv::initial_state() const {
  return std::make_shared<State>();
}

EnvStep FactoredBanditEnv::step(const StateHandle& state,
                                ActionId action) const {
  const auto& s = dynamic_cast<const State&>(*state);
  if (static_cast<int>(s.prefix.size()) >= codec_.dims) {
    throw std::invalid_argument("FactoredBanditEnv: step past terminal");
  }
  if (static_cast<int>(action) >= codec_.bins) {
    throw std::invalid_argument("FactoredBanditEnv: bad bin");
  }
  auto next = std::make_shared<State>();
  next->prefix = s.prefix;
  next->prefix.push_back(static_cast<int>(action));
  const bool done = static_cast<int>(next->prefix.size()) == codec_.dims;
  const double reward =
      done ? bandit_.reward(codec_.decode(next->prefix)) : 0.0;
  return {next, reward, done};
}

std::vector<double> FactoredBanditEnv::legal_mask(const StateHandle&) const {
  return std::vector<double>(codec_.bins, 1.0);
}

std::string FactoredBanditEnv::state_key(const StateHandle& state) const {
  const auto& s = dynamic_cast<const State&>(*state);
  std::string key = "b";
  for (int b : s.prefix) key += "." + std::to_string(b);
  return key;
}

bool FactoredBanditEnv::is_terminal(const StateHandle& state) const {
  const auto& s = dynamic_cast<const State&>(*state);
  return static_cast<int>(s.prefix.size()) == codec_.dims;
}

JointBanditEnv::JointBanditEnv(ContinuousBandit bandit,
                               FactoredActionCodec codec)
    : bandit_(std::move(bandit)), codec_(codec),
      joint_(codec.joint_size()) {
  if (codec_.dims > 3) {
    throw std::invalid_argument("JointBanditEnv: joint space only for d<=3");
  }
}

StateHandle JointBanditEnv::initial_state() const {
  return std::make_shared<State>();
}

std::vector<int> JointBanditEnv::unflatten(ActionId action) const {
  std::vector<int> bins(codec_.dims);
  long rest = action;
  for (int i = codec_.dims - 1; i >= 0; --i) {
    bins[i] = static_cast<int>(rest % codec_.bins);
    rest /= codec_.bins;
  }
  return bins;
}

EnvStep JointBanditEnv::step(const StateHandle& state, ActionId action) const {
  const auto& s = dynamic_cast<const State&>(*state);
  if (s.done) throw std::invalid_argument("JointBanditEnv: past terminal");
  if (static_cast<long>(action) >= joint_) {
    throw std::invalid_argument("JointBanditEnv: bad action");
  }
  auto next = std::make_shared<State>();
  next->done = true;
  const auto bins = unflatten(action);
  return {next, bandit_.reward(codec_.decode(bins)), true};
}

std::vector<double> JointBanditEnv::legal_mask(const StateHandle&) const {
  return std::vector<double>(joint_, 1.0);
}

std::string JointBanditEnv::state_key(const StateHandle& state) const {
  const auto& s = dynamic_cast<const State&>(*state);
  return s.done ? "jt" : "j";
}

bool JointBanditEnv::is_terminal(const StateHandle& state) const {
  return dynamic_cast<const State&>(*state).done;
}

}  // namespace sampled
