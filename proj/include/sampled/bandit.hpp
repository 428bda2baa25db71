#pragma once

#include <span>
#include <string>
#include <vector>

#include "sampled/env.hpp"

namespace sampled {

// Per-dimension categorical codec over [-1, 1]: bin i has center
// -1 + (2i + 1) / B. Inputs outside the range are clamped.
struct FactoredActionCodec {
  int dims = 1;
  int bins = 7;

  double center(int bin) const {
    return -1.0 + (2.0 * bin + 1.0) / bins;
  }
  int encode1(double x) const;
  std::vector<int> encode(std::span<const double> continuous) const;
  std::vector<double> decode(std::span<const int> bin_indices) const;
  long joint_size() const;  // bins^dims
};

// One-shot continuous optimization probe: reward(a) = -|a - a_star|^2,
// maximum 0 at the optimum.
struct ContinuousBandit {
  int dims = 1;
  std::vector<double> a_star;

  double reward(std::span<const double> action) const;

  // Optimum placed on bin centers so the codec-optimal reward is exactly 0.
  static ContinuousBandit on_centers(int dims,
                                     const FactoredActionCodec& codec,
                                     std::span<const int> bin_indices);
};

// The bandit as d sequential single-dimension decisions: each step picks
// one bin, the final step pays the bandit reward for the decoded vector.
class FactoredBanditEnv final : public Environment {
 public:
  struct State final : ModelState {
    std::vector<int> prefix;  // chosen bins so far
  };

  FactoredBanditEnv(ContinuousBandit bandit, FactoredActionCodec codec);

  int num_actions() const override { return codec_.bins; }
  StateHandle initial_state() const override;
  EnvStep step(const StateHandle& state, ActionId action) const override;
  std::vector<double> legal_mask(const StateHandle& state) const override;
  std::string state_key(const StateHandle& state) const override;
  bool is_terminal(const StateHandle& state) const override;

  const ContinuousBandit& bandit() const { return bandit_; }
  const FactoredActionCodec& codec() const { return codec_; }

 private:
  ContinuousBandit bandit_;
  FactoredActionCodec codec_;
};

// Joint flat action space (bins^dims), one step. Only for small dims;
// exists to cross-check the factored decomposition.
class JointBanditEnv final : public Environment {
 public:
  struct State final : ModelState {
    bool done = false;
  };

  JointBanditEnv(ContinuousBandit bandit, FactoredActionCodec codec);

  int num_actions() const override { return static_cast<int>(joint_); }
  StateHandle initial_state() const override;
  EnvStep step(const StateHandle& state, ActionId action) const override;
  std::vector<double> legal_mask(const StateHandle& state) const override;
  std::string state_key(const StateHandle& state) const override;
  bool is_terminal(const StateHandle& state) const override;

  std::vector<int> unflatten(ActionId action) const;

 private:
  ContinuousBandit bandit_;
  FactoredActionCodec codec_;
  long joint_;
};

}  // namespace sampled
