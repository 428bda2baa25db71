#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sampled/rng.hpp"

namespace sampled {

// Index of an action within a finite action set. Continuous actions enter
// only after codec discretization.
using ActionId = std::uint32_t;

// Normalized probability vector over an indexed action set. Carries policy
// priors, proposal distributions and visit distributions alike.
class DiscreteDistribution {
 public:
  // Validating constructor: rejects negative entries and vectors whose sum
  // deviates from 1 by more than kSumTolerance.
  explicit DiscreteDistribution(std::vector<double> probs);

  // Renormalizing factory for raw non-negative weights. Repair is allowed
  // here and only here; transformers downstream must already be normalized.
  static DiscreteDistribution normalized(std::vector<double> weights);

  static DiscreteDistribution uniform(std::size_t n);
  static DiscreteDistribution point_mass(ActionId a, std::size_t n);

  std::size_t size() const { return probs_.size(); }
  double operator[](ActionId a) const { return probs_[a]; }
  std::span<const double> probs() const { return probs_; }

  static constexpr double kSumTolerance = 1e-9;

 private:
  std::vector<double> probs_;
};

// K actions drawn from a proposal distribution, aggregated by action.
// Each entry keeps the policy and proposal probabilities of its action so
// importance ratios can be formed without materializing full distributions.
struct SampledActionSet {
  struct Entry {
    ActionId action = 0;
    int count = 0;       // > 0
    double pi = 0.0;     // pi(action)
    double beta = 0.0;   // beta(action), > 0
  };

  std::vector<Entry> entries;  // distinct actions, sorted by id
  int k = 0;                   // total draw count, = sum of entry counts

  double empirical(std::size_t entry_index) const {
    return static_cast<double>(entries[entry_index].count) / k;
  }
  // beta_hat / beta for one entry.
  double importance_ratio(std::size_t entry_index) const {
    return empirical(entry_index) / entries[entry_index].beta;
  }
};

// K independent draws with replacement from beta, aggregated by action.
// pi and beta must share the action space; beta needs positive mass.
SampledActionSet sample_actions(const DiscreteDistribution& pi,
                                const DiscreteDistribution& beta, int k,
                                Rng& rng);

// Test-only exhaustive variant: every action in pi's support exactly once
// with a uniform proposal over the support, so beta_hat/beta collapses to 1.
SampledActionSet exhaustive_actions(const DiscreteDistribution& pi);

// Distribution proportional to pi^(1/tau). Zero entries stay zero.
DiscreteDistribution apply_temperature(const DiscreteDistribution& pi,
                                       double tau);

// (1 - fraction) * pi + fraction * d with d ~ Dirichlet(alpha) over pi's
// positive support. Entries outside the support stay zero.
DiscreteDistribution mix_dirichlet(const DiscreteDistribution& pi,
                                   double alpha, double fraction, Rng& rng);

}  // namespace sampled
