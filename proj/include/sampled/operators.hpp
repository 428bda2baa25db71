#pragma once

#include <span>
#include <vector>

#include "sampled/distribution.hpp"
#include "sampled/rng.hpp"

namespace sampled {

// Action-independent policy improvement operator families. Each fixes a
// functional form f(s, a, Z) with a single state-dependent normalizer Z.
enum class OperatorFamily {
  kPolicyGradient,    // f proportional to pi(a) * Q(a), Q >= 0 on support
  kPpoExp,            // f proportional to exp(Q(a) / tau)
  kMpoExp,            // f proportional to pi(a) * exp(Q(a) / tau)
  kAwrExp,            // f proportional to pi(a) * exp((Q(a) - V) / tau)
  kMuZeroRegularized  // f = lambda_n * pi(a) / (Z - Q(a))
};

const char* family_name(OperatorFamily family);

struct ImprovementOperator {
  OperatorFamily family = OperatorFamily::kMpoExp;
  double temperature = 1.0;  // exp families
  double lambda_n = 1.0;     // MuZeroRegularized
};

// Action-value estimates plus the state-value baseline used by AWR.
struct QEstimate {
  std::vector<double> values;
  double baseline = 0.0;
};

// Result of applying an improvement operator, either over the full action
// space (exact) or over a sampled action set.
struct ImprovedPolicy {
  std::vector<ActionId> support;  // action ids carried by probs
  std::vector<double> probs;      // valid distribution over support
  double normalizer_z = 0.0;
  bool sampled_mode = false;

  double prob_of(ActionId a) const;
};

// Exact improved policy over the full action space. For the exp families
// Z is the closed-form normalizing sum; for MuZeroRegularized Z solves
// sum lambda_n * pi / (Z - Q) = 1.
ImprovedPolicy improve_exact(const DiscreteDistribution& pi,
                             const QEstimate& q,
                             const ImprovementOperator& op);

// Normalizer for weights w: exp families return the plain weighted sum of
// unnormalized f; MuZeroRegularized returns the unique Z > max Q with
// sum lambda_n * w / (Z - Q) = 1, residual below 1e-10.
double solve_normalizer(std::span<const double> weights, const QEstimate& q,
                        const ImprovementOperator& op);

// Sample-based improved policy: weights (beta_hat/beta)(a) * f(a, Z_hat)
// over the sampled actions, renormalized through the family's Z_hat.
// q.values is indexed by entry position within samples.
ImprovedPolicy improve_sampled(const SampledActionSet& samples,
                               const QEstimate& q,
                               const ImprovementOperator& op);

// sum over the support of improved(a) * x(a); x indexed like probs.
double expectation_under_improved(const ImprovedPolicy& improved,
                                  std::span<const double> x);

// One action drawn from the improved distribution (sampling importance
// resampling: the two-stage marginal approaches the exact improved policy).
ActionId sir_resample(const ImprovedPolicy& improved, Rng& rng);

}  // namespace sampled
