#include "sampled/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sampled {
namespace {

// Unnormalized f-weight for one action given its multiplicative weight
// (pi for exact paths, importance-corrected pi for sampled paths).
double unnormalized_weight(const ImprovementOperator& op, double weight,
                           double q, double baseline) {
  switch (op.family) {
    case OperatorFamily::kPolicyGradient:
      if (q < 0.0 && weight > 0.0) {
        throw std::invalid_argument(
            "PolicyGradient operator requires Q >= 0 on the support; "
            "shift Q by its minimum before improving");
      }
      return weight * q;
    case OperatorFamily::kPpoExp:
      // pi does not enter; weight is 1 exactly (or the importance ratio).
      return weight * std::exp(q / op.temperature);
    case OperatorFamily::kMpoExp:
      return weight * std::exp(q / op.temperature);
    case OperatorFamily::kAwrExp:
      return weight * std::exp((q - baseline) / op.temperature);
    case OperatorFamily::kMuZeroRegularized:
      throw std::logic_error("unnormalized_weight: regularized family "
                             "needs its normalizer solved first");
  }
  throw std::logic_error("unknown operator family");
}

// Bisection for the MuZeroRegularized normalizer. weights may have any
// positive total mass (the sampled path passes importance-corrected ones).
double solve_regularized_z(std::span<const double> weights,
                           std::span<const double> q, double lambda_n) {
  double weight_sum = 0.0;
  double max_q = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) {
      throw std::invalid_argument("solve_normalizer: negative weight");
    }
    if (weights[i] > 0.0) {
      weight_sum += weights[i];
      max_q = std::max(max_q, q[i]);
    }
  }
  if (weight_sum <= 0.0) {
    throw std::invalid_argument("solve_normalizer: no positive weight");
  }

  const auto total = [&](double z) {
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] > 0.0) s += lambda_n * weights[i] / (z - q[i]);
    }
    return s;
  };

  // total(z) is strictly decreasing on (max_q, inf). The upper end of the
  // bracket satisfies total <= 1 because each term is at most w_i/weight_sum.
  double lo = max_q + 1e-12 * std::max(1.0, std::abs(max_q));
  double hi = max_q + lambda_n * weight_sum;
  if (total(lo) < 1.0) {
    // Degenerate spacing: the tiny offset already overshoots; widen down.
    lo = max_q + std::numeric_limits<double>::min();
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (total(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double z = hi;
  if (std::abs(total(z) - 1.0) > 1e-10) {
    throw std::runtime_error("solve_normalizer: bisection failed to reach "
                             "residual 1e-10");
  }
  return z;
}

ImprovedPolicy build_improved(const ImprovementOperator& op,
                              std::vector<ActionId> support,
                              std::span<const double> weights,
                              std::span<const double> q, double baseline,
                              bool sampled_mode) {
  ImprovedPolicy out;
  out.support = std::move(support);
  out.sampled_mode = sampled_mode;
  const std::size_t n = weights.size();
  out.probs.resize(n);

  if (op.family == OperatorFamily::kMuZeroRegularized) {
    const double z = solve_regularized_z(weights, q, op.lambda_n);
    out.normalizer_z = z;
    for (std::size_t i = 0; i < n; ++i) {
      out.probs[i] = weights[i] > 0.0
                         ? op.lambda_n * weights[i] / (z - q[i])
                         : 0.0;
    }
    return out;
  }

  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.probs[i] = unnormalized_weight(op, weights[i], q[i], baseline);
    z += out.probs[i];
  }
  if (z <= 0.0) {
    throw std::invalid_argument("improve: all improvement weights are zero");
  }
  out.normalizer_z = z;
  for (auto& p : out.probs) p /= z;
  return out;
}

}  // namespace

const char* family_name(OperatorFamily family) {
  switch (family) {
    case OperatorFamily::kPolicyGradient: return "policy_gradient";
    case OperatorFamily::kPpoExp: return "ppo_exp";
    case OperatorFamily::kMpoExp: return "mpo_exp";
    case OperatorFamily::kAwrExp: return "awr_exp";
    case OperatorFamily::kMuZeroRegularized: return "muzero_regularized";
  }
  return "unknown";
}

double ImprovedPolicy::prob_of(ActionId a) const {
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] == a) return probs[i];
  }
  return 0.0;
}

ImprovedPolicy improve_exact(const DiscreteDistribution& pi,
                             const QEstimate& q,
                             const ImprovementOperator& op) {
  if (q.values.size() != pi.size()) {
    throw std::invalid_argument("improve_exact: pi and q sizes differ");
  }
  std::vector<ActionId> support(pi.size());
  for (ActionId a = 0; a < pi.size(); ++a) support[a] = a;
  std::vector<double> weights(pi.probs().begin(), pi.probs().end());
  if (op.family == OperatorFamily::kPpoExp) {
    // PPO's operator ignores pi; uniform unit weights over the space.
    std::fill(weights.begin(), weights.end(), 1.0);
  }
  return build_improved(op, std::move(support), weights, q.values,
                        q.baseline, /*sampled_mode=*/false);
}

double solve_normalizer(std::span<const double> weights, const QEstimate& q,
                        const ImprovementOperator& op) {
  if (weights.size() != q.values.size()) {
    throw std::invalid_argument("solve_normalizer: size mismatch");
  }
  if (op.family == OperatorFamily::kMuZeroRegularized) {
    return solve_regularized_z(weights, q.values, op.lambda_n);
  }
  double z = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    z += unnormalized_weight(op, weights[i], q.values[i], q.baseline);
  }
  return z;
}

ImprovedPolicy improve_sampled(const SampledActionSet& samples,
                               const QEstimate& q,
                               const ImprovementOperator& op) {
  const std::size_t n = samples.entries.size();
  if (q.values.size() != n) {
    throw std::invalid_argument(
        "improve_sampled: q must cover every sampled action");
  }
  std::vector<ActionId> support(n);
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = samples.entries[i];
    if (!(e.beta > 0.0)) {
      throw std::invalid_argument("improve_sampled: entry with beta <= 0");
    }
    support[i] = e.action;
    const double ratio = samples.importance_ratio(i);
    // PPO's f carries no pi factor, so the importance ratio stands alone.
    weights[i] = op.family == OperatorFamily::kPpoExp ? ratio : ratio * e.pi;
  }
  return build_improved(op, std::move(support), weights, q.values,
                        q.baseline, /*sampled_mode=*/true);
}

double expectation_under_improved(const ImprovedPolicy& improved,
                                  std::span<const double> x) {
  if (x.size() != improved.probs.size()) {
    throw std::invalid_argument(
        "expectation_under_improved: x must cover the support");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += improved.probs[i] * x[i];
  return acc;
}

ActionId sir_resample(const ImprovedPolicy& improved, Rng& rng) {
  const std::size_t i = rng.categorical(improved.probs);
  return improved.support[i];
}

}  // namespace sampled
