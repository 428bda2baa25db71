#include "sampled/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace sampled {

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("DiscreteDistribution: empty support");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument(
          "DiscreteDistribution: negative or NaN entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument(
        "DiscreteDistribution: entries sum to " + std::to_string(sum));
  }
}

DiscreteDistribution DiscreteDistribution::normalized(
    std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("normalized: negative or NaN weight");
    }
    sum += w;
  }
  if (sum <= 0.0) {
    throw std::invalid_argument("normalized: weights sum to zero");
  }
  for (auto& w : weights) w /= sum;
  // Absorb residual rounding into the largest entry so the validating
  // constructor always accepts the result.
  double resid = 1.0;
  for (double w : weights) resid -= w;
  auto it = std::max_element(weights.begin(), weights.end());
  *it += resid;
  return DiscreteDistribution(std::move(weights));
}

DiscreteDistribution DiscreteDistribution::uniform(std::size_t n) {
  return normalized(std::vector<double>(n, 1.0));
}

DiscreteDistribution DiscreteDistribution::point_mass(ActionId a,
                                                      std::size_t n) {
  std::vector<double> p(n, 0.0);
  p.at(a) = 1.0;
  return DiscreteDistribution(std::move(p));
}

SampledActionSet sample_actions(const DiscreteDistribution& pi,
                                const DiscreteDistribution& beta, int k,
                                Rng& rng) {
  if (pi.size() != beta.size()) {
    throw std::invalid_argument("sample_actions: mismatched support sizes");
  }
  if (k < 1) throw std::invalid_argument("sample_actions: k must be >= 1");
  double beta_sum = 0.0;
  for (double b : beta.probs()) beta_sum += b;
  if (beta_sum <= 0.0) {
    throw std::invalid_argument("sample_actions: beta has no positive mass");
  }

  std::map<ActionId, int> counts;
  for (int i = 0; i < k; ++i) {
    const auto a = static_cast<ActionId>(rng.categorical(beta.probs()));
    ++counts[a];
  }

  SampledActionSet out;
  out.k = k;
  out.entries.reserve(counts.size());
  for (const auto& [a, c] : counts) {
    out.entries.push_back({a, c, pi[a], beta[a]});
  }
  return out;
}

SampledActionSet exhaustive_actions(const DiscreteDistribution& pi) {
  std::vector<ActionId> support;
  for (ActionId a = 0; a < pi.size(); ++a) {
    if (pi[a] > 0.0) support.push_back(a);
  }
  if (support.empty()) {
    throw std::invalid_argument("exhaustive_actions: empty support");
  }
  SampledActionSet out;
  out.k = static_cast<int>(support.size());
  const double b = 1.0 / static_cast<double>(support.size());
  for (ActionId a : support) out.entries.push_back({a, 1, pi[a], b});
  return out;
}

DiscreteDistribution apply_temperature(const DiscreteDistribution& pi,
                                       double tau) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("apply_temperature: tau must be > 0");
  }
  const double inv_tau = 1.0 / tau;
  std::vector<double> w(pi.size(), 0.0);
  // Scale by the max probability before exponentiating so large 1/tau
  // does not underflow the whole support.
  double pmax = 0.0;
  for (double p : pi.probs()) pmax = std::max(pmax, p);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double p = pi.probs()[i];
    if (p > 0.0) w[i] = std::exp(inv_tau * (std::log(p) - std::log(pmax)));
  }
  return DiscreteDistribution::normalized(std::move(w));
}

DiscreteDistribution mix_dirichlet(const DiscreteDistribution& pi,
                                   double alpha, double fraction, Rng& rng) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("mix_dirichlet: alpha must be > 0");
  }
  if (fraction < 0.0 || fraction > 1.0) {
    throw std::invalid_argument("mix_dirichlet: fraction must be in [0,1]");
  }
  if (fraction == 0.0) return pi;

  std::vector<ActionId> support;
  for (ActionId a = 0; a < pi.size(); ++a) {
    if (pi[a] > 0.0) support.push_back(a);
  }
  const auto noise = rng.dirichlet(alpha, support.size());
  std::vector<double> w(pi.probs().begin(), pi.probs().end());
  for (auto& p : w) p *= 1.0 - fraction;
  for (std::size_t i = 0; i < support.size(); ++i) {
    w[support[i]] += fraction * noise[i];
  }
  return DiscreteDistribution::normalized(std::move(w));
}

}  // namespace sampled
