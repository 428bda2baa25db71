#pragma once

#include <algorithm>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "sampled/distribution.hpp"
#include "sampled/rng.hpp"

namespace sampled {

enum class PriorMode {
  kPiHatBeta,  // prior proportional to (beta_hat/beta) * pi (default)
  kRawPi       // prior proportional to pi over the sampled actions (ablation)
};

struct SearchConfig {
  int num_simulations = 50;
  int k_samples = 20;
  double c1 = 1.25;
  double c2 = 19652.0;
  double gamma = 0.99;
  double proposal_temperature = 1.0;  // beta = pi^(1/tau)
  double dirichlet_alpha = 0.3;
  double dirichlet_fraction = 0.25;
  PriorMode prior_mode = PriorMode::kPiHatBeta;
  bool root_q_init = false;
  bool exhaustive_mode = false;  // each support action once, ratios collapse
  bool two_player = false;       // negate values on alternate plies
};

// Opaque model state. Environments subclass this; the search never looks
// inside.
struct ModelState {
  virtual ~ModelState() = default;
};
using StateHandle = std::shared_ptr<const ModelState>;

struct ModelOutput {
  StateHandle state;
  double reward = 0.0;  // reward of the transition entering this state
  double value = 0.0;   // value from the perspective of the player to move
  std::vector<double> policy;  // priors over the full action space
  bool terminal = false;
  int to_play = 0;
};

// Contract for any plugged-in model: deterministic inference, same handle
// and action always give the same output.
class ModelInterface {
 public:
  virtual ~ModelInterface() = default;
  virtual ModelOutput initial_inference(const StateHandle& observation)
      const = 0;
  virtual ModelOutput recurrent_inference(const StateHandle& state,
                                          ActionId action) const = 0;
};

struct SearchNode {
  struct ChildEdge {
    ActionId action = 0;
    double prior = 0.0;
    double beta_prob = 0.0;
    double pi_prob = 0.0;
    int visit_count = 0;
    double value_sum = 0.0;
    std::optional<double> q_init;  // set by root Q initialization
    std::unique_ptr<SearchNode> child;

    double mean_value() const {
      return visit_count > 0 ? value_sum / visit_count : 0.0;
    }
  };

  StateHandle state;
  double reward_to_here = 0.0;
  double value_estimate = 0.0;  // model value at expansion
  int node_visits = 0;          // 1 + sum of child visit counts
  double value_sum = 0.0;       // includes the expansion evaluation
  int to_play = 0;
  bool terminal = false;
  std::vector<ChildEdge> children;

  bool expanded() const { return !children.empty(); }
  int child_visit_total() const;
  double mean_value() const {
    return node_visits > 0 ? value_sum / node_visits : 0.0;
  }
};

struct SearchResult {
  DiscreteDistribution visit_distribution;  // over sampled root actions
  std::vector<ActionId> sampled_actions;    // support of visit_distribution
  std::vector<double> per_action_q;
  std::vector<double> per_action_prior;
  std::vector<int> per_action_visits;
  double root_value = 0.0;
  SampledActionSet root_samples;
};

// Per-child search priors: pi_hat_beta mode renormalizes
// (beta_hat/beta) * pi over the sampled actions, raw_pi renormalizes pi.
DiscreteDistribution priors_from_samples(const SampledActionSet& samples,
                                         PriorMode mode);

// Running min/max of Q values observed in the tree, used to normalize Q
// inside the selection formula. Degenerate range bypasses normalization.
class MinMaxStats {
 public:
  void update(double q) {
    min_ = std::min(min_, q);
    max_ = std::max(max_, q);
  }
  double normalize(double q) const {
    if (max_ > min_) return (q - min_) / (max_ - min_);
    return q;
  }

 private:
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

// Expands a leaf: builds beta from the model policy (root additionally
// mixes Dirichlet noise into both pi and beta), samples K actions and
// stores per-child priors according to the prior mode.
SampledActionSet expand_node(SearchNode& node, const ModelOutput& output,
                             const SearchConfig& config, Rng& rng,
                             bool is_root);

// PUCT selection over the node's children; ties break to the lowest index.
std::size_t select_child(const SearchNode& node, const SearchConfig& config,
                         const MinMaxStats& bounds);

// Backs a leaf evaluation up the selection path, accumulating discounted
// rewards edge by edge.
void backup(std::vector<SearchNode*>& path, std::vector<std::size_t>& edges,
            double leaf_value, const SearchConfig& config,
            MinMaxStats& bounds);

// Evaluates every sampled root action once and stores r + gamma * v as the
// child's Q initialization, without incrementing visit counts.
void root_q_init(SearchNode& root, const ModelInterface& model,
                 const SearchConfig& config, MinMaxStats& bounds);

SearchResult run_search(const StateHandle& root_observation,
                        const ModelInterface& model,
                        const SearchConfig& config, Rng& rng);

// Independent full-enumeration PUCT search used as the oracle for the
// exhaustive-mode equivalence check. Deliberately shares no tree code with
// run_search.
SearchResult run_search_full_reference(const StateHandle& root_observation,
                                       const ModelInterface& model,
                                       const SearchConfig& config, Rng& rng);

}  // namespace sampled
