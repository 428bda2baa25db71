#include "sampled/mcts.hpp"

#include <cmath>
#include <stdexcept>

namespace sampled {
namespace {

double edge_q(const SearchNode& node, const SearchNode::ChildEdge& edge) {
  if (edge.visit_count > 0) return edge.mean_value();
  if (edge.q_init.has_value()) return *edge.q_init;
  // Unvisited child with no Q initialization: parent's current mean.
  return node.mean_value();
}

double signed_child_value(int parent_to_play, int child_to_play,
                          double value, const SearchConfig& config) {
  if (config.two_player && parent_to_play != child_to_play) return -value;
  return value;
}

}  // namespace

DiscreteDistribution priors_from_samples(const SampledActionSet& samples,
                                         PriorMode mode) {
  std::vector<double> weights(samples.entries.size());
  for (std::size_t i = 0; i < samples.entries.size(); ++i) {
    const auto& e = samples.entries[i];
    weights[i] = mode == PriorMode::kPiHatBeta
                     ? samples.importance_ratio(i) * e.pi
                     : e.pi;
  }
  return DiscreteDistribution::normalized(std::move(weights));
}

int SearchNode::child_visit_total() const {
  int total = 0;
  for (const auto& c : children) total += c.visit_count;
  return total;
}

SampledActionSet expand_node(SearchNode& node, const ModelOutput& output,
                             const SearchConfig& config, Rng& rng,
                             bool is_root) {
  if (node.expanded()) throw std::logic_error("expand_node: already expanded");
  auto pi = DiscreteDistribution::normalized(output.policy);
  if (is_root && config.dirichlet_fraction > 0.0) {
    pi = mix_dirichlet(pi, config.dirichlet_alpha, config.dirichlet_fraction,
                       rng);
  }
  SampledActionSet samples;
  if (config.exhaustive_mode) {
    samples = exhaustive_actions(pi);
  } else {
    const auto beta = apply_temperature(pi, config.proposal_temperature);
    samples = sample_actions(pi, beta, config.k_samples, rng);
  }

  const auto priors = priors_from_samples(samples, config.prior_mode);

  node.children.resize(samples.entries.size());
  for (std::size_t i = 0; i < samples.entries.size(); ++i) {
    auto& edge = node.children[i];
    edge.action = samples.entries[i].action;
    edge.prior = priors[static_cast<ActionId>(i)];
    edge.beta_prob = samples.entries[i].beta;
    edge.pi_prob = samples.entries[i].pi;
  }
  return samples;
}

std::size_t select_child(const SearchNode& node, const SearchConfig& config,
                         const MinMaxStats& bounds) {
  if (!node.expanded()) throw std::logic_error("select_child: leaf node");
  const int total = node.child_visit_total();
  const double c =
      config.c1 + std::log((1.0 + config.c2 + total) / config.c2);
  const double sqrt_total = std::sqrt(static_cast<double>(total));

  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const auto& edge = node.children[i];
    const double q = bounds.normalize(edge_q(node, edge));
    const double u = c * edge.prior * sqrt_total / (1.0 + edge.visit_count);
    const double score = q + u;
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

void backup(std::vector<SearchNode*>& path, std::vector<std::size_t>& edges,
            double leaf_value, const SearchConfig& config,
            MinMaxStats& bounds) {
  if (path.size() != edges.size() + 1) {
    throw std::logic_error("backup: path/edge length mismatch");
  }
  double value = leaf_value;  // from the perspective of the current node
  for (std::size_t l = edges.size(); l-- > 0;) {
    SearchNode* parent = path[l];
    SearchNode* child = path[l + 1];
    auto& edge = parent->children[edges[l]];
    const double v_for_parent = signed_child_value(
        parent->to_play, child->to_play, value, config);
    const double ret = child->reward_to_here + config.gamma * v_for_parent;
    edge.visit_count += 1;
    edge.value_sum += ret;
    parent->node_visits += 1;
    parent->value_sum += ret;
    bounds.update(edge.mean_value());
    value = ret;
  }
}

void root_q_init(SearchNode& root, const ModelInterface& model,
                 const SearchConfig& config, MinMaxStats& bounds) {
  for (auto& edge : root.children) {
    const auto out = model.recurrent_inference(root.state, edge.action);
    const double v = out.terminal
                         ? 0.0
                         : signed_child_value(root.to_play, out.to_play,
                                              out.value, config);
    edge.q_init = out.reward + config.gamma * v;
    bounds.update(*edge.q_init);
  }
}

SearchResult run_search(const StateHandle& root_observation,
                        const ModelInterface& model,
                        const SearchConfig& config, Rng& rng) {
  const auto root_out = model.initial_inference(root_observation);
  if (root_out.terminal) {
    throw std::invalid_argument("run_search: root state is terminal");
  }

  SearchNode root;
  root.state = root_out.state;
  root.value_estimate = root_out.value;
  root.to_play = root_out.to_play;
  root.node_visits = 1;
  root.value_sum = root_out.value;
  MinMaxStats bounds;

  const auto root_samples = expand_node(root, root_out, config, rng, true);
  if (config.root_q_init) root_q_init(root, model, config, bounds);

  for (int sim = 0; sim < config.num_simulations; ++sim) {
    std::vector<SearchNode*> path{&root};
    std::vector<std::size_t> edges;
    SearchNode* node = &root;
    double leaf_value = 0.0;
    for (;;) {
      if (node->terminal) {
        leaf_value = 0.0;
        break;
      }
      if (!node->expanded()) {
        leaf_value = node->value_estimate;
        break;
      }
      const std::size_t idx = select_child(*node, config, bounds);
      edges.push_back(idx);
      auto& edge = node->children[idx];
      if (!edge.child) {
        const auto out = model.recurrent_inference(node->state, edge.action);
        edge.child = std::make_unique<SearchNode>();
        auto* child = edge.child.get();
        child->state = out.state;
        child->reward_to_here = out.reward;
        child->value_estimate = out.value;
        child->to_play = out.to_play;
        child->terminal = out.terminal;
        child->node_visits = 1;
        child->value_sum = out.terminal ? 0.0 : out.value;
        if (!out.terminal) expand_node(*child, out, config, rng, false);
        path.push_back(child);
        leaf_value = out.terminal ? 0.0 : out.value;
        break;
      }
      node = edge.child.get();
      path.push_back(node);
    }
    backup(path, edges, leaf_value, config, bounds);
  }

  const int total = root.child_visit_total();
  std::vector<double> visits(root.children.size());
  std::vector<ActionId> actions(root.children.size());
  std::vector<double> q(root.children.size());
  std::vector<double> priors(root.children.size());
  std::vector<int> counts(root.children.size());
  for (std::size_t i = 0; i < root.children.size(); ++i) {
    const auto& edge = root.children[i];
    visits[i] = static_cast<double>(edge.visit_count);
    counts[i] = edge.visit_count;
    actions[i] = edge.action;
    q[i] = edge_q(root, edge);
    priors[i] = edge.prior;
  }
  if (total == 0) {
    // Zero-simulation search: fall back to the priors.
    visits = priors;
  }
  return SearchResult{DiscreteDistribution::normalized(std::move(visits)),
                      std::move(actions), std::move(q), std::move(priors),
                      std::move(counts), root.mean_value(), root_samples};
}

}  // namespace sampled
