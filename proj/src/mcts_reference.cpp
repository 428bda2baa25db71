// Full-enumeration PUCT search used as the oracle for the exhaustive-mode
// equivalence test. Written independently of run_search on purpose: its own
// node layout and loops, sharing only the model contract and config.

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "sampled/mcts.hpp"

namespace sampled {
namespace {

struct RefNode;

struct RefEdge {
  ActionId action = 0;
  double prior = 0.0;
  int visits = 0;
  double value_sum = 0.0;
  std::optional<double> q_init;
  std::unique_ptr<RefNode> node;
};

struct RefNode {
  StateHandle state;
  double reward = 0.0;
  double value = 0.0;
  int to_play = 0;
  bool terminal = false;
  int visits = 0;
  double value_sum = 0.0;
  std::vector<RefEdge> edges;
};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double q) {
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  double norm(double q) const { return hi > lo ? (q - lo) / (hi - lo) : q; }
};

void enumerate_children(RefNode& n, const std::vector<double>& policy,
                        const SearchConfig& config, Rng& rng, bool root) {
  auto pi = DiscreteDistribution::normalized(policy);
  if (root && config.dirichlet_fraction > 0.0) {
    pi = mix_dirichlet(pi, config.dirichlet_alpha, config.dirichlet_fraction,
                       rng);
  }
  std::vector<ActionId> support;
  std::vector<double> weights;
  for (ActionId a = 0; a < pi.size(); ++a) {
    if (pi[a] > 0.0) {
      support.push_back(a);
      weights.push_back(pi[a]);
    }
  }
  const auto priors = DiscreteDistribution::normalized(std::move(weights));
  for (std::size_t i = 0; i < support.size(); ++i) {
    RefEdge e;
    e.action = support[i];
    e.prior = priors[static_cast<ActionId>(i)];
    n.edges.push_back(std::move(e));
  }
}

double ref_edge_q(const RefNode& n, const RefEdge& e) {
  if (e.visits > 0) return e.value_sum / e.visits;
  if (e.q_init) return *e.q_init;
  return n.visits > 0 ? n.value_sum / n.visits : 0.0;
}

std::size_t pick(const RefNode& n, const SearchConfig& config,
                 const Range& range) {
  int total = 0;
  for (const auto& e : n.edges) total += e.visits;
  const double c = config.c1 + std::log((1.0 + config.c2 + total) / config.c2);
  const double root_total = std::sqrt(static_cast<double>(total));
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n.edges.size(); ++i) {
    const auto& e = n.edges[i];
    const double score = range.norm(ref_edge_q(n, e)) +
                         c * e.prior * root_total / (1.0 + e.visits);
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

double flip(const SearchConfig& config, int parent, int child, double v) {
  return (config.two_player && parent != child) ? -v : v;
}

}  // namespace

SearchResult run_search_full_reference(const StateHandle& root_observation,
                                       const ModelInterface& model,
                                       const SearchConfig& config, Rng& rng) {
  const auto out0 = model.initial_inference(root_observation);
  if (out0.terminal) {
    throw std::invalid_argument("reference search: terminal root");
  }
  RefNode root;
  root.state = out0.state;
  root.value = out0.value;
  root.to_play = out0.to_play;
  root.visits = 1;
  root.value_sum = out0.value;
  enumerate_children(root, out0.policy, config, rng, true);
  Range range;

  if (config.root_q_init) {
    for (auto& e : root.edges) {
      const auto out = model.recurrent_inference(root.state, e.action);
      const double v =
          out.terminal ? 0.0 : flip(config, root.to_play, out.to_play,
                                    out.value);
      e.q_init = out.reward + config.gamma * v;
      range.add(*e.q_init);
    }
  }

  for (int sim = 0; sim < config.num_simulations; ++sim) {
    std::vector<RefNode*> nodes{&root};
    std::vector<std::size_t> picks;
    RefNode* cur = &root;
    double leaf = 0.0;
    for (;;) {
      if (cur->terminal) break;
      if (cur->edges.empty()) {
        leaf = cur->value;
        break;
      }
      const auto i = pick(*cur, config, range);
      picks.push_back(i);
      auto& e = cur->edges[i];
      if (!e.node) {
        const auto out = model.recurrent_inference(cur->state, e.action);
        e.node = std::make_unique<RefNode>();
        e.node->state = out.state;
        e.node->reward = out.reward;
        e.node->value = out.value;
        e.node->to_play = out.to_play;
        e.node->terminal = out.terminal;
        e.node->visits = 1;
        e.node->value_sum = out.terminal ? 0.0 : out.value;
        if (!out.terminal) {
          enumerate_children(*e.node, out.policy, config, rng, false);
        }
        nodes.push_back(e.node.get());
        leaf = out.terminal ? 0.0 : out.value;
        break;
      }
      cur = e.node.get();
      nodes.push_back(cur);
    }

    double v = leaf;
    for (std::size_t l = picks.size(); l-- > 0;) {
      RefNode* parent = nodes[l];
      RefNode* child = nodes[l + 1];
      auto& e = parent->edges[picks[l]];
      const double ret =
          child->reward +
          config.gamma * flip(config, parent->to_play, child->to_play, v);
      e.visits += 1;
      e.value_sum += ret;
      parent->visits += 1;
      parent->value_sum += ret;
      range.add(e.value_sum / e.visits);
      v = ret;
    }
  }

  std::vector<double> visits;
  std::vector<ActionId> actions;
  std::vector<double> q;
  std::vector<double> priors;
  std::vector<int> counts;
  SampledActionSet set;
  set.k = static_cast<int>(root.edges.size());
  for (const auto& e : root.edges) {
    visits.push_back(static_cast<double>(e.visits));
    counts.push_back(e.visits);
    actions.push_back(e.action);
    q.push_back(ref_edge_q(root, e));
    priors.push_back(e.prior);
    set.entries.push_back({e.action, 1, e.prior,
                           1.0 / static_cast<double>(root.edges.size())});
  }
  return SearchResult{DiscreteDistribution::normalized(std::move(visits)),
                      std::move(actions), std::move(q), std::move(priors),
                      std::move(counts),
                      root.visits > 0 ? root.value_sum / root.visits : 0.0,
                      std::move(set)};
}

}  // namespace sampled
