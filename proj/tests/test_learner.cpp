#include <sstream>

#include "doctest.h"
#include "sampled/gridworld.hpp"
#include "sampled/learner.hpp"
#include "sampled/stats.hpp"

using namespace sampled;

namespace {

SearchResult fake_search(std::vector<ActionId> actions,
                         std::vector<double> visit_probs) {
  SampledActionSet set;
  set.k = static_cast<int>(actions.size());
  for (auto a : actions) {
    set.entries.push_back({a, 1, 0.0, 1.0 / actions.size()});
  }
  const std::size_t n = actions.size();
  return SearchResult{DiscreteDistribution(std::move(visit_probs)),
                      std::move(actions),
                      std::vector<double>(n, 0.0),
                      std::vector<double>(n, 0.0),
                      std::vector<int>(n, 0),
                      0.0,
                      std::move(set)};
}

}  // namespace

TEST_CASE("n_step_target arithmetic") {
  TabularAgent agent(0.5, 0.5);
  SUBCASE("terminal at t returns the reward") {
    Trajectory traj;
    traj.steps.push_back({"s0", fake_search({0}, {1.0}), 0, 0.7, true, 0});
    CHECK(n_step_target(traj, 0, 5, 0.99, agent) == doctest::Approx(0.7));
  }
  SUBCASE("bootstrap after n steps") {
    Trajectory traj;
    traj.steps.push_back({"s0", fake_search({0}, {1.0}), 0, 1.0, false, 0});
    traj.steps.push_back({"s1", fake_search({0}, {1.0}), 0, 1.0, false, 0});
    traj.steps.push_back({"s2", fake_search({0}, {1.0}), 0, 1.0, true, 0});
    TabularAgent a(0.5, 1.0);
    a.update_value("s2", 4.0);
    CHECK(n_step_target(traj, 0, 2, 0.5, a) == doctest::Approx(2.5));
  }
  SUBCASE("all-zero rewards to terminal give 0") {
    Trajectory traj;
    traj.steps.push_back({"s0", fake_search({0}, {1.0}), 0, 0.0, false, 0});
    traj.steps.push_back({"s1", fake_search({0}, {1.0}), 0, 0.0, true, 0});
    CHECK(n_step_target(traj, 0, 10, 0.9, agent) == doctest::Approx(0.0));
  }
}

TEST_CASE("update mixes the visit target into the stored row") {
  SUBCASE("lr 1 copies the target") {
    TabularAgent agent(1.0, 1.0);
    update(agent, {{"s", {0.1, 0.9}, 2.0}});
    const auto row = agent.policy("s", 2);
    CHECK(row[0] == doctest::Approx(0.1));
    CHECK(row[1] == doctest::Approx(0.9));
    CHECK(agent.value("s") == doctest::Approx(2.0));
  }
  SUBCASE("lr 0.5 convex combination") {
    TabularAgent agent(0.5, 0.5);
    update(agent, {{"s", {1.0, 0.0}, 0.0}});
    const auto row = agent.policy("s", 2);
    CHECK(row[0] == doctest::Approx(0.75));
    CHECK(row[1] == doctest::Approx(0.25));
  }
  SUBCASE("rows stay valid distributions under many updates") {
    TabularAgent agent(0.3, 0.3);
    Rng rng({8, 8});
    for (int t = 0; t < 500; ++t) {
      std::vector<double> target(4, 0.0);
      target[static_cast<int>(rng.uniform() * 4)] = 1.0;
      update(agent, {{"s", target, rng.uniform()}});
      const auto row = agent.policy("s", 4);
      double sum = 0.0;
      for (double p : row) {
        CHECK(p >= 0.0);
        sum += p;
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
  SUBCASE("KL to the target never increases on the sampled support") {
    TabularAgent agent(0.4, 0.4);
    const std::vector<double> target{0.6, 0.4, 0.0, 0.0};
    for (int t = 0; t < 10; ++t) {
      const auto before = agent.policy("s", 4);
      update(agent, {{"s", target, 0.0}});
      const auto after = agent.policy("s", 4);
      const auto kl_before =
          kl_divergence(std::span<const double>(target).first(2),
                        std::span<const double>(before).first(2));
      const auto kl_after =
          kl_divergence(std::span<const double>(target).first(2),
                        std::span<const double>(after).first(2));
      CHECK(kl_after.value <= kl_before.value + 1e-12);
    }
  }
}

TEST_CASE("visit_target embeds sampled visits into the full space") {
  const auto search = fake_search({1, 3}, {0.25, 0.75});
  const auto target = visit_target(search, 5);
  CHECK(target[0] == 0.0);
  CHECK(target[1] == doctest::Approx(0.25));
  CHECK(target[3] == doctest::Approx(0.75));
}

TEST_CASE("checkpoint round trip reproduces tables") {
  TabularAgent agent(0.7, 0.2);
  update(agent, {{"s0", {0.2, 0.8}, 1.5}, {"s1", {1.0, 0.0}, -0.5}});
  std::stringstream buf;
  agent.save(buf);
  const auto loaded = TabularAgent::load(buf);
  CHECK(loaded.policy("s0", 2) == agent.policy("s0", 2));
  CHECK(loaded.policy("s1", 2) == agent.policy("s1", 2));
  CHECK(loaded.value("s0") == agent.value("s0"));
  CHECK(loaded.value("s1") == agent.value("s1"));
  std::stringstream bad("garbage header");
  CHECK_THROWS(TabularAgent::load(bad));
}

TEST_CASE("act is deterministic given the seed") {
  GridWorld env(3, 3, {}, 8, 0.0, 0);
  TabularAgent agent(0.5, 0.5);
  SearchConfig config;
  config.num_simulations = 12;
  config.k_samples = 4;
  Rng rng1({42, 1});
  Rng rng2({42, 1});
  const auto t1 = act(agent, env, config, rng1);
  const auto t2 = act(agent, env, config, rng2);
  REQUIRE(t1.steps.size() == t2.steps.size());
  for (std::size_t i = 0; i < t1.steps.size(); ++i) {
    CHECK(t1.steps[i].action == t2.steps[i].action);
    CHECK(t1.steps[i].reward == t2.steps[i].reward);
  }
}

TEST_CASE("training improves the gridworld policy") {
  // Small instance so the unit test stays fast; the acceptance suite runs
  // the full 5x5 criterion.
  GridWorld env(3, 3, {}, 8, 0.0, 0);
  TabularAgent agent(0.3, 0.3);
  SearchConfig config;
  config.num_simulations = 30;
  config.k_samples = 4;
  config.exhaustive_mode = true;
  config.root_q_init = true;
  TrainConfig tc;
  tc.episodes = 300;
  tc.n_step = 5;
  tc.gamma = 0.99;
  Rng rng({11, 0});
  train(agent, env, config, tc, rng);
  const auto vi = value_iteration_oracle(env, 0.99, 1e-10);
  // Greedy rollout from the start should reach the goal optimally.
  auto s = env.initial_state();
  double discount = 1.0, value = 0.0;
  for (int step_i = 0; step_i < 20 && !env.is_terminal(s); ++step_i) {
    const auto row = agent.policy(env.state_key(s), 4);
    const auto a = static_cast<ActionId>(
        std::max_element(row.begin(), row.end()) - row.begin());
    const auto step = env.step(s, a);
    value += discount * step.reward;
    discount *= 0.99;
    s = step.next;
  }
  CHECK(value == doctest::Approx(vi.values[0]).epsilon(0.01));
}
