#include <array>
#include <cmath>
#include <map>

#include "doctest.h"
#include "sampled/distribution.hpp"

using namespace sampled;

TEST_CASE("distribution constructor validates") {
  CHECK_THROWS(DiscreteDistribution({0.5, 0.6}));
  CHECK_THROWS(DiscreteDistribution({-0.1, 1.1}));
  CHECK_THROWS(DiscreteDistribution({}));
  CHECK_NOTHROW(DiscreteDistribution({0.5, 0.5}));
  // Within tolerance is accepted as-is.
  CHECK_NOTHROW(DiscreteDistribution({0.5, 0.5 + 5e-10}));
}

TEST_CASE("normalized factory repairs raw weights") {
  const auto d = DiscreteDistribution::normalized({2.0, 6.0});
  CHECK(d[0] == doctest::Approx(0.25));
  CHECK(d[1] == doctest::Approx(0.75));
  CHECK_THROWS(DiscreteDistribution::normalized({0.0, 0.0}));
}

TEST_CASE("sample_actions degenerate proposal") {
  const auto pi = DiscreteDistribution::uniform(5);
  const auto beta = DiscreteDistribution::point_mass(3, 5);
  Rng rng({42, 0});
  const auto set = sample_actions(pi, beta, 5, rng);
  REQUIRE(set.entries.size() == 1);
  CHECK(set.entries[0].action == 3);
  CHECK(set.entries[0].count == 5);
  CHECK(set.empirical(0) == doctest::Approx(1.0));
}

TEST_CASE("sample_actions two-action enumeration") {
  // beta uniform over {0,1}, k=2: counts (2,0), (1,1), (0,2) occur with
  // probabilities 1/4, 1/2, 1/4.
  const auto beta = DiscreteDistribution::uniform(2);
  std::map<std::pair<int, int>, int> freq;
  const int trials = 40000;
  for (int t = 0; t < trials; ++t) {
    Rng rng({7, static_cast<std::uint64_t>(t)});
    const auto set = sample_actions(beta, beta, 2, rng);
    int c0 = 0, c1 = 0;
    for (const auto& e : set.entries) (e.action == 0 ? c0 : c1) = e.count;
    ++freq[{c0, c1}];
  }
  const auto frac = [&](int a, int b) {
    return static_cast<double>(freq[{a, b}]) / trials;
  };
  CHECK(frac(2, 0) == doctest::Approx(0.25).epsilon(0.05));
  CHECK(frac(1, 1) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(frac(0, 2) == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("sample_actions bookkeeping identities") {
  const auto beta = DiscreteDistribution::uniform(4);
  Rng rng({123, 5});
  const auto set = sample_actions(beta, beta, 20, rng);
  int total = 0;
  double bhat = 0.0;
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    total += set.entries[i].count;
    bhat += set.empirical(i);
    CHECK(set.entries[i].beta == doctest::Approx(0.25));
  }
  CHECK(total == 20);
  CHECK(bhat == doctest::Approx(1.0));
}

TEST_CASE("sample_actions reproducible across instances") {
  const auto pi = DiscreteDistribution::normalized({1, 2, 3, 4});
  Rng a({99, 3}), b({99, 3});
  const auto s1 = sample_actions(pi, pi, 50, a);
  const auto s2 = sample_actions(pi, pi, 50, b);
  REQUIRE(s1.entries.size() == s2.entries.size());
  for (std::size_t i = 0; i < s1.entries.size(); ++i) {
    CHECK(s1.entries[i].action == s2.entries[i].action);
    CHECK(s1.entries[i].count == s2.entries[i].count);
  }
}

TEST_CASE("sample_actions frequencies match beta at k=1") {
  const auto beta = DiscreteDistribution::normalized({0.1, 0.2, 0.3, 0.4});
  const int m = 100000;
  std::array<int, 4> counts{};
  Rng rng({2024, 0});
  for (int i = 0; i < m; ++i) {
    const auto set = sample_actions(beta, beta, 1, rng);
    counts[set.entries[0].action] += 1;
  }
  for (int a = 0; a < 4; ++a) {
    const double p = beta[a];
    const double se = std::sqrt(p * (1 - p) / m);
    CHECK(std::abs(counts[a] / static_cast<double>(m) - p) < 4 * se);
  }
}

TEST_CASE("sample_actions input validation") {
  const auto p2 = DiscreteDistribution::uniform(2);
  const auto p3 = DiscreteDistribution::uniform(3);
  Rng rng({1, 1});
  CHECK_THROWS(sample_actions(p2, p3, 4, rng));
  CHECK_THROWS(sample_actions(p2, p2, 0, rng));
}

TEST_CASE("apply_temperature") {
  const auto pi = DiscreteDistribution({0.8, 0.2});
  SUBCASE("tau = 1 is the identity") {
    const auto out = apply_temperature(pi, 1.0);
    CHECK(out[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("large tau flattens toward uniform") {
    const auto out = apply_temperature(pi, 1e6);
    CHECK(std::abs(out[0] - 0.5) < 1e-3);
    CHECK(std::abs(out[1] - 0.5) < 1e-3);
  }
  SUBCASE("tau = 0.5 squares the probabilities") {
    const auto out = apply_temperature(pi, 0.5);
    const double z = 0.64 + 0.04;
    CHECK(std::abs(out[0] - 0.64 / z) < 1e-3);
    CHECK(std::abs(out[1] - 0.04 / z) < 1e-3);
  }
  SUBCASE("zero entries stay zero") {
    const auto z = apply_temperature(DiscreteDistribution({0.0, 1.0}), 0.3);
    CHECK(z[0] == 0.0);
    CHECK(z[1] == doctest::Approx(1.0));
  }
  SUBCASE("tau <= 0 rejected") {
    CHECK_THROWS(apply_temperature(pi, 0.0));
    CHECK_THROWS(apply_temperature(pi, -1.0));
  }
}

TEST_CASE("mix_dirichlet") {
  Rng rng({5, 5});
  SUBCASE("fraction 0 returns the input") {
    const auto pi = DiscreteDistribution({0.3, 0.7});
    const auto out = mix_dirichlet(pi, 0.3, 0.0, rng);
    CHECK(out[0] == 0.3);
    CHECK(out[1] == 0.7);
  }
  SUBCASE("point mass is unchanged at fraction 1") {
    const auto pi = DiscreteDistribution::point_mass(1, 3);
    const auto out = mix_dirichlet(pi, 0.3, 1.0, rng);
    CHECK(out[1] == doctest::Approx(1.0));
    CHECK(out[0] == 0.0);
  }
  SUBCASE("mixture lower bound") {
    const auto pi = DiscreteDistribution::uniform(10);
    for (int t = 0; t < 50; ++t) {
      const auto out = mix_dirichlet(pi, 0.3, 0.25, rng);
      double sum = 0.0;
      for (ActionId a = 0; a < 10; ++a) {
        CHECK(out[a] >= 0.75 * 0.1 - 1e-12);
        sum += out[a];
      }
      CHECK(sum == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("exhaustive_actions collapses importance ratios") {
  const auto pi = DiscreteDistribution::normalized({0.5, 0.0, 0.25, 0.25});
  const auto set = exhaustive_actions(pi);
  REQUIRE(set.entries.size() == 3);  // zero-probability action excluded
  CHECK(set.k == 3);
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    CHECK(set.importance_ratio(i) == 1.0);
  }
}
