#include <cmath>
#include <vector>

#include "doctest.h"
#include "sampled/operators.hpp"
#include "sampled/stats.hpp"

using namespace sampled;

namespace {

// Random (pi, Q) instance for property checks.
struct Instance {
  DiscreteDistribution pi;
  QEstimate q;
};

Instance random_instance(int n, std::uint64_t stream) {
  Rng rng({777, stream});
  std::vector<double> w(n), q(n);
  for (auto& x : w) x = rng.uniform() + 1e-3;
  for (auto& x : q) x = rng.uniform();
  double baseline = 0.0;
  auto pi = DiscreteDistribution::normalized(std::move(w));
  for (int a = 0; a < n; ++a) baseline += pi[a] * q[a];
  return {std::move(pi), {std::move(q), baseline}};
}

const std::vector<ImprovementOperator> kAllFamilies = {
    {OperatorFamily::kPolicyGradient},
    {OperatorFamily::kPpoExp, 0.7},
    {OperatorFamily::kMpoExp, 1.0},
    {OperatorFamily::kAwrExp, 0.5},
    {OperatorFamily::kMuZeroRegularized, 1.0, 0.8}};

}  // namespace

TEST_CASE("improve_exact MPO examples") {
  const ImprovementOperator op{OperatorFamily::kMpoExp, 1.0};
  SUBCASE("symmetric inputs stay uniform") {
    const auto out =
        improve_exact(DiscreteDistribution({0.5, 0.5}), {{0.0, 0.0}}, op);
    CHECK(out.probs[0] == doctest::Approx(0.5));
    CHECK(out.probs[1] == doctest::Approx(0.5));
  }
  SUBCASE("Q = [ln 2, 0] doubles the first weight") {
    const auto out = improve_exact(DiscreteDistribution({0.5, 0.5}),
                                   {{std::log(2.0), 0.0}}, op);
    CHECK(std::abs(out.probs[0] - 2.0 / 3.0) < 1e-9);
    CHECK(std::abs(out.probs[1] - 1.0 / 3.0) < 1e-9);
  }
}

TEST_CASE("improve_exact regularized closed form") {
  const ImprovementOperator op{OperatorFamily::kMuZeroRegularized, 1.0, 1.0};
  const auto out =
      improve_exact(DiscreteDistribution({0.5, 0.5}), {{1.0, 0.0}}, op);
  const double z_expected = (2.0 + std::sqrt(2.0)) / 2.0;
  CHECK(out.normalizer_z == doctest::Approx(z_expected).epsilon(1e-12));
  CHECK(out.probs[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(out.probs[1] == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-9));
  // Residual of the normalizing equation.
  double sum = 0.0;
  for (int a = 0; a < 2; ++a) {
    sum += 0.5 / (out.normalizer_z - (a == 0 ? 1.0 : 0.0));
  }
  CHECK(std::abs(sum - 1.0) < 1e-9);
}

TEST_CASE("solve_normalizer examples") {
  const ImprovementOperator op{OperatorFamily::kMuZeroRegularized, 1.0, 1.0};
  SUBCASE("single action") {
    const std::vector<double> w{1.0};
    ImprovementOperator o = op;
    o.lambda_n = 2.5;
    CHECK(solve_normalizer(w, {{3.0}}, o) ==
          doctest::Approx(5.5).epsilon(1e-10));
  }
  SUBCASE("two-action quadratic root") {
    const std::vector<double> w{0.5, 0.5};
    CHECK(solve_normalizer(w, {{1.0, 0.0}}, op) ==
          doctest::Approx(1.7071067811865475).epsilon(1e-12));
  }
  SUBCASE("uniform case") {
    const std::vector<double> w{0.25, 0.25, 0.25, 0.25};
    ImprovementOperator o = op;
    o.lambda_n = 2.0;
    CHECK(solve_normalizer(w, {{0.0, 0.0, 0.0, 0.0}}, o) ==
          doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("exp families return the plain sum") {
    const ImprovementOperator mpo{OperatorFamily::kMpoExp, 1.0};
    const std::vector<double> w{0.5, 0.5};
    CHECK(solve_normalizer(w, {{std::log(2.0), 0.0}}, mpo) ==
          doctest::Approx(1.5));
  }
}

TEST_CASE("solve_normalizer residual and bounds on random instances") {
  for (int t = 0; t < 200; ++t) {
    const auto inst = random_instance(50, 1000 + t);
    ImprovementOperator op{OperatorFamily::kMuZeroRegularized, 1.0,
                           0.1 + 2.0 * (t % 10) / 10.0};
    std::vector<double> w(inst.pi.probs().begin(), inst.pi.probs().end());
    const double z = solve_normalizer(w, inst.q, op);
    double max_q = -1e300, sum = 0.0;
    for (int a = 0; a < 50; ++a) {
      max_q = std::max(max_q, inst.q.values[a]);
      sum += op.lambda_n * w[a] / (z - inst.q.values[a]);
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
    CHECK(z > max_q);
    CHECK(z <= max_q + op.lambda_n + 1e-12);
  }
}

TEST_CASE("normalizer is monotone in Q") {
  const auto inst = random_instance(20, 55);
  const ImprovementOperator op{OperatorFamily::kMuZeroRegularized, 1.0, 1.0};
  std::vector<double> w(inst.pi.probs().begin(), inst.pi.probs().end());
  const double z0 = solve_normalizer(w, inst.q, op);
  for (int a = 0; a < 20; ++a) {
    QEstimate lowered = inst.q;
    lowered.values[a] -= 0.5;
    CHECK(solve_normalizer(w, lowered, op) < z0);
  }
}

TEST_CASE("policy gradient rejects negative Q on the support") {
  const ImprovementOperator op{OperatorFamily::kPolicyGradient};
  CHECK_THROWS(
      improve_exact(DiscreteDistribution({0.5, 0.5}), {{-0.1, 1.0}}, op));
  // Zero-probability actions may carry negative Q.
  CHECK_NOTHROW(
      improve_exact(DiscreteDistribution({1.0, 0.0}), {{0.5, -1.0}}, op));
}

TEST_CASE("improve_sampled exhaustive coverage equals improve_exact") {
  for (int t = 0; t < 20; ++t) {
    const auto inst = random_instance(30, 2000 + t);
    const auto set = exhaustive_actions(inst.pi);
    QEstimate sub;
    sub.baseline = inst.q.baseline;
    for (const auto& e : set.entries) {
      sub.values.push_back(inst.q.values[e.action]);
    }
    for (const auto& op : kAllFamilies) {
      const auto exact = improve_exact(inst.pi, inst.q, op);
      const auto sampled_path = improve_sampled(set, sub, op);
      REQUIRE(sampled_path.support.size() == exact.support.size());
      for (std::size_t i = 0; i < exact.probs.size(); ++i) {
        CHECK(std::abs(sampled_path.probs[i] - exact.probs[i]) <= 1e-12);
      }
      CHECK(std::abs(sampled_path.normalizer_z - exact.normalizer_z) <=
            1e-12 * std::max(1.0, std::abs(exact.normalizer_z)));
    }
  }
}

TEST_CASE("improve_sampled single action is a point mass") {
  SampledActionSet set;
  set.k = 4;
  set.entries.push_back({7, 4, 0.2, 0.35});
  for (const auto& op : kAllFamilies) {
    const auto out = improve_sampled(set, {{0.3}}, op);
    REQUIRE(out.probs.size() == 1);
    CHECK(out.support[0] == 7);
    CHECK(out.probs[0] == doctest::Approx(1.0));
  }
}

TEST_CASE("improve_sampled MPO hand example") {
  // beta = pi = [0.5, 0.5], one draw each, so ratios are 1.
  SampledActionSet set;
  set.k = 2;
  set.entries.push_back({0, 1, 0.5, 0.5});
  set.entries.push_back({1, 1, 0.5, 0.5});
  const auto out = improve_sampled(set, {{std::log(2.0), 0.0}},
                                   {OperatorFamily::kMpoExp, 1.0});
  CHECK(out.probs[0] == doctest::Approx(2.0 / 3.0));
  CHECK(out.probs[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("expectation_under_improved") {
  ImprovedPolicy p;
  p.support = {0, 1};
  p.probs = {2.0 / 3.0, 1.0 / 3.0};
  SUBCASE("constant 1 integrates to 1") {
    const std::vector<double> ones{1.0, 1.0};
    CHECK(expectation_under_improved(p, ones) == doctest::Approx(1.0));
  }
  SUBCASE("indicator recovers the probability") {
    const std::vector<double> ind{0.0, 1.0};
    CHECK(expectation_under_improved(p, ind) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("dot product") {
    const std::vector<double> x{3.0, 0.0};
    CHECK(expectation_under_improved(p, x) == doctest::Approx(2.0));
  }
}

TEST_CASE("sir_resample point mass and frequencies") {
  ImprovedPolicy p;
  p.support = {4};
  p.probs = {1.0};
  Rng rng({31, 0});
  for (int i = 0; i < 10; ++i) CHECK(sir_resample(p, rng) == 4);

  ImprovedPolicy q;
  q.support = {0, 1};
  q.probs = {0.7, 0.3};
  int hits = 0;
  const int m = 100000;
  for (int i = 0; i < m; ++i) {
    if (sir_resample(q, rng) == 0) ++hits;
  }
  const double se = std::sqrt(0.21 / m);
  CHECK(std::abs(hits / static_cast<double>(m) - 0.7) < 4 * se);
}

TEST_CASE("two-stage SIR marginal approaches the exact operator") {
  // Smaller sibling of the acceptance criterion: K = 64, 40k episodes.
  const auto pi = DiscreteDistribution::uniform(3);
  const QEstimate q{{1.0, 0.0, 0.0}, 0.0};
  const ImprovementOperator op{OperatorFamily::kMpoExp, 1.0};
  const auto exact = improve_exact(pi, q, op);
  std::vector<double> freq(3, 0.0);
  const int episodes = 40000;
  for (int e = 0; e < episodes; ++e) {
    Rng rng({404, static_cast<std::uint64_t>(e)});
    const auto set = sample_actions(pi, pi, 64, rng);
    QEstimate sub;
    for (const auto& entry : set.entries) {
      sub.values.push_back(q.values[entry.action]);
    }
    freq[sir_resample(improve_sampled(set, sub, op), rng)] += 1.0;
  }
  for (auto& f : freq) f /= episodes;
  CHECK(tv_distance(freq, exact.probs) < 0.02);
}
