#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sampled/operators.hpp"

namespace sampled {

struct KlResult {
  double value = 0.0;
  bool support_violation = false;  // value is +inf when set
};

// KL(p || q) over aligned vectors. Mass of p outside q's support raises
// the support_violation flag (infinity sentinel).
KlResult kl_divergence(std::span<const double> p, std::span<const double> q);

double tv_distance(std::span<const double> p, std::span<const double> q);

// Least-squares slope of log(y) against log(x). Non-positive y entries are
// excluded; fewer than 3 usable points is an error.
double log_log_slope(std::span<const double> x, std::span<const double> y);

struct FamilyKStats {
  int k = 0;
  int replicas = 0;
  std::vector<double> mean_estimate;      // full action space
  std::vector<double> per_atom_variance;  // across replicas
  double kl = 0.0;
  bool kl_infinite = false;
  double tv = 0.0;
  double mean_var = 0.0;             // over atoms with positive variance
  double estimator_variance = 0.0;   // of sum I_hat * X across replicas
  double sigma2_over_k = 0.0;        // enumerated sigma^2 / K
  double mean_z_gap = 0.0;           // mean |Z_hat - Z|
};

struct FamilyReport {
  ImprovementOperator op;
  std::vector<double> exact;  // improve_exact over the full space
  double exact_z = 0.0;
  double sigma2 = 0.0;  // Var_{a~beta}[f/beta * X], enumerated
  std::vector<FamilyKStats> per_k;
  double variance_slope = 0.0;
};

struct ReplicaReport {
  std::vector<int> k_values;
  std::vector<double> pi;
  std::vector<double> q;
  std::vector<FamilyReport> families;
};

struct SuiteSpec {
  int num_actions = 100;
  std::vector<int> k_values = {30, 100, 300, 1000};
  int replicas = 1000;
  std::vector<ImprovementOperator> operators = {
      {OperatorFamily::kPolicyGradient},
      {OperatorFamily::kPpoExp, 1.0},
      {OperatorFamily::kMpoExp, 1.0},
      {OperatorFamily::kAwrExp, 1.0},
      {OperatorFamily::kMuZeroRegularized, 1.0, 1.0}};
  RngSeed seed;
};

// Monte-Carlo convergence/variance study of the sampled operator against
// the exact one on a random instance with beta = pi. The test statistic X
// is the Q vector centered under each family's exact improved policy, so
// the enumerated sigma^2/K is the estimator's asymptotic variance.
ReplicaReport run_operator_convergence_suite(const SuiteSpec& spec);

// Fixed header: family,k,replica_count,kl,tv,mean_var,sigma2_over_k,slope
void write_suite_csv(const ReplicaReport& report, std::ostream& out);

// Pass/fail gates used by the CLI verify command.
struct SuiteGates {
  double slope_lo = -1.15;
  double slope_hi = -0.85;
  double sigma2_rel_tol = 0.25;  // at the largest K
  double tv_at_largest_k = 0.02;
};

std::vector<std::string> check_suite_gates(const ReplicaReport& report,
                                           const SuiteGates& gates);

}  // namespace sampled
