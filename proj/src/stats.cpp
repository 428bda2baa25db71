#include "sampled/stats.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sampled/distribution.hpp"

namespace sampled {

KlResult kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("kl_divergence: size mismatch");
  }
  KlResult out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) {
      out.support_violation = true;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    out.value += p[i] * std::log(p[i] / q[i]);
  }
  if (out.value < 0.0 && out.value > -1e-12) out.value = 0.0;
  return out;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("tv_distance: size mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("log_log_slope: size mismatch");
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 3) {
    throw std::invalid_argument("log_log_slope: need >= 3 usable points");
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ReplicaReport run_operator_convergence_suite(const SuiteSpec& spec) {
  const int n = spec.num_actions;
  ReplicaReport report;
  report.k_values = spec.k_values;

  // Random instance; beta = pi throughout.
  Rng inst_rng(spec.seed.with_stream(0xA11CE));
  std::vector<double> pi_w(n), q(n);
  for (auto& w : pi_w) w = inst_rng.uniform() + 1e-6;
  for (auto& v : q) v = inst_rng.uniform();
  const auto pi = DiscreteDistribution::normalized(pi_w);
  report.pi.assign(pi.probs().begin(), pi.probs().end());
  report.q = q;
  QEstimate qe{q, 0.0};
  // AWR baseline: mean Q under pi.
  for (int a = 0; a < n; ++a) qe.baseline += pi[a] * q[a];

  for (std::size_t fi = 0; fi < spec.operators.size(); ++fi) {
    const auto& op = spec.operators[fi];
    FamilyReport fam;
    fam.op = op;
    const auto exact = improve_exact(pi, qe, op);
    fam.exact = exact.probs;
    fam.exact_z = exact.normalizer_z;

    // Centered statistic: X = Q - E_{exact}[Q].
    double e_q = 0.0;
    for (int a = 0; a < n; ++a) e_q += exact.probs[a] * q[a];
    std::vector<double> x(n);
    for (int a = 0; a < n; ++a) x[a] = q[a] - e_q;

    // sigma^2 = Var_{a~beta}[f/beta * X] by enumeration (beta = pi).
    double mean_fx = 0.0, mean_fx2 = 0.0;
    for (int a = 0; a < n; ++a) {
      if (pi[a] <= 0.0) continue;
      const double t = exact.probs[a] / pi[a] * x[a];
      mean_fx += pi[a] * t;
      mean_fx2 += pi[a] * t * t;
    }
    fam.sigma2 = mean_fx2 - mean_fx * mean_fx;

    for (std::size_t ki = 0; ki < spec.k_values.size(); ++ki) {
      const int k = spec.k_values[ki];
      FamilyKStats ks;
      ks.k = k;
      ks.replicas = spec.replicas;
      std::vector<double> sum(n, 0.0), sumsq(n, 0.0);
      double est_sum = 0.0, est_sumsq = 0.0, z_gap_sum = 0.0;

      for (int r = 0; r < spec.replicas; ++r) {
        const std::uint64_t stream =
            (static_cast<std::uint64_t>(fi + 1) << 48) |
            (static_cast<std::uint64_t>(ki + 1) << 40) |
            static_cast<std::uint64_t>(r);
        Rng rng(spec.seed.with_stream(stream));
        const auto samples = sample_actions(pi, pi, k, rng);
        QEstimate sub;
        sub.baseline = qe.baseline;
        sub.values.reserve(samples.entries.size());
        for (const auto& e : samples.entries) sub.values.push_back(q[e.action]);
        const auto improved = improve_sampled(samples, sub, op);

        double est = 0.0;
        for (std::size_t i = 0; i < improved.support.size(); ++i) {
          const auto a = improved.support[i];
          sum[a] += improved.probs[i];
          sumsq[a] += improved.probs[i] * improved.probs[i];
          est += improved.probs[i] * x[a];
        }
        est_sum += est;
        est_sumsq += est * est;
        z_gap_sum += std::abs(improved.normalizer_z - fam.exact_z);
      }

      const double inv_r = 1.0 / spec.replicas;
      ks.mean_estimate.resize(n);
      ks.per_atom_variance.resize(n);
      double var_acc = 0.0;
      int var_count = 0;
      for (int a = 0; a < n; ++a) {
        ks.mean_estimate[a] = sum[a] * inv_r;
        double v = sumsq[a] * inv_r - ks.mean_estimate[a] * ks.mean_estimate[a];
        if (v < 0.0) v = 0.0;
        ks.per_atom_variance[a] = v;
        if (v > 0.0) {
          var_acc += v;
          ++var_count;
        }
      }
      ks.mean_var = var_count > 0 ? var_acc / var_count : 0.0;
      const double est_mean = est_sum * inv_r;
      ks.estimator_variance = est_sumsq * inv_r - est_mean * est_mean;
      ks.sigma2_over_k = fam.sigma2 / k;
      ks.mean_z_gap = z_gap_sum * inv_r;
      const auto kl = kl_divergence(ks.mean_estimate, fam.exact);
      ks.kl = kl.value;
      ks.kl_infinite = kl.support_violation;
      ks.tv = tv_distance(ks.mean_estimate, fam.exact);
      fam.per_k.push_back(std::move(ks));
    }

    std::vector<double> kx, vy;
    for (const auto& ks : fam.per_k) {
      kx.push_back(static_cast<double>(ks.k));
      vy.push_back(ks.mean_var);
    }
    fam.variance_slope = log_log_slope(kx, vy);
    report.families.push_back(std::move(fam));
  }
  return report;
}

void write_suite_csv(const ReplicaReport& report, std::ostream& out) {
  out << "family,k,replica_count,kl,tv,mean_var,sigma2_over_k,slope\n";
  out.precision(12);
  for (const auto& fam : report.families) {
    for (const auto& ks : fam.per_k) {
      out << family_name(fam.op.family) << "," << ks.k << "," << ks.replicas
          << ",";
      if (ks.kl_infinite) {
        out << "inf";
      } else {
        out << ks.kl;
      }
      out << "," << ks.tv << "," << ks.mean_var << "," << ks.sigma2_over_k
          << "," << fam.variance_slope << "\n";
    }
  }
}

std::vector<std::string> check_suite_gates(const ReplicaReport& report,
                                           const SuiteGates& gates) {
  std::vector<std::string> failures;
  for (const auto& fam : report.families) {
    const std::string name = family_name(fam.op.family);
    if (fam.variance_slope < gates.slope_lo ||
        fam.variance_slope > gates.slope_hi) {
      failures.push_back(name + ": variance slope " +
                         std::to_string(fam.variance_slope) +
                         " outside [" + std::to_string(gates.slope_lo) + ", " +
                         std::to_string(gates.slope_hi) + "]");
    }
    if (fam.per_k.empty()) continue;
    const auto& last = fam.per_k.back();
    if (last.tv > gates.tv_at_largest_k) {
      failures.push_back(name + ": TV(mean, exact) " +
                         std::to_string(last.tv) + " > " +
                         std::to_string(gates.tv_at_largest_k) + " at K=" +
                         std::to_string(last.k));
    }
    if (last.sigma2_over_k > 0.0) {
      const double rel =
          std::abs(last.estimator_variance - last.sigma2_over_k) /
          last.sigma2_over_k;
      if (rel > gates.sigma2_rel_tol) {
        failures.push_back(name + ": estimator variance off sigma^2/K by " +
                           std::to_string(100.0 * rel) + "% at K=" +
                           std::to_string(last.k));
      }
    }
  }
  return failures;
}

}  // namespace sampled
