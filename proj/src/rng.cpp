#include "sampled/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sampled {

double Rng::gamma(double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("gamma: alpha must be > 0");
  if (alpha < 1.0) {
    // Boost via Gamma(alpha+1) and a uniform power.
    const double g = gamma(alpha + 1.0);
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return g * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

std::vector<double> Rng::dirichlet(double alpha, std::size_t n) {
  std::vector<double> out(n);
  double sum = 0.0;
  for (auto& g : out) {
    g = gamma(alpha);
    sum += g;
  }
  if (sum <= 0.0) {
    // All gamma draws underflowed; fall back to uniform.
    for (auto& g : out) g = 1.0 / static_cast<double>(n);
    return out;
  }
  for (auto& g : out) g /= sum;
  return out;
}

}  // namespace sampled
