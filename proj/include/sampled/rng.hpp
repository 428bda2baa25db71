#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sampled {

// Seed plus stream id. Identical (seed, stream_id) pairs produce
// bit-identical sample sequences; replicas split by stream_id.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  RngSeed with_stream(std::uint64_t stream) const { return {seed, stream}; }
};

// Deterministic random stream. All draws go through uniform() so the
// sequence depends only on (seed, stream_id) and the call order.
class Rng {
 public:
  explicit Rng(RngSeed s)
      : engine_(init_engine(s)) {}

  // Uniform double in [0, 1).
  double uniform() {
    return (engine_() >> 11) * 0x1.0p-53;
  }

  // Inverse-CDF draw from a probability vector. Assumes probs sum to ~1.
  std::size_t categorical(std::span<const double> probs) {
    const double u = uniform();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      acc += probs[i];
      last_positive = i;
      if (u < acc) return i;
    }
    return last_positive;  // u fell into the rounding tail
  }

  double normal() {
    // Box-Muller, one value per call.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Marsaglia-Tsang gamma variate, shape alpha > 0, scale 1.
  double gamma(double alpha);

  // Dirichlet(alpha, ..., alpha) over n categories.
  std::vector<double> dirichlet(double alpha, std::size_t n);

 private:
  static std::mt19937_64 init_engine(RngSeed s) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(s.seed),
        static_cast<std::uint32_t>(s.seed >> 32),
        static_cast<std::uint32_t>(s.stream_id),
        static_cast<std::uint32_t>(s.stream_id >> 32)};
    return std::mt19937_64(seq);
  }

  std::mt19937_64 engine_;
};

}  // namespace sampled
