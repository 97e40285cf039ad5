#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>

namespace smp {

/// Counter-based generator: a 64-bit master seed and a substream index fully
/// determine the stream, and drawing only advances a counter. Replication i of
/// a Monte Carlo run uses substream i, so runs are reproducible and samples
/// are independent of scheduling. All variates are built from explicit
/// formulas (no std::*_distribution), so sequences are bit-stable across
/// platforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed + 0x8BADF00D5EEDull)), stream_(mix(stream + 0x1234567897531ull)) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9E3779B97F4A7C15ull * (++ctr_) + stream_); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  /// Standard normal via Box-Muller; consumes two uniforms, no cached spare.
  double normal() {
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * M_PI * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Index sampled from a probability row by CDF inversion.
  int categorical(const Eigen::VectorXd& probs) {
    double u = uniform(), acc = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size() - 1);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t ctr_ = 0;
};

}  // namespace smp
