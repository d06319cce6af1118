#pragma once

#include <cstdint>
#include <random>

namespace trajan::rng {

/// SplitMix64 step; advances the state and returns the next output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives an independent child seed from (seed, stream). Used to hand every
/// simulated vehicle and every batch run its own generator so draw order in
/// one consumer never shifts the draws seen by another.
std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

/// Deterministic sampler over mt19937_64. The distribution transforms are
/// written out by hand (not std::*_distribution) because the standard leaves
/// those algorithms implementation-defined and output files must be
/// bit-identical across toolchains.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller; caches the second deviate.
  double gauss();
  double gauss(double mean, double sigma);

  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace trajan::rng
