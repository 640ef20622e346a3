#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace qland {

/// Mixes a master seed with a path of indices (splitmix64 finalizer per step).
/// Used to give every radius / restart / repetition its own stream.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Seeded generator with portable transforms.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The uniform and normal transforms are implemented here instead
/// of using std::*_distribution so that draws are identical across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();

  /// Complex standard normal, E|z|^2 = 1.
  std::complex<double> complex_normal();

  /// Independent child generator for a sub-task.
  Rng child(std::initializer_list<std::uint64_t> path) const {
    return Rng(derive_seed(seed_, path));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qland
