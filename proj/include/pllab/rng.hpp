#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "pllab/linalg.hpp"

namespace pllab {

/// splitmix64 mix of (seed, stream); used to derive independent child seeds
/// so that parallel or reordered work stays deterministic.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  Rng child(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }
  std::uint64_t seed() const { return seed_; }

  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);        // inclusive
  double normal();
  Complex complex_normal();
  Matrix gaussian(Eigen::Index rows, Eigen::Index cols, bool real = false);
  /// Random matrix with orthonormal columns (rows >= cols).
  Matrix orthonormal_columns(Eigen::Index rows, Eigen::Index cols, bool real = false);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace pllab
