#pragma once

// Norms on the base space E = C^m (or R^m in real mode) together with the two
// classical tensor norms against a Hilbert space that the MIN and MAX
// quantizations are built from.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pllab/linalg.hpp"
#include "pllab/rng.hpp"

namespace pllab {

/// Two-sided enclosure of a scalar quantity.
struct Enclosure {
  double lower = 0.0;
  double upper = 0.0;
  bool exact() const { return upper - lower <= 1e-12 * std::max(1.0, upper); }
};

/// ℓp with positive weights:  (Σ w_j |x_j|^p)^{1/p}  for p < ∞ and
/// max_j w_j |x_j|  for p = ∞.  Euclidean is the unweighted ℓ2 norm.
/// Polytope norms are given by a symmetric finite set of dual-ball vertices
/// f_k (rows) as  max_k |Σ_j f_kj x_j|.
class BaseNorm {
 public:
  enum class Kind { Lp, Euclidean, Polytope };

  static BaseNorm lp(double p, std::vector<double> weights, bool real = false);
  static BaseNorm euclidean(std::size_t dim, bool real = false);
  static BaseNorm polytope(Matrix dual_vertices, bool real = false);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  bool real() const { return real_; }
  double p() const { return p_; }
  const std::vector<double>& weights() const { return weights_; }
  const Matrix& vertices() const { return vertices_; }

  /// ℓ1-type bases (including dimension one) admit closed forms for the
  /// projective tensor norm.
  bool is_l1() const;

  double norm(const Vector& x) const;

  /// Norm of the functional x -> Σ f_j x_j. Exact for ℓp and Euclidean;
  /// for polytopes the upper end comes from a feasible ℓ1 representation.
  Enclosure dual_norm(const Vector& f) const;

  /// f with dual norm at most one and Σ f_j x_j = ‖x‖.
  Vector norming_functional(const Vector& x) const;

  /// κ > 0 with ‖x‖ ≥ κ ‖x‖_2 for all x.
  double euclidean_lower_constant() const;

  /// The dual norm as a base norm; absent for polytopes.
  std::optional<BaseNorm> dual() const;

  /// Candidate directions for decomposition dictionaries: extreme points of
  /// the unit ball where they are enumerable, plus `random_count` random
  /// directions drawn from `rng` (phase-randomized for ℓ∞).
  std::vector<Vector> dictionary_directions(Rng& rng, std::size_t random_count) const;

  std::string describe() const;

 private:
  BaseNorm() = default;

  Kind kind_ = Kind::Euclidean;
  std::size_t dim_ = 0;
  bool real_ = false;
  double p_ = 2.0;
  std::vector<double> weights_;
  Matrix vertices_;
};

struct InjectiveOptions {
  int starts = 8;
  int iterations = 200;
  std::uint64_t seed = 0;
};

struct InjectiveResult {
  Enclosure bounds;
  /// Functional attaining `bounds.lower`; its dual norm is at most one.
  Vector argmax;
  std::string method;
};

/// sup ‖C f‖_2 over the dual unit ball of `base`, i.e. the injective norm of
/// C viewed in H_n ⊗_i E. C is n × m.
InjectiveResult injective_norm(const BaseNorm& base, const Matrix& c,
                               const InjectiveOptions& options = {});

/// Largest sign-vector count for exact real-mode enumeration.
inline constexpr std::size_t kMaxEnumerationDim = 16;

}  // namespace pllab
