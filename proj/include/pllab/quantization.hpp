#pragma once

// PL-space descriptors and evaluation of the amplified norm on H_d (x) E.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pllab/base_norm.hpp"
#include "pllab/linalg.hpp"
#include "pllab/projective.hpp"

namespace pllab {

/// `value` is an upper bound; `lower` a certified lower bound. They agree
/// when `exact`.
struct NormValue {
  double value = 0.0;
  double lower = 0.0;
  bool exact = true;
  std::string method;
};

struct NormOptions {
  int starts = 8;
  int irls_iterations = 60;
  /// Cap on column-generation rounds in projective decompositions.
  int generation_rounds = 30;
  std::uint64_t seed = 0;
};

class Quantization {
 public:
  enum class Kind { Min, Max, Hilbert, Lp, Concrete, TensorP };

  static Quantization min(BaseNorm base);
  static Quantization max(BaseNorm base);
  static Quantization hilbert(std::size_t dim);
  /// The one-dimensional space C; every quantization of it is HILBERT(1).
  static Quantization scalar() { return hilbert(1); }
  /// Finite measure space with point masses `measure`, each fibre normed by `inner`.
  /// For p = inf the measure only fixes the number of points.
  static Quantization lp(double p, std::vector<double> measure, Quantization inner);
  /// Generators T_j : C^k -> C^l (l × k matrices), linearly independent.
  static Quantization concrete(std::size_t k, std::size_t l, std::vector<Matrix> generators);
  /// E (x)_p F with E normed by `base` and F by `inner`; index i*mF + j.
  static Quantization tensor_p(BaseNorm base, Quantization inner);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  bool real() const { return base_ ? base_->real() : (inner_ ? inner_->real() : false); }

  const BaseNorm& base() const;
  const Quantization& inner() const;
  double p() const { return p_; }
  const std::vector<double>& measure() const { return measure_; }
  std::size_t k() const { return k_; }
  std::size_t l() const { return l_; }
  const std::vector<Matrix>& generators() const { return generators_; }

  std::string kind_name() const;
  std::string describe() const;

 private:
  Quantization() = default;

  Kind kind_ = Kind::Hilbert;
  std::size_t dim_ = 1;
  std::optional<BaseNorm> base_;
  std::shared_ptr<const Quantization> inner_;
  double p_ = 2.0;
  std::vector<double> measure_;
  std::size_t k_ = 0, l_ = 0;
  std::vector<Matrix> generators_;
};

/// ‖U‖ for U ∈ H_d ⊗ E given as a d × dim matrix.
NormValue amp_norm(const Quantization& q, const Matrix& u, const NormOptions& options = {});

/// ‖x‖ := ‖e_0 x‖ on the underlying space.
NormValue underlying_norm(const Quantization& q, const Vector& x, const NormOptions& options = {});

/// Norm of the functional x -> Σ f_j x_j on the underlying space.
Enclosure dual_norm(const Quantization& q, const Vector& f);

/// f with dual norm at most one and f(x) close to ‖x‖ (equal where the
/// underlying norm is exact).
Vector norming_functional(const Quantization& q, const Vector& x);

/// The underlying norm as a BaseNorm when it is one of the classical types.
std::optional<BaseNorm> as_base_norm(const Quantization& q);

/// Candidate directions for decompositions over the underlying space.
std::vector<Vector> dictionary_directions(const Quantization& q, Rng& rng, std::size_t random_count);

/// γ(U) = Σ_j c_j ⊗ T_j as a (d·l) × k matrix, row p·l + q.
Matrix concrete_gamma(const Quantization& q, const Matrix& u);

/// Column block t (the fibre over point t) of an LP element.
Matrix lp_block(const Quantization& q, const Matrix& u, std::size_t t);

/// Writes U ∈ H_d ⊗ (E ⊗ F) (d × mE·mF) as Σ_k x_k ⊗ W_k with W_k ∈ H_d ⊗ F,
/// returning x_k in `left` and flattened W_k (column-major d × mF) in `right`.
Decomposition decompose_left(const Matrix& u, const Quantization& e, const Quantization& f,
                             const NormOptions& options = {});
/// Same with roles swapped: U = Σ_l W'_l ⊗ y_l, W'_l ∈ H_d ⊗ E in `left`
/// (flattened d × mE), y_l in `right`.
Decomposition decompose_right(const Matrix& u, const Quantization& e, const Quantization& f,
                              const NormOptions& options = {});

struct SemiRuanWitness {
  Matrix u;
  Matrix v;
  double lhs = 0.0;  // lower bound on ‖U+V‖²
  double rhs = 0.0;  // upper bound on ‖U‖² + ‖V‖²
  int trial = 0;
};

/// Samples pairs with orthogonal H-supports and returns the first violating
/// ‖U+V‖² ≤ ‖U‖² + ‖V‖² by more than `tolerance`.
std::optional<SemiRuanWitness> semi_ruan_witness_search(const Quantization& q, int trials,
                                                        std::uint64_t seed,
                                                        double tolerance = 1e-9);

/// Structural L-space test: kinds known to satisfy (sR).
bool is_l_space(const Quantization& q);

}  // namespace pllab
