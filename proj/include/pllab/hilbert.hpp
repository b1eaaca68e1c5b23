#pragma once

// Finite truncations H_d = C^d of the fixed separable Hilbert space, the
// diamond product induced by a fixed identification H (x) H -> H, and the
// left action of finite operator blocks on amplified elements H_d (x) E.

#include <cstddef>
#include <string_view>
#include <utility>

#include "pllab/linalg.hpp"

namespace pllab {

enum class PairingScheme { RowMajor, ColumnMajor };

/// Basis-index bijection {0..d1-1} x {0..d2-1} -> {0..d1*d2-1}. Extended
/// linearly it is a unitary H_{d1} (x) H_{d2} -> H_{d1*d2}.
class Pairing {
 public:
  constexpr Pairing() = default;
  constexpr explicit Pairing(PairingScheme scheme) : scheme_(scheme) {}

  constexpr std::size_t index(std::size_t i, std::size_t j, std::size_t d1,
                              std::size_t d2) const {
    return scheme_ == PairingScheme::RowMajor ? i * d2 + j : i + j * d1;
  }

  constexpr std::pair<std::size_t, std::size_t> inverse(std::size_t k, std::size_t d1,
                                                        std::size_t d2) const {
    return scheme_ == PairingScheme::RowMajor ? std::pair{k / d2, k % d2}
                                              : std::pair{k % d1, k / d1};
  }

  constexpr PairingScheme scheme() const { return scheme_; }
  std::string_view name() const;
  static Pairing from_name(std::string_view name);

  friend constexpr bool operator==(Pairing, Pairing) = default;

 private:
  PairingScheme scheme_ = PairingScheme::RowMajor;
};

class GradedVector {
 public:
  explicit GradedVector(Vector coeffs);
  static GradedVector basis(std::size_t dim, std::size_t i);
  static GradedVector zero(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(coeffs_.size()); }
  const Vector& coeffs() const { return coeffs_; }
  double norm() const { return coeffs_.norm(); }

  /// Zero-padded embedding into H_n, n >= dim().
  GradedVector padded(std::size_t n) const;

  /// <*this, other>, conjugate-linear in `other`.
  Complex inner(const GradedVector& other) const;

 private:
  Vector coeffs_;
};

/// Bounded operator H_cols -> H_rows.
class OperatorBlock {
 public:
  explicit OperatorBlock(Matrix entries);
  static OperatorBlock identity(std::size_t n);
  static OperatorBlock zero(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(entries_.cols()); }
  const Matrix& entries() const { return entries_; }

  double norm() const;
  GradedVector apply(const GradedVector& x) const;
  OperatorBlock adjoint() const { return OperatorBlock(entries_.adjoint()); }

  friend OperatorBlock operator*(const OperatorBlock& a, const OperatorBlock& b);
  friend OperatorBlock operator+(const OperatorBlock& a, const OperatorBlock& b);

 private:
  Matrix entries_;
};

/// Element of H_d (x) E stored against a fixed basis b_0..b_{m-1} of E:
/// column j holds the H-coefficients of b_j.
class AmplifiedElement {
 public:
  explicit AmplifiedElement(Matrix coeffs);
  static AmplifiedElement zero(std::size_t d, std::size_t m);
  /// The elementary tensor xi x.
  static AmplifiedElement elementary(const GradedVector& xi, const Vector& x);

  std::size_t d() const { return static_cast<std::size_t>(coeffs_.rows()); }
  std::size_t m() const { return static_cast<std::size_t>(coeffs_.cols()); }
  const Matrix& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.isZero(0.0); }

  /// Zero-padded in the H-slot.
  AmplifiedElement padded(std::size_t d) const;

  friend AmplifiedElement operator+(const AmplifiedElement& a, const AmplifiedElement& b);
  friend AmplifiedElement operator-(const AmplifiedElement& a, const AmplifiedElement& b);
  friend AmplifiedElement operator*(Complex c, const AmplifiedElement& a);

 private:
  Matrix coeffs_;
};

GradedVector diamond(const GradedVector& xi, const GradedVector& eta, Pairing pairing = {});
OperatorBlock diamond(const OperatorBlock& a, const OperatorBlock& b, Pairing pairing = {});

/// u <> v in H_{d1*d2} (x) (E (x) F); the base index of b_i (x) b'_j is i*mF + j
/// regardless of the pairing scheme.
AmplifiedElement diamond(const AmplifiedElement& u, const AmplifiedElement& v,
                         Pairing pairing = {});

/// x o y : z -> <z, y> x.
OperatorBlock rank_one(const GradedVector& x, const GradedVector& y);

double op_norm(const OperatorBlock& a);

/// a . U, acting on the H-slot. Throws InputError when a.cols() != U.d().
AmplifiedElement module_action(const OperatorBlock& a, const AmplifiedElement& u);

/// Isometry H_from -> H_to placing coordinates at [offset, offset + from).
OperatorBlock block_embedding(std::size_t from, std::size_t to, std::size_t offset);

}  // namespace pllab
