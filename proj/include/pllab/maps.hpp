#pragma once

// Amplified linear and bilinear maps, sampled lower bounds for their
// L-bounded norms, and the catalog of L-contractive bilinear maps used as
// lower-bound certificates for tensor norms.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pllab/hilbert.hpp"
#include "pllab/quantization.hpp"

namespace pllab {

/// φ : E -> F acting on base coefficients: φ(b_i) = Σ_j matrix(i, j) b'_j.
struct LinearMap {
  Matrix matrix;  // m_in × m_out
  Quantization source;
  Quantization target;
};

/// r : E × F -> G with r(b_i, b'_j) = Σ_k table(i*mF + j, k) b''_k.
struct BilinearMap {
  Matrix table;  // (mE·mF) × mG
  Quantization left;
  Quantization right;
  Quantization target;
};

/// φ_∞(U): coefficient matrix U · matrix.
Matrix amplify_linear(const LinearMap& phi, const Matrix& u);

/// r_∞(u, v) = (u ⋄ v) · table in H_{d_u·d_v} ⊗ G.
Matrix amplify_bilinear(const BilinearMap& r, const Matrix& u, const Matrix& v, Pairing pairing = {});

struct LbNormEstimate {
  double lower = 0.0;
  /// Best ratio among H-dimension-one inputs (the classical norm from below).
  double lower_d1 = 0.0;
  /// A closed form for the lb-norm, when one applies.
  std::optional<double> closed_form;
  bool exact = false;
  Matrix witness_u;
  Matrix witness_v;
  int evaluations = 0;
  std::string method;
};

/// Maximizes ‖φ_∞(U)‖ / ‖U‖ over sampled and locally improved U of H-dimension
/// 1..3; `budget` counts ratio evaluations.
LbNormEstimate lb_norm_lower(const LinearMap& phi, int budget, std::uint64_t seed);
LbNormEstimate lb_norm_lower(const BilinearMap& r, int budget, std::uint64_t seed, Pairing pairing = {});

/// An L-bounded bilinear map with a trusted bound on its lb-norm whose target
/// norm is evaluable; lower(‖r_∞ linearized(U)‖_G) / bound ≤ ‖U‖_pl.
struct Certificate {
  std::string id;
  std::string provenance;
  BilinearMap map;
  double bound = 1.0;
  bool user_supplied = false;
};

/// Every catalog certificate applicable to E × F.
std::vector<Certificate> builtin_certificates(const Quantization& e, const Quantization& f);

/// Caller-trusted extension; labeled as such in every witness.
Certificate user_certificate(std::string id, std::string provenance, BilinearMap map, double bound);

/// R(U) = U · table, the value of the linearization on H(E ⊗ F).
Matrix linearize(const Certificate& c, const Matrix& u);

/// Certificate value lower(‖R(U)‖_G) / bound.
double certificate_value(const Certificate& c, const Matrix& u, const NormOptions& options = {});

/// Norming-functional pair f × g tuned to U by alternating maximization;
/// always L-contractive after normalization by the dual norms.
Certificate adapted_functional_pair(const Quantization& e, const Quantization& f, const Matrix& u,
                                    std::uint64_t seed, int rounds = 20);

}  // namespace pllab
