#pragma once

// Certified brackets for the pl- and l-tensor norms on H(E ⊗ F): upper
// bounds from explicit representations, lower bounds from L-contractive
// certificates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pllab/hilbert.hpp"
#include "pllab/maps.hpp"
#include "pllab/quantization.hpp"

namespace pllab {

struct SearchOptions {
  int budget = 200;
  std::uint64_t seed = 0;
  Pairing pairing;
  double tolerance = 1e-9;
};

/// a · (u ⋄ v) with a : H_{du·dv} -> H_d.
struct PLTerm {
  Matrix a;
  Matrix u;  // du × mE
  Matrix v;  // dv × mF
};

struct PLRepresentation {
  std::vector<PLTerm> terms;
  std::string generator;
  double value = kInfinity;  // Σ ‖a_k‖‖u_k‖‖v_k‖

  Matrix reconstruct(Pairing pairing) const;
};

/// a · Σ_k u_k ⋄ v_k with pairwise orthogonal supports P_k of the u_k.
struct LRepresentation {
  Matrix a;
  std::vector<Matrix> u;  // common du × mE
  std::vector<Matrix> v;  // common dv × mF
  std::vector<Matrix> supports;
  std::string generator;
  double value = kInfinity;  // ‖a‖ (Σ ‖u_k‖²‖v_k‖²)^{1/2}

  Matrix reconstruct(Pairing pairing) const;
};

struct CandidateValue {
  std::string id;
  double value = 0.0;
};

struct LowerWitness {
  std::string certificate;
  std::string provenance;
  std::string target;
  bool user_supplied = false;
  Matrix image;  // R(U), evaluated in `target`
  double value = 0.0;
};

struct NormBracket {
  double lower = 0.0;
  double upper = kInfinity;
  bool gap = false;
  LowerWitness lower_witness;
  std::optional<PLRepresentation> pl_witness;
  std::optional<LRepresentation> l_witness;
  std::vector<CandidateValue> lower_candidates;
  std::vector<CandidateValue> upper_candidates;
  /// Largest H-dimension among the representations tried.
  std::size_t max_dimension = 0;
};

/// PL value of a representation, recomputed from its terms.
double pl_value(const Quantization& e, const Quantization& f, const PLRepresentation& rep,
                const NormOptions& options = {});
/// L value of a representation, recomputed from its terms.
double l_value(const Quantization& e, const Quantization& f, const LRepresentation& rep,
               const NormOptions& options = {});

/// Whether the u-supports are pairwise orthogonal and contain the u_k.
bool supports_valid(const LRepresentation& rep, double tol = 1e-10);

NormBracket pl_norm_bracket(const Quantization& e, const Quantization& f, const Matrix& u,
                            const SearchOptions& options = {},
                            const std::vector<Certificate>& extra_certificates = {});
NormBracket l_norm_bracket(const Quantization& e, const Quantization& f, const Matrix& u,
                           const SearchOptions& options = {},
                           const std::vector<Certificate>& extra_certificates = {});

/// Moves the u_k onto pairwise orthogonal block supports and rebalances.
LRepresentation orthogonalize_representation(const Quantization& e, const Quantization& f,
                                             const PLRepresentation& rep, Pairing pairing = {},
                                             const NormOptions& options = {});

/// The PL-representation generators by name, for inspection and tests.
std::vector<PLRepresentation> pl_candidates(const Quantization& e, const Quantization& f, const Matrix& u,
                                            const SearchOptions& options = {});
std::vector<LRepresentation> l_candidates(const Quantization& e, const Quantization& f, const Matrix& u,
                                          const SearchOptions& options = {});

struct Comparison {
  NormBracket pl;
  NormBracket l;
  /// pl.lower / l.upper: a certified lower bound on ‖U‖_pl / ‖U‖_l.
  double separation = 0.0;
  bool consistent = true;
};

Comparison compare_pl_l(const Quantization& e, const Quantization& f, const Matrix& u,
                        const SearchOptions& options = {});

/// Certificates whose target passes the L-space whitelist and the (sR) search.
std::vector<Certificate> l_pool(const std::vector<Certificate>& certificates, int trials, std::uint64_t seed);

/// U reshaped as the d × (mE·mF) block, columns in pairing order of (i, j).
Matrix frame_operator(const Matrix& u, std::size_t me, std::size_t mf, Pairing pairing);

/// Σ_{k=1}^n e_k ⊗ p^k ⊗ p^k in H_n ⊗ (ℓ2^n ⊗ ℓ2^n).
Matrix v_example(std::size_t n);

}  // namespace pllab
