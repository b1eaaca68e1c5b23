#pragma once

// Upper-bound search for projective-type norms  inf Σ_k ‖x_k‖_L ‖g_k‖_R  over
// decompositions Z = Σ_k x_k g_k^T, with arbitrary (evaluable) norms on
// both sides.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pllab/linalg.hpp"

namespace pllab {

using VectorNorm = std::function<double(const Vector&)>;

struct Decomposition {
  std::vector<Vector> left;
  std::vector<Vector> right;
  double value = kInfinity;
  std::string method;
  /// Lagrange multiplier of the last reweighted least-squares step (rows of
  /// Z's shape); a dual certificate candidate. Empty when IRLS did not run.
  Matrix multiplier;
  /// Multipliers sampled along the IRLS path; each one is a dual candidate.
  std::vector<Matrix> multiplier_path;

  Matrix reconstruct(Eigen::Index rows, Eigen::Index cols) const;
};

struct DecompositionOptions {
  int irls_iterations = 80;
  /// Right-hand norm is the Euclidean norm of the flattened vector.
  bool right_euclidean = false;
  /// Column generation: given the current multiplier, propose new left
  /// directions; each round re-runs IRLS on the enlarged dictionary.
  std::function<std::vector<Vector>(const Matrix&)> atom_oracle;
  int generation_rounds = 6;
  /// Exact right norms are evaluated every this many IRLS steps.
  int evaluation_stride = 1;
};

/// Candidates: basis slicing, SVD slicing, and iteratively reweighted least
/// squares over a dictionary of left directions (the dictionary is extended
/// with the standard basis and the left singular vectors of Z). Every
/// candidate reconstructs Z exactly; the cheapest is returned.
Decomposition search_decomposition(const Matrix& z, const VectorNorm& left_norm,
                                   const std::vector<Vector>& left_dictionary,
                                   const VectorNorm& right_norm,
                                   const DecompositionOptions& options = {});

}  // namespace pllab
