#pragma once

#include <complex>
#include <cstddef>
#include <limits>

#include <Eigen/Dense>

namespace pllab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

RealVector singular_values(const Matrix& a);

/// Largest singular value; 0 for empty matrices.
double spectral_norm(const Matrix& a);

/// Sum of singular values (trace-class norm).
double nuclear_norm(const Matrix& a);

double smallest_singular_value(const Matrix& a);

/// Numerical rank with relative cutoff `rel_tol` against the largest singular value.
std::size_t numerical_rank(const Matrix& a, double rel_tol = 1e-12);

/// Orthogonal projector onto the column space of `a`.
Matrix range_projector(const Matrix& a, double rel_tol = 1e-12);

bool is_real(const Matrix& a);

/// Unit-modulus phase of z; 1 when z == 0.
inline Complex phase(Complex z) {
  const double r = std::abs(z);
  return r > 0.0 ? z / r : Complex(1.0, 0.0);
}

/// Flattens column-major into a vector.
Vector flatten(const Matrix& a);
Matrix unflatten(const Vector& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace pllab
