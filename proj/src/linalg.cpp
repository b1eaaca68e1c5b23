#include "pllab/linalg.hpp"

#include <algorithm>

namespace pllab {

RealVector singular_values(const Matrix& a) {
  if (a.size() == 0) return RealVector();
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

double nuclear_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a).sum();
}

double smallest_singular_value(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const RealVector s = singular_values(a);
  if (std::min(a.rows(), a.cols()) < a.cols()) return 0.0;
  return s(s.size() - 1);
}

std::size_t numerical_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  const RealVector s = singular_values(a);
  if (s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

Matrix range_projector(const Matrix& a, double rel_tol) {
  const Eigen::Index n = a.rows();
  if (a.size() == 0) return Matrix::Zero(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  Matrix p = Matrix::Zero(n, n);
  if (s.size() == 0 || s(0) == 0.0) return p;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= rel_tol * s(0)) break;
    p += svd.matrixU().col(i) * svd.matrixU().col(i).adjoint();
  }
  return p;
}

bool is_real(const Matrix& a) {
  return (a.array().imag() == 0.0).all();
}

Vector flatten(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix unflatten(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

}  // namespace pllab
