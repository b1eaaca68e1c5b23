#include "pllab/hilbert.hpp"

#include <string>

#include "pllab/errors.hpp"

namespace pllab {

std::string_view Pairing::name() const {
  return scheme_ == PairingScheme::RowMajor ? "row-major" : "column-major";
}

Pairing Pairing::from_name(std::string_view name) {
  if (name == "row-major") return Pairing(PairingScheme::RowMajor);
  if (name == "column-major") return Pairing(PairingScheme::ColumnMajor);
  throw InputError("unknown pairing scheme '" + std::string(name) + "'");
}

GradedVector::GradedVector(Vector coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) throw InputError("graded vector must have positive dimension");
}

GradedVector GradedVector::basis(std::size_t dim, std::size_t i) {
  if (i >= dim) throw InputError("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return GradedVector(std::move(v));
}

GradedVector GradedVector::zero(std::size_t dim) {
  return GradedVector(Vector::Zero(static_cast<Eigen::Index>(dim)));
}

GradedVector GradedVector::padded(std::size_t n) const {
  if (n < dim()) throw InputError("cannot pad to a smaller dimension");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
  v.head(coeffs_.size()) = coeffs_;
  return GradedVector(std::move(v));
}

Complex GradedVector::inner(const GradedVector& other) const {
  if (other.dim() != dim()) throw InputError("inner product of vectors of different dimension");
  return other.coeffs_.dot(coeffs_);  // Eigen's dot conjugates its left operand
}

OperatorBlock::OperatorBlock(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.cols() == 0)
    throw InputError("operator block must have positive dimensions");
}

OperatorBlock OperatorBlock::identity(std::size_t n) {
  return OperatorBlock(Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

OperatorBlock OperatorBlock::zero(std::size_t rows, std::size_t cols) {
  return OperatorBlock(Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)));
}

double OperatorBlock::norm() const { return spectral_norm(entries_); }

GradedVector OperatorBlock::apply(const GradedVector& x) const {
  if (x.dim() != cols()) throw InputError("operator applied to vector of wrong dimension");
  return GradedVector(entries_ * x.coeffs());
}

OperatorBlock operator*(const OperatorBlock& a, const OperatorBlock& b) {
  if (a.cols() != b.rows()) throw InputError("operator composition dimension mismatch");
  return OperatorBlock(a.entries_ * b.entries_);
}

OperatorBlock operator+(const OperatorBlock& a, const OperatorBlock& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InputError("operator sum dimension mismatch");
  return OperatorBlock(a.entries_ + b.entries_);
}

AmplifiedElement::AmplifiedElement(Matrix coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() == 0 || coeffs_.cols() == 0)
    throw InputError("amplified element must have positive dimensions");
}

AmplifiedElement AmplifiedElement::zero(std::size_t d, std::size_t m) {
  return AmplifiedElement(Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m)));
}

AmplifiedElement AmplifiedElement::elementary(const GradedVector& xi, const Vector& x) {
  if (x.size() == 0) throw InputError("base vector must have positive dimension");
  return AmplifiedElement(xi.coeffs() * x.transpose());
}

AmplifiedElement AmplifiedElement::padded(std::size_t d) const {
  if (d < this->d()) throw InputError("cannot pad to a smaller dimension");
  Matrix c = Matrix::Zero(static_cast<Eigen::Index>(d), coeffs_.cols());
  c.topRows(coeffs_.rows()) = coeffs_;
  return AmplifiedElement(std::move(c));
}

AmplifiedElement operator+(const AmplifiedElement& a, const AmplifiedElement& b) {
  if (a.d() != b.d() || a.m() != b.m()) throw InputError("sum of amplified elements of different shape");
  return AmplifiedElement(a.coeffs_ + b.coeffs_);
}

AmplifiedElement operator-(const AmplifiedElement& a, const AmplifiedElement& b) {
  if (a.d() != b.d() || a.m() != b.m()) throw InputError("difference of amplified elements of different shape");
  return AmplifiedElement(a.coeffs_ - b.coeffs_);
}

AmplifiedElement operator*(Complex c, const AmplifiedElement& a) {
  return AmplifiedElement(c * a.coeffs_);
}

GradedVector diamond(const GradedVector& xi, const GradedVector& eta, Pairing pairing) {
  const std::size_t d1 = xi.dim(), d2 = eta.dim();
  Vector out(static_cast<Eigen::Index>(d1 * d2));
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d2; ++j)
      out(static_cast<Eigen::Index>(pairing.index(i, j, d1, d2))) =
          xi.coeffs()(static_cast<Eigen::Index>(i)) * eta.coeffs()(static_cast<Eigen::Index>(j));
  return GradedVector(std::move(out));
}

OperatorBlock diamond(const OperatorBlock& a, const OperatorBlock& b, Pairing pairing) {
  const std::size_t r1 = a.rows(), c1 = a.cols(), r2 = b.rows(), c2 = b.cols();
  Matrix out(static_cast<Eigen::Index>(r1 * r2), static_cast<Eigen::Index>(c1 * c2));
  for (std::size_t i = 0; i < r1; ++i)
    for (std::size_t k = 0; k < r2; ++k) {
      const auto row = static_cast<Eigen::Index>(pairing.index(i, k, r1, r2));
      for (std::size_t j = 0; j < c1; ++j)
        for (std::size_t l = 0; l < c2; ++l)
          out(row, static_cast<Eigen::Index>(pairing.index(j, l, c1, c2))) =
              a.entries()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
              b.entries()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
    }
  return OperatorBlock(std::move(out));
}

AmplifiedElement diamond(const AmplifiedElement& u, const AmplifiedElement& v, Pairing pairing) {
  const std::size_t d1 = u.d(), d2 = v.d(), me = u.m(), mf = v.m();
  Matrix out(static_cast<Eigen::Index>(d1 * d2), static_cast<Eigen::Index>(me * mf));
  for (std::size_t p = 0; p < d1; ++p)
    for (std::size_t q = 0; q < d2; ++q) {
      const auto row = static_cast<Eigen::Index>(pairing.index(p, q, d1, d2));
      for (std::size_t i = 0; i < me; ++i)
        for (std::size_t j = 0; j < mf; ++j)
          out(row, static_cast<Eigen::Index>(i * mf + j)) =
              u.coeffs()(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i)) *
              v.coeffs()(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(j));
    }
  return AmplifiedElement(std::move(out));
}

OperatorBlock rank_one(const GradedVector& x, const GradedVector& y) {
  return OperatorBlock(x.coeffs() * y.coeffs().adjoint());
}

double op_norm(const OperatorBlock& a) { return a.norm(); }

AmplifiedElement module_action(const OperatorBlock& a, const AmplifiedElement& u) {
  if (a.cols() != u.d())
    throw InputError("module action: operator has " + std::to_string(a.cols()) +
                     " columns but element has H-dimension " + std::to_string(u.d()));
  return AmplifiedElement(a.entries() * u.coeffs());
}

OperatorBlock block_embedding(std::size_t from, std::size_t to, std::size_t offset) {
  if (offset + from > to) throw InputError("block embedding does not fit");
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from));
  for (std::size_t i = 0; i < from; ++i)
    s(static_cast<Eigen::Index>(offset + i), static_cast<Eigen::Index>(i)) = 1.0;
  return OperatorBlock(std::move(s));
}

}  // namespace pllab
