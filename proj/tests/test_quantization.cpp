#include <gtest/gtest.h>

#include <cmath>

#include "pllab/errors.hpp"
#include "pllab/quantization.hpp"

using namespace pllab;

namespace {

Matrix householder_orthonormal(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::HouseholderQR<Matrix> qr(rng.gaussian(rows, rows));
  return Matrix(qr.householderQ()).leftCols(cols);
}

}  // namespace

TEST(Quantization, HilbertIsFrobenius) {
  const Matrix id = Matrix::Identity(2, 2);
  const NormValue v = amp_norm(Quantization::hilbert(2), id);
  EXPECT_DOUBLE_EQ(v.value, std::sqrt(2.0));
  EXPECT_TRUE(v.exact);
}

TEST(Quantization, MinOverEuclideanIsTheLargestSingularValue) {
  // Σ λ_k ξ_k ⊗ x_k with orthonormal systems has minimal norm max |λ_k|.
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    const Eigen::Index d = rng.uniform_int(1, 6), m = rng.uniform_int(1, 6);
    const Eigen::Index r = rng.uniform_int(1, static_cast<int>(std::min(d, m)));
    const Matrix xi = householder_orthonormal(rng, d, r), x = householder_orthonormal(rng, m, r);
    Matrix u = Matrix::Zero(d, m);
    double expected = 0.0;
    for (Eigen::Index k = 0; k < r; ++k) {
      const Complex lambda = rng.complex_normal();
      expected = std::max(expected, std::abs(lambda));
      u += lambda * xi.col(k) * x.col(k).transpose();
    }
    const NormValue v = amp_norm(Quantization::min(BaseNorm::euclidean(static_cast<std::size_t>(m))), u);
    EXPECT_NEAR(v.value, expected, 1e-10);
    EXPECT_NEAR(v.lower, expected, 1e-10);
  }
}

TEST(Quantization, MaxOverEuclideanIsNuclear) {
  Rng rng(12);
  const Matrix u = rng.gaussian(3, 4);
  Eigen::JacobiSVD<Matrix> svd(u);
  const NormValue v = amp_norm(Quantization::max(BaseNorm::euclidean(4)), u);
  EXPECT_NEAR(v.value, svd.singularValues().sum(), 1e-10);
  EXPECT_TRUE(v.exact);
}

TEST(Quantization, MaxOverL1SumsWeightedColumnNorms) {
  Rng rng(13);
  const Matrix u = rng.gaussian(3, 3);
  const NormValue v = amp_norm(Quantization::max(BaseNorm::lp(1.0, {1.0, 2.0, 0.5})), u);
  const double expected = u.col(0).norm() + 2.0 * u.col(1).norm() + 0.5 * u.col(2).norm();
  EXPECT_NEAR(v.value, expected, 1e-12);
  EXPECT_NEAR(v.lower, expected, 1e-12);
}

TEST(Quantization, SingleRowElementsHaveTheUnderlyingNorm) {
  Rng rng(14);
  const BaseNorm b = BaseNorm::lp(3.0, {1.0, 2.0, 1.0});
  const Vector x = rng.gaussian(3, 1).col(0);
  for (const Quantization& q : {Quantization::min(b), Quantization::max(b)}) {
    const NormValue v = amp_norm(q, x.transpose());
    EXPECT_NEAR(v.value, b.norm(x), 1e-12);
    EXPECT_TRUE(v.exact);
  }
}

TEST(Quantization, LpCombinesFibres) {
  Rng rng(15);
  const Quantization q = Quantization::lp(3.0, {0.5, 2.0}, Quantization::hilbert(2));
  const Matrix u = rng.gaussian(2, 4);
  const double expected =
      std::cbrt(0.5 * std::pow(u.leftCols(2).norm(), 3.0) + 2.0 * std::pow(u.rightCols(2).norm(), 3.0));
  EXPECT_NEAR(amp_norm(q, u).value, expected, 1e-12);
  const Quantization qi = Quantization::lp(kInfinity, {5.0, 1.0}, Quantization::hilbert(2));
  EXPECT_NEAR(amp_norm(qi, u).value, std::max(u.leftCols(2).norm(), u.rightCols(2).norm()), 1e-12);
}

TEST(Quantization, ConcreteIsTheOperatorNormOfTheCombination) {
  Rng rng(16);
  const Matrix t0 = rng.gaussian(2, 3), t1 = rng.gaussian(2, 3);
  const Quantization q = Quantization::concrete(3, 2, {t0, t1});
  // One H-row: the norm of c_0 T_0 + c_1 T_1.
  Matrix u(1, 2);
  u << Complex(0.3, 1.0), Complex(-2.0, 0.5);
  Eigen::JacobiSVD<Matrix> svd(u(0, 0) * t0 + u(0, 1) * t1);
  EXPECT_NEAR(amp_norm(q, u).value, svd.singularValues()(0), 1e-12);
  EXPECT_THROW(Quantization::concrete(3, 2, {t0, 2.0 * t0}), InputError);
}

TEST(Quantization, TensorPEnclosesAnIndependentReference) {
  // Projective norm of a fixed element of H_2 ⊗ (ℓ3(1,2,1) ⊗_p ℓ2^2), from a
  // conic solver over 4000 random atoms: an upper bound of the true value.
  Rng rng(3);
  rng.gaussian(3, 6);
  rng.gaussian(2, 6);
  const Matrix u = rng.gaussian(2, 6);
  const Quantization q = Quantization::tensor_p(BaseNorm::lp(3.0, {1.0, 2.0, 1.0}), Quantization::hilbert(2));
  const NormValue v = amp_norm(q, u);
  const double reference = 7.3339;
  EXPECT_LE(v.lower, reference);
  EXPECT_LE(v.value, reference + 0.01);
  EXPECT_GE(v.value, v.lower);
  EXPECT_GE(v.lower, 0.9 * reference);
}

TEST(Quantization, TensorPOverL1AndEuclideanHaveClosedForms) {
  Rng rng(17);
  const Matrix u = rng.gaussian(2, 6);
  const Quantization l1 = Quantization::tensor_p(BaseNorm::lp(1.0, {1.0, 1.0, 2.0}), Quantization::hilbert(2));
  const double expected = u.leftCols(2).norm() + u.middleCols(2, 2).norm() + 2.0 * u.rightCols(2).norm();
  EXPECT_NEAR(amp_norm(l1, u).value, expected, 1e-12);
  const Quantization eu = Quantization::tensor_p(BaseNorm::euclidean(3), Quantization::hilbert(2));
  const NormValue v = amp_norm(eu, u);
  EXPECT_TRUE(v.exact);
}

TEST(Quantization, DualNormsAndNormingFunctionals) {
  Rng rng(18);
  const Quantization q = Quantization::lp(2.0, {1.0, 4.0}, Quantization::scalar());
  const Vector x = rng.gaussian(2, 1).col(0);
  const Vector f = norming_functional(q, x);
  EXPECT_NEAR(std::abs((f.transpose() * x)(0)), underlying_norm(q, x).value, 1e-10);
  EXPECT_LE(dual_norm(q, f).lower, 1.0 + 1e-10);
}

TEST(Quantization, SemiRuanSearchSeparatesLpOneFromLpTwo) {
  const Quantization l1 = Quantization::lp(1.0, {1.0, 1.0}, Quantization::scalar());
  const auto w = semi_ruan_witness_search(l1, 500, 1);
  ASSERT_TRUE(w.has_value());
  EXPECT_GT(w->lhs, w->rhs);
  // The witness is genuine: recompute both sides and check the supports.
  const double nu = amp_norm(l1, w->u).value, nv = amp_norm(l1, w->v).value;
  EXPECT_GT(std::pow(amp_norm(l1, w->u + w->v).value, 2), nu * nu + nv * nv + 1e-9);
  EXPECT_LT((w->u.adjoint() * w->v).norm(), 1e-12);
  for (Eigen::Index r = 0; r < w->u.rows(); ++r)
    EXPECT_TRUE(w->u.row(r).isZero(0.0) || w->v.row(r).isZero(0.0));

  EXPECT_FALSE(semi_ruan_witness_search(Quantization::lp(2.0, {1.0, 3.0}, Quantization::scalar()), 500, 1));
  EXPECT_TRUE(is_l_space(Quantization::lp(2.0, {1.0, 3.0}, Quantization::scalar())));
  EXPECT_FALSE(is_l_space(l1));
}

TEST(Quantization, DecompositionsReconstructTheElement) {
  Rng rng(19);
  const Quantization e = Quantization::max(BaseNorm::lp(kInfinity, {1.0, 1.0, 1.0}));
  const Quantization f = Quantization::hilbert(2);
  const Matrix u = rng.gaussian(2, 6);

  // U = Σ x_k ⊗ W_k: column i*mF + j is Σ x_k(i) W_k(:, j).
  const Decomposition left = decompose_left(u, e, f);
  Matrix rebuilt = Matrix::Zero(2, 6);
  double value = 0.0;
  for (std::size_t k = 0; k < left.left.size(); ++k) {
    const Matrix w = unflatten(left.right[k], 2, 2);
    for (Eigen::Index i = 0; i < 3; ++i) rebuilt.middleCols(i * 2, 2) += left.left[k](i) * w;
    value += left.left[k].cwiseAbs().maxCoeff() * w.norm();
  }
  EXPECT_LT((rebuilt - u).norm(), 1e-9);
  EXPECT_NEAR(value, left.value, 1e-9);

  // U = Σ W'_l ⊗ y_l: column i*mF + j is Σ W'_l(:, i) y_l(j).
  const Decomposition right = decompose_right(u, e, f);
  rebuilt.setZero();
  for (std::size_t l = 0; l < right.left.size(); ++l) {
    const Matrix w = unflatten(right.left[l], 2, 3);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) rebuilt.col(i * 2 + j) += right.right[l](j) * w.col(i);
  }
  EXPECT_LT((rebuilt - u).norm(), 1e-9);
}

TEST(Quantization, RejectsMismatchedInput) {
  EXPECT_THROW(amp_norm(Quantization::hilbert(3), Matrix::Ones(2, 2)), InputError);
  const Quantization real_min = Quantization::min(BaseNorm::lp(1.0, {1.0, 1.0}, true));
  Matrix c(1, 2);
  c << Complex(0, 1), 1.0;
  EXPECT_THROW(amp_norm(real_min, c), InputError);
  EXPECT_THROW(Quantization::hilbert(0), InputError);
  EXPECT_THROW(Quantization::lp(2.0, {}, Quantization::scalar()), InputError);
}
