#include <gtest/gtest.h>

#include "pllab/errors.hpp"
#include "pllab/hilbert.hpp"
#include "pllab/rng.hpp"

using namespace pllab;

TEST(Pairing, IndexAndInverseAreMutuallyInverse) {
  for (Pairing p : {Pairing(PairingScheme::RowMajor), Pairing(PairingScheme::ColumnMajor)}) {
    for (std::size_t d1 = 1; d1 <= 4; ++d1)
      for (std::size_t d2 = 1; d2 <= 4; ++d2)
        for (std::size_t k = 0; k < d1 * d2; ++k) {
          auto [i, j] = p.inverse(k, d1, d2);
          EXPECT_EQ(p.index(i, j, d1, d2), k);
        }
  }
  EXPECT_EQ(Pairing(PairingScheme::RowMajor).index(1, 2, 2, 3), 5u);
  EXPECT_EQ(Pairing(PairingScheme::ColumnMajor).index(1, 2, 2, 3), 5u);
  EXPECT_EQ(Pairing(PairingScheme::ColumnMajor).index(1, 0, 2, 3), 1u);
  EXPECT_EQ(Pairing::from_name("column-major"), Pairing(PairingScheme::ColumnMajor));
  EXPECT_THROW(Pairing::from_name("diagonal"), InputError);
}

TEST(Diamond, VectorsMultiplyNormsAndPreserveInnerProducts) {
  Rng rng(1);
  const Vector a = rng.gaussian(3, 1).col(0), b = rng.gaussian(2, 1).col(0);
  const Vector c = rng.gaussian(3, 1).col(0), e = rng.gaussian(2, 1).col(0);
  for (Pairing p : {Pairing(PairingScheme::RowMajor), Pairing(PairingScheme::ColumnMajor)}) {
    const GradedVector x = diamond(GradedVector(a), GradedVector(b), p);
    const GradedVector y = diamond(GradedVector(c), GradedVector(e), p);
    EXPECT_NEAR(x.norm(), a.norm() * b.norm(), 1e-12);
    // <a ⋄ b, c ⋄ e> = <a, c><b, e>
    const Complex lhs = x.inner(y);
    const Complex rhs = GradedVector(a).inner(GradedVector(c)) * GradedVector(b).inner(GradedVector(e));
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
  }
}

TEST(Diamond, OperatorsActCompatiblyWithVectors) {
  Rng rng(2);
  const OperatorBlock s(rng.gaussian(2, 3)), t(rng.gaussian(4, 2));
  const GradedVector x(rng.gaussian(3, 1).col(0)), y(rng.gaussian(2, 1).col(0));
  const Pairing p(PairingScheme::ColumnMajor);
  const Vector lhs = diamond(s, t, p).apply(diamond(x, y, p)).coeffs();
  const Vector rhs = diamond(s.apply(x), t.apply(y), p).coeffs();
  EXPECT_LT((lhs - rhs).norm(), 1e-12);
  EXPECT_NEAR(op_norm(diamond(s, t, p)), op_norm(s) * op_norm(t), 1e-10);
}

TEST(Diamond, AmplifiedElementsUseRowMajorBaseIndex) {
  // (ξ b_i) ⋄ (η b'_j) has base index i*mF + j whatever the H-pairing.
  const AmplifiedElement u = AmplifiedElement::elementary(GradedVector::basis(2, 1), Vector::Unit(3, 2));
  const AmplifiedElement v = AmplifiedElement::elementary(GradedVector::basis(3, 0), Vector::Unit(2, 1));
  for (Pairing p : {Pairing(PairingScheme::RowMajor), Pairing(PairingScheme::ColumnMajor)}) {
    const Matrix w = diamond(u, v, p).coeffs();
    ASSERT_EQ(w.rows(), 6);
    ASSERT_EQ(w.cols(), 6);
    EXPECT_EQ(w.cwiseAbs().sum(), 1.0);
    EXPECT_EQ(std::abs(w(static_cast<Eigen::Index>(p.index(1, 0, 2, 3)), 2 * 2 + 1)), 1.0);
  }
}

TEST(Operators, BlockEmbeddingIsAnIsometry) {
  const OperatorBlock v = block_embedding(2, 5, 3);
  const Matrix g = v.entries().adjoint() * v.entries();
  EXPECT_LT((g - Matrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_EQ(v.apply(GradedVector::basis(2, 1)).coeffs()(4), Complex(1.0));
  EXPECT_THROW(block_embedding(3, 4, 2), InputError);
}

TEST(Operators, RankOneAndModuleAction) {
  Rng rng(3);
  const GradedVector x(rng.gaussian(3, 1).col(0)), y(rng.gaussian(2, 1).col(0));
  EXPECT_NEAR(op_norm(rank_one(x, y)), x.norm() * y.norm(), 1e-12);
  const AmplifiedElement u(rng.gaussian(2, 4));
  const AmplifiedElement au = module_action(rank_one(x, y), u);
  EXPECT_EQ(au.d(), 3u);
  EXPECT_EQ(au.m(), 4u);
  EXPECT_THROW(module_action(OperatorBlock(rng.gaussian(2, 3)), u), InputError);
}

TEST(Amplified, PaddingAndArithmetic) {
  const AmplifiedElement u(Matrix::Ones(2, 3));
  const AmplifiedElement p = u.padded(4);
  EXPECT_EQ(p.d(), 4u);
  EXPECT_TRUE(p.coeffs().bottomRows(2).isZero(0.0));
  EXPECT_TRUE((u - u).is_zero());
  EXPECT_EQ((Complex(2.0) * u).coeffs()(1, 2), Complex(2.0));
}
