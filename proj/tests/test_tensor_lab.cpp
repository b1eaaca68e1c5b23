#include <gtest/gtest.h>

#include <cmath>

#include "pllab/errors.hpp"
#include "pllab/tensor_lab.hpp"

using namespace pllab;

namespace {

SearchOptions fast(std::uint64_t seed, Pairing pairing = {}) {
  SearchOptions o;
  o.budget = 100;
  o.seed = seed;
  o.pairing = pairing;
  return o;
}

}  // namespace

TEST(TensorLab, VExampleSeparatesThePlAndLNorms) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const Quantization h = Quantization::hilbert(n);
    const Matrix v = v_example(n);
    const NormBracket pl = pl_norm_bracket(h, h, v, fast(1));
    const NormBracket l = l_norm_bracket(h, h, v, fast(1));
    EXPECT_NEAR(pl.lower, static_cast<double>(n), 1e-9);
    EXPECT_NEAR(pl.upper, static_cast<double>(n), 1e-9);
    EXPECT_NEAR(l.lower, std::sqrt(static_cast<double>(n)), 1e-9);
    EXPECT_NEAR(l.upper, std::sqrt(static_cast<double>(n)), 1e-9);
    EXPECT_FALSE(pl.gap);
    EXPECT_FALSE(l.gap);
  }
}

TEST(TensorLab, VExampleHasTheStatedCoefficients) {
  const Matrix v = v_example(2);
  ASSERT_EQ(v.rows(), 2);
  ASSERT_EQ(v.cols(), 4);
  Matrix expected = Matrix::Zero(2, 4);
  expected(0, 0) = 1.0;
  expected(1, 3) = 1.0;
  EXPECT_EQ(v, expected);
}

TEST(TensorLab, CandidatesReconstructTheElementAndReportTheirValue) {
  Rng rng(30);
  const Quantization e = Quantization::lp(2.0, {1.0, 0.5}, Quantization::scalar());
  const Quantization f = Quantization::max(BaseNorm::lp(1.0, {1.0, 1.0}));
  const Matrix u = rng.gaussian(2, 4);
  for (Pairing p : {Pairing(PairingScheme::RowMajor), Pairing(PairingScheme::ColumnMajor)}) {
    const SearchOptions o = fast(2, p);
    for (const PLRepresentation& rep : pl_candidates(e, f, u, o)) {
      if (!std::isfinite(rep.value)) continue;
      EXPECT_LT((rep.reconstruct(p) - u).norm(), 1e-8) << rep.generator;
      EXPECT_NEAR(pl_value(e, f, rep), rep.value, 1e-8 * std::max(1.0, rep.value)) << rep.generator;
    }
    for (const LRepresentation& rep : l_candidates(e, f, u, o)) {
      if (!std::isfinite(rep.value)) continue;
      EXPECT_LT((rep.reconstruct(p) - u).norm(), 1e-8) << rep.generator;
      EXPECT_TRUE(supports_valid(rep)) << rep.generator;
      EXPECT_NEAR(l_value(e, f, rep), rep.value, 1e-8 * std::max(1.0, rep.value)) << rep.generator;
    }
  }
}

TEST(TensorLab, OrthogonalizationKeepsTheElement) {
  Rng rng(31);
  const Quantization h = Quantization::hilbert(2);
  PLRepresentation rep;
  for (int k = 0; k < 3; ++k)
    rep.terms.push_back(PLTerm{rng.gaussian(2, 1), rng.gaussian(1, 2), rng.gaussian(1, 2)});
  const Pairing p;
  const LRepresentation l = orthogonalize_representation(h, h, rep, p);
  EXPECT_LT((l.reconstruct(p) - rep.reconstruct(p)).norm(), 1e-10);
  EXPECT_TRUE(supports_valid(l));
}

TEST(TensorLab, SupportsMustBeOrthogonal) {
  LRepresentation rep;
  rep.a = Matrix::Identity(1, 1);
  Matrix u = Matrix::Zero(2, 1);
  u(0, 0) = 1.0;
  rep.u = {u, u};
  rep.v = {Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
  Matrix p = Matrix::Zero(2, 2);
  p(0, 0) = 1.0;
  rep.supports = {p, p};
  EXPECT_FALSE(supports_valid(rep));
  Matrix q = Matrix::Zero(2, 2);
  q(1, 1) = 1.0;
  rep.supports = {p, q};
  EXPECT_FALSE(supports_valid(rep));  // u_2 is not inside its support
  rep.u[1] = Matrix::Zero(2, 1);
  rep.u[1](1, 0) = 1.0;
  EXPECT_TRUE(supports_valid(rep));
}

TEST(TensorLab, LNormIsDominatedByThePlNorm) {
  Rng rng(32);
  const Quantization e = Quantization::hilbert(2);
  const Quantization f = Quantization::lp(2.0, {1.0, 2.0}, Quantization::scalar());
  for (int t = 0; t < 4; ++t) {
    const Matrix u = rng.gaussian(2, 4);
    const Comparison c = compare_pl_l(e, f, u, fast(3 + t));
    EXPECT_LE(c.l.lower, c.pl.upper + 1e-9);
    EXPECT_LE(c.pl.lower, c.pl.upper + 1e-9);
    EXPECT_LE(c.l.lower, c.l.upper + 1e-9);
    EXPECT_LE(c.separation, c.pl.upper / c.l.lower + 1e-9);
    EXPECT_TRUE(c.consistent);
  }
}

TEST(TensorLab, BracketsScaleWithTheElement) {
  Rng rng(33);
  const Quantization e = Quantization::lp(1.0, {1.0, 2.0}, Quantization::scalar());
  const Quantization f = Quantization::lp(1.0, {0.5, 1.0}, Quantization::scalar());
  const Matrix u = rng.gaussian(2, 4);
  const Complex s(-1.5, 2.0);
  const NormBracket a = pl_norm_bracket(e, f, u, fast(4));
  const NormBracket b = pl_norm_bracket(e, f, s * u, fast(4));
  EXPECT_NEAR(b.lower, std::abs(s) * a.lower, 1e-9);
  EXPECT_NEAR(b.upper, std::abs(s) * a.upper, 1e-9);
}

TEST(TensorLab, PairingChangesNoNormValue) {
  Rng rng(34);
  const Quantization h2 = Quantization::min(BaseNorm::euclidean(2));
  const Quantization h3 = Quantization::min(BaseNorm::euclidean(3));
  const Matrix u = rng.gaussian(3, 6);
  const NormBracket rm = l_norm_bracket(h2, h3, u, fast(5, Pairing(PairingScheme::RowMajor)));
  const NormBracket cm = l_norm_bracket(h2, h3, u, fast(5, Pairing(PairingScheme::ColumnMajor)));
  EXPECT_NEAR(rm.lower, cm.lower, 1e-10);
  EXPECT_NEAR(rm.upper, cm.upper, 1e-10);
}

TEST(TensorLab, FrameOperatorPermutesColumns) {
  Rng rng(35);
  const Matrix u = rng.gaussian(2, 6);
  const Matrix rm = frame_operator(u, 2, 3, Pairing(PairingScheme::RowMajor));
  const Matrix cm = frame_operator(u, 2, 3, Pairing(PairingScheme::ColumnMajor));
  EXPECT_NEAR(spectral_norm(rm), spectral_norm(cm), 1e-12);
  EXPECT_NEAR(rm.norm(), u.norm(), 1e-12);
}

TEST(TensorLab, RejectsElementsOfTheWrongWidth) {
  const Quantization h = Quantization::hilbert(2);
  EXPECT_THROW(pl_norm_bracket(h, h, Matrix::Ones(1, 3)), InputError);
  EXPECT_THROW(l_norm_bracket(h, h, Matrix::Ones(1, 5)), InputError);
}
