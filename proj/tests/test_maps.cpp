#include <gtest/gtest.h>

#include <cmath>

#include "pllab/errors.hpp"
#include "pllab/maps.hpp"

using namespace pllab;

TEST(Maps, AmplifiedLinearMapActsOnBaseCoefficients) {
  Rng rng(20);
  const Matrix phi = rng.gaussian(3, 2);
  const LinearMap map{phi, Quantization::hilbert(3), Quantization::hilbert(2)};
  const Matrix u = rng.gaussian(4, 3);
  const Matrix out = amplify_linear(map, u);
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index j = 0; j < 2; ++j) {
      Complex s = 0.0;
      for (Eigen::Index i = 0; i < 3; ++i) s += u(r, i) * phi(i, j);
      EXPECT_NEAR(std::abs(out(r, j) - s), 0.0, 1e-12);
    }
}

TEST(Maps, FunctionalLbNormIsTheDualNormFromBelow) {
  Rng rng(21);
  Vector f(3);
  f << Complex(1.0, 0.5), -2.0, Complex(0.0, 0.3);
  const Quantization src = Quantization::max(BaseNorm::lp(1.0, {1.0, 1.0, 1.0}));
  const LinearMap map{f, src, Quantization::scalar()};
  const LbNormEstimate est = lb_norm_lower(map, 1000, 3);
  const double dual = f.cwiseAbs().maxCoeff();
  ASSERT_TRUE(est.closed_form.has_value());
  EXPECT_NEAR(*est.closed_form, dual, 1e-12);
  EXPECT_LE(est.lower, dual + 1e-9);
  EXPECT_GE(est.lower, 0.99 * dual);
}

TEST(Maps, HilbertOperatorLbNormIsSpectral) {
  Rng rng(22);
  const Matrix a = rng.gaussian(3, 3);
  const LinearMap map{a, Quantization::hilbert(3), Quantization::hilbert(3)};
  const LbNormEstimate est = lb_norm_lower(map, 600, 4);
  ASSERT_TRUE(est.closed_form.has_value());
  // ‖U a‖_F ≤ ‖a‖‖U‖_F with equality on the top singular direction.
  Eigen::JacobiSVD<Matrix> svd(a);
  EXPECT_NEAR(*est.closed_form, svd.singularValues()(0), 1e-10);
  EXPECT_LE(est.lower, svd.singularValues()(0) + 1e-9);
  EXPECT_GE(est.lower, 0.95 * svd.singularValues()(0));
}

TEST(Maps, BilinearLbNormOfRankOneTable) {
  Vector g(2), h(2);
  g << 1.0, 2.0;
  h << 0.5, -1.0;
  Matrix table(4, 1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) table(i * 2 + j, 0) = g(i) * h(j);
  const BilinearMap r{table, Quantization::hilbert(2), Quantization::hilbert(2), Quantization::scalar()};
  const LbNormEstimate est = lb_norm_lower(r, 400, 5);
  ASSERT_TRUE(est.closed_form.has_value());
  EXPECT_NEAR(*est.closed_form, g.norm() * h.norm(), 1e-12);
  EXPECT_LE(est.lower, g.norm() * h.norm() + 1e-9);
}

TEST(Maps, CatalogCertificatesAreContractiveOnSamples) {
  Rng rng(23);
  const Quantization h3 = Quantization::hilbert(3);
  for (const Certificate& c : builtin_certificates(h3, h3)) {
    for (int t = 0; t < 20; ++t) {
      const Matrix u = rng.gaussian(rng.uniform_int(1, 3), 3), v = rng.gaussian(rng.uniform_int(1, 3), 3);
      const double lhs = amp_norm(c.map.target, amplify_bilinear(c.map, u, v)).value;
      EXPECT_LE(lhs, c.bound * u.norm() * v.norm() + 1e-9) << c.id;
    }
  }
}

TEST(Maps, CoordinatewiseCertificatesOnTheVExample) {
  // M gives Σ_k |V_kk| = n into ℓ1, N gives the Frobenius norm √n into ℓ2.
  const std::size_t n = 3;
  Matrix v = Matrix::Zero(3, 9);
  for (Eigen::Index k = 0; k < 3; ++k) v(k, k * 3 + k) = 1.0;
  const auto certs = builtin_certificates(Quantization::hilbert(n), Quantization::hilbert(n));
  int seen = 0;
  for (const Certificate& c : certs) {
    if (c.id == "coordinatewise-M") {
      EXPECT_NEAR(certificate_value(c, v), 3.0, 1e-12);
      ++seen;
    }
    if (c.id == "coordinatewise-N") {
      EXPECT_NEAR(certificate_value(c, v), std::sqrt(3.0), 1e-12);
      ++seen;
    }
  }
  EXPECT_EQ(seen, 2);
}

TEST(Maps, LpEmbeddingIsIsometricOnProducts) {
  Rng rng(24);
  const Quantization e = Quantization::lp(3.0, {0.5, 2.0}, Quantization::scalar());
  const Quantization f = Quantization::hilbert(2);
  bool found = false;
  for (const Certificate& c : builtin_certificates(e, f)) {
    if (c.id != "lp-embedding") continue;
    found = true;
    const Matrix w = rng.gaussian(2, 2), u = rng.gaussian(3, 2);
    const double lhs = amp_norm(c.map.target, amplify_bilinear(c.map, w, u)).value;
    EXPECT_NEAR(lhs, amp_norm(e, w).value * u.norm(), 1e-10);
  }
  EXPECT_TRUE(found);
}

TEST(Maps, UserCertificatesAreLabeled) {
  const BilinearMap r{Matrix::Ones(4, 1), Quantization::hilbert(2), Quantization::hilbert(2), Quantization::scalar()};
  const Certificate c = user_certificate("mine", "my bound", r, 2.0);
  EXPECT_TRUE(c.user_supplied);
  EXPECT_EQ(c.provenance.rfind("user: ", 0), 0u);
  EXPECT_THROW(user_certificate("bad", "x", r, 0.0), InputError);
  const BilinearMap wrong{Matrix::Ones(3, 1), Quantization::hilbert(2), Quantization::hilbert(2),
                          Quantization::scalar()};
  EXPECT_THROW(user_certificate("bad", "x", wrong, 1.0), InputError);
}

TEST(Maps, AdaptedFunctionalPairIsNormalized) {
  Rng rng(25);
  const Quantization e = Quantization::min(BaseNorm::lp(1.0, {1.0, 2.0}));
  const Quantization f = Quantization::lp(2.0, {1.0, 1.0}, Quantization::scalar());
  const Matrix u = rng.gaussian(2, 4);
  const Certificate c = adapted_functional_pair(e, f, u, 7);
  // The table is a ⊗ b with ‖a‖*, ‖b‖* ≤ 1: contractive on elementary tensors.
  for (int t = 0; t < 20; ++t) {
    const Vector x = rng.gaussian(2, 1).col(0), y = rng.gaussian(2, 1).col(0);
    Complex s = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) s += x(i) * y(j) * c.map.table(i * 2 + j, 0);
    EXPECT_LE(std::abs(s), underlying_norm(e, x).value * underlying_norm(f, y).value + 1e-10);
  }
}
