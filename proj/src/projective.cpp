#include "pllab/projective.hpp"

#include <algorithm>
#include <cmath>

namespace pllab {

Matrix Decomposition::reconstruct(Eigen::Index rows, Eigen::Index cols) const {
  Matrix z = Matrix::Zero(rows, cols);
  for (std::size_t k = 0; k < left.size(); ++k) z += left[k] * right[k].transpose();
  return z;
}

namespace {

double evaluate(const std::vector<Vector>& left, const std::vector<Vector>& right,
                const VectorNorm& left_norm, const VectorNorm& right_norm) {
  double total = 0.0;
  for (std::size_t k = 0; k < left.size(); ++k) {
    if (right[k].isZero(0.0) || left[k].isZero(0.0)) continue;
    total += left_norm(left[k]) * right_norm(right[k]);
  }
  return total;
}

void prune(Decomposition& d, double scale) {
  std::vector<Vector> l, r;
  for (std::size_t k = 0; k < d.left.size(); ++k) {
    if (d.left[k].norm() * d.right[k].norm() <= 1e-15 * scale) continue;
    l.push_back(d.left[k]);
    r.push_back(d.right[k]);
  }
  d.left = std::move(l);
  d.right = std::move(r);
}

}  // namespace

Decomposition search_decomposition(const Matrix& z, const VectorNorm& left_norm,
                                   const std::vector<Vector>& left_dictionary,
                                   const VectorNorm& right_norm,
                                   const DecompositionOptions& options) {
  const Eigen::Index rows = z.rows();
  Decomposition best;
  best.value = kInfinity;
  if (z.isZero(0.0)) {
    best.value = 0.0;
    best.method = "zero";
    return best;
  }
  const double scale = z.norm();

  auto consider = [&](std::vector<Vector> left, std::vector<Vector> right, const char* method) {
    const double v = evaluate(left, right, left_norm, right_norm);
    if (v < best.value) {
      best.left = std::move(left);
      best.right = std::move(right);
      best.value = v;
      best.method = method;
    }
  };

  {
    std::vector<Vector> l, r;
    for (Eigen::Index i = 0; i < rows; ++i) {
      Vector e = Vector::Zero(rows);
      e(i) = 1.0;
      l.push_back(e);
      r.push_back(z.row(i).transpose());
    }
    consider(std::move(l), std::move(r), "basis-slicing");
  }

  Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  {
    std::vector<Vector> l, r;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      if (svd.singularValues()(k) <= 1e-15 * scale) break;
      l.push_back(svd.matrixU().col(k));
      r.push_back(svd.singularValues()(k) * svd.matrixV().col(k).conjugate());
    }
    consider(std::move(l), std::move(r), "svd-slicing");
  }

  // Dictionary columns normalized to unit left norm.
  std::vector<Vector> atoms;
  auto add_atom = [&](const Vector& x) {
    const double n = left_norm(x);
    if (!(n > 0.0) || !std::isfinite(n)) return false;
    Vector a = x / n;
    for (const Vector& b : atoms)
      if ((a - b).norm() <= 1e-10 * a.norm() || (a + b).norm() <= 1e-10 * a.norm()) return false;
    atoms.push_back(std::move(a));
    return true;
  };
  for (Eigen::Index i = 0; i < rows; ++i) {
    Vector e = Vector::Zero(rows);
    e(i) = 1.0;
    add_atom(e);
  }
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > 1e-15 * scale) add_atom(svd.matrixU().col(k));
  for (const Vector& x : left_dictionary) add_atom(x);

  const int rounds = options.atom_oracle ? std::max(1, options.generation_rounds) : 1;
  const int stride = std::max(1, options.evaluation_stride);
  for (int round = 0; round < rounds; ++round) {
    const auto r = static_cast<Eigen::Index>(atoms.size());
    Matrix x(rows, r);
    for (Eigen::Index k = 0; k < r; ++k) x.col(k) = atoms[k];

    RealVector w = RealVector::Ones(r);
    RealVector cost = RealVector::Ones(r);
    double eps = scale;
    Matrix lambda;
    for (int it = 0; it < options.irls_iterations; ++it) {
      const Matrix xw = x * w.cast<Complex>().asDiagonal();
      const Matrix m = xw * x.adjoint();
      lambda = m.ldlt().solve(z);
      if (!lambda.allFinite() || (m * lambda - z).norm() > 1e-10 * scale) lambda = m.fullPivLu().solve(z);
      const Matrix coeffs = w.cast<Complex>().asDiagonal() * (x.adjoint() * lambda);  // r × cols
      std::vector<Vector> rr(static_cast<std::size_t>(r));
      for (Eigen::Index k = 0; k < r; ++k) rr[k] = coeffs.row(k).transpose();
      const bool last = it + 1 == options.irls_iterations;
      const bool evaluate_now = options.right_euclidean || last || it % stride == 0;
      if (evaluate_now && (x * coeffs - z).norm() <= 1e-10 * scale) consider(atoms, rr, "irls");
      double maxg = 0.0;
      for (Eigen::Index k = 0; k < r; ++k) {
        const double gn = rr[k].norm();
        maxg = std::max(maxg, gn);
        if (gn > 0.0 && !options.right_euclidean && it % stride == 0) {
          cost(k) = right_norm(rr[k]) / gn;
          if (!(cost(k) > 0.0) || !std::isfinite(cost(k))) cost(k) = 1.0;
        }
      }
      eps = std::max(std::min(eps, 1e-2 * maxg * std::pow(0.7, it)), 1e-13 * scale);
      for (Eigen::Index k = 0; k < r; ++k) w(k) = std::max(rr[k].norm(), eps) / cost(k);
    }
    best.multiplier = lambda;
    if (lambda.allFinite()) best.multiplier_path.push_back(lambda);
    if (round + 1 == rounds) break;
    // Stop once no proposed atom violates dual feasibility of the multiplier.
    bool grew = false;
    for (const Vector& a : options.atom_oracle(lambda)) {
      const double n = left_norm(a);
      if (!(n > 0.0) || (lambda.adjoint() * a).norm() / n <= 1.0 + 1e-9) continue;
      grew = add_atom(a) || grew;
    }
    if (!grew) break;
  }
  prune(best, scale);
  return best;
}

}  // namespace pllab
