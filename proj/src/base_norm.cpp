#include "pllab/base_norm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pllab/errors.hpp"

namespace pllab {
namespace {

double conjugate_exponent(double p) {
  if (p == 1.0) return kInfinity;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double lp_of(const RealVector& a, double p) {
  if (std::isinf(p)) return a.size() ? a.maxCoeff() : 0.0;
  if (p == 1.0) return a.sum();
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += std::pow(a(i), p);
  return std::pow(s, 1.0 / p);
}

/// Duality map for ‖·‖_q: unit-q-norm g maximizing Re Σ conj(h_j) g_j.
Vector duality_map(const Vector& h, double q) {
  Vector g(h.size());
  if (std::isinf(q)) {
    for (Eigen::Index j = 0; j < h.size(); ++j) g(j) = phase(h(j));
    return g;
  }
  const double pp = conjugate_exponent(q);
  RealVector mag(h.size());
  for (Eigen::Index j = 0; j < h.size(); ++j) mag(j) = std::abs(h(j));
  if (mag.maxCoeff() == 0.0) {
    g.setZero();
    g(0) = 1.0;
    return g;
  }
  for (Eigen::Index j = 0; j < h.size(); ++j) g(j) = phase(h(j)) * std::pow(mag(j), pp - 1.0);
  RealVector gm(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) gm(j) = std::abs(g(j));
  return g / lp_of(gm, q);
}

double q_norm(const Vector& g, double q) {
  RealVector a(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) a(j) = std::abs(g(j));
  return lp_of(a, q);
}

}  // namespace

BaseNorm BaseNorm::lp(double p, std::vector<double> weights, bool real) {
  if (!(p >= 1.0)) throw InputError("p outside [1, inf]");
  if (weights.empty()) throw InputError("lp base norm needs at least one weight");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("lp weights must be positive and finite");
  BaseNorm b;
  b.kind_ = Kind::Lp;
  b.dim_ = weights.size();
  b.real_ = real;
  b.p_ = p;
  b.weights_ = std::move(weights);
  return b;
}

BaseNorm BaseNorm::euclidean(std::size_t dim, bool real) {
  if (dim == 0) throw InputError("euclidean base norm needs positive dimension");
  BaseNorm b;
  b.kind_ = Kind::Euclidean;
  b.dim_ = dim;
  b.real_ = real;
  b.weights_.assign(dim, 1.0);
  return b;
}

BaseNorm BaseNorm::polytope(Matrix dual_vertices, bool real) {
  const Eigen::Index k = dual_vertices.rows(), m = dual_vertices.cols();
  if (k == 0 || m == 0) throw InputError("polytope needs at least one vertex");
  if (real && !is_real(dual_vertices)) throw InputError("real-mode polytope has complex vertices");
  const double scale = dual_vertices.norm();
  for (Eigen::Index i = 0; i < k; ++i) {
    bool has_negative = false;
    for (Eigen::Index j = 0; j < k && !has_negative; ++j)
      has_negative = (dual_vertices.row(i) + dual_vertices.row(j)).norm() <= 1e-12 * scale;
    if (!has_negative) throw InputError("non-symmetric polytope descriptor: vertex " + std::to_string(i) + " has no negative");
  }
  if (numerical_rank(dual_vertices) < static_cast<std::size_t>(m))
    throw InputError("polytope vertices do not span the dual space; not a norm");
  BaseNorm b;
  b.kind_ = Kind::Polytope;
  b.dim_ = static_cast<std::size_t>(m);
  b.real_ = real;
  b.vertices_ = std::move(dual_vertices);
  return b;
}

bool BaseNorm::is_l1() const { return dim_ == 1 || (kind_ == Kind::Lp && p_ == 1.0); }

double BaseNorm::norm(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) throw InputError("base vector dimension mismatch");
  switch (kind_) {
    case Kind::Euclidean:
      return x.norm();
    case Kind::Polytope:
      return (vertices_ * x).cwiseAbs().maxCoeff();
    case Kind::Lp: {
      RealVector a(x.size());
      if (std::isinf(p_)) {
        for (Eigen::Index j = 0; j < x.size(); ++j) a(j) = weights_[j] * std::abs(x(j));
        return a.maxCoeff();
      }
      double s = 0.0;
      for (Eigen::Index j = 0; j < x.size(); ++j) s += weights_[j] * std::pow(std::abs(x(j)), p_);
      return p_ == 1.0 ? s : std::pow(s, 1.0 / p_);
    }
  }
  return 0.0;
}

Enclosure BaseNorm::dual_norm(const Vector& f) const {
  if (static_cast<std::size_t>(f.size()) != dim_) throw InputError("functional dimension mismatch");
  switch (kind_) {
    case Kind::Euclidean: {
      const double v = f.norm();
      return {v, v};
    }
    case Kind::Lp: {
      RealVector a(f.size());
      double v = 0.0;
      if (p_ == 1.0) {
        for (Eigen::Index j = 0; j < f.size(); ++j) a(j) = std::abs(f(j)) / weights_[j];
        v = a.maxCoeff();
      } else if (std::isinf(p_)) {
        for (Eigen::Index j = 0; j < f.size(); ++j) a(j) = std::abs(f(j)) / weights_[j];
        v = a.sum();
      } else {
        for (Eigen::Index j = 0; j < f.size(); ++j) a(j) = std::abs(f(j)) * std::pow(weights_[j], -1.0 / p_);
        v = lp_of(a, conjugate_exponent(p_));
      }
      return {v, v};
    }
    case Kind::Polytope: {
      if (f.isZero(0.0)) return {0.0, 0.0};
      // Upper: min Σ|c_k| subject to Σ c_k f_k = f, by reweighted least squares.
      const Matrix a = vertices_.transpose();  // m × K
      const Eigen::Index k = a.cols();
      RealVector w = RealVector::Ones(k);
      double upper = kInfinity;
      for (int it = 0; it < 100; ++it) {
        const Matrix aw = a * w.cast<Complex>().asDiagonal();
        const Matrix gram = aw * a.adjoint();
        const Vector y = gram.fullPivLu().solve(f);
        const Vector c = w.cast<Complex>().asDiagonal() * (a.adjoint() * y);
        if ((a * c - f).norm() <= 1e-10 * f.norm()) upper = std::min(upper, c.cwiseAbs().sum());
        const double eps = std::max(1e-14, 1e-2 * std::pow(0.8, it)) * c.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < k; ++i) w(i) = std::max(std::abs(c(i)), eps);
      }
      double lower = 0.0;
      for (const Vector& x : {Vector(f.conjugate()), Vector(norming_functional(f.conjugate()).conjugate())}) {
        const double nx = norm(x);
        if (nx > 0.0) lower = std::max(lower, std::abs((f.transpose() * x)(0)) / nx);
      }
      return {lower, std::max(lower, upper)};
    }
  }
  return {0.0, 0.0};
}

Vector BaseNorm::norming_functional(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) throw InputError("base vector dimension mismatch");
  Vector f = Vector::Zero(x.size());
  const double nx = norm(x);
  if (nx == 0.0) return f;
  switch (kind_) {
    case Kind::Euclidean:
      return x.conjugate() / nx;
    case Kind::Polytope: {
      const Vector fx = vertices_ * x;
      Eigen::Index k = 0;
      fx.cwiseAbs().maxCoeff(&k);
      return std::conj(phase(fx(k))) * vertices_.row(k).transpose();
    }
    case Kind::Lp: {
      if (std::isinf(p_)) {
        Eigen::Index jmax = 0;
        double best = -1.0;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
          const double v = weights_[j] * std::abs(x(j));
          if (v > best) best = v, jmax = j;
        }
        f(jmax) = weights_[jmax] * std::conj(phase(x(jmax)));
        return f;
      }
      for (Eigen::Index j = 0; j < x.size(); ++j)
        f(j) = weights_[j] * std::pow(std::abs(x(j)) / nx, p_ - 1.0) * std::conj(phase(x(j)));
      return f;
    }
  }
  return f;
}

double BaseNorm::euclidean_lower_constant() const {
  const double m = static_cast<double>(dim_);
  switch (kind_) {
    case Kind::Euclidean:
      return 1.0;
    case Kind::Polytope:
      return smallest_singular_value(vertices_) / std::sqrt(static_cast<double>(vertices_.rows()));
    case Kind::Lp: {
      const double wmin = *std::min_element(weights_.begin(), weights_.end());
      if (std::isinf(p_)) return wmin / std::sqrt(m);
      const double factor = p_ >= 2.0 ? std::pow(m, 1.0 / p_ - 0.5) : 1.0;
      return std::pow(wmin, 1.0 / p_) * factor;
    }
  }
  return 0.0;
}

std::optional<BaseNorm> BaseNorm::dual() const {
  switch (kind_) {
    case Kind::Euclidean:
      return euclidean(dim_, real_);
    case Kind::Polytope:
      return std::nullopt;
    case Kind::Lp: {
      std::vector<double> w(dim_);
      if (p_ == 1.0 || std::isinf(p_)) {
        for (std::size_t j = 0; j < dim_; ++j) w[j] = 1.0 / weights_[j];
        return lp(p_ == 1.0 ? kInfinity : 1.0, std::move(w), real_);
      }
      const double q = conjugate_exponent(p_);
      for (std::size_t j = 0; j < dim_; ++j) w[j] = std::pow(weights_[j], -q / p_);
      return lp(q, std::move(w), real_);
    }
  }
  return std::nullopt;
}

std::vector<Vector> BaseNorm::dictionary_directions(Rng& rng, std::size_t random_count) const {
  std::vector<Vector> out;
  const auto m = static_cast<Eigen::Index>(dim_);
  if (kind_ == Kind::Lp && std::isinf(p_)) {
    // Extreme points of the ℓ∞ ball: unimodular coordinates scaled by 1/w.
    if (dim_ <= 10) {
      const std::size_t count = std::size_t{1} << (dim_ - 1);
      for (std::size_t mask = 0; mask < count; ++mask) {
        Vector v(m);
        for (Eigen::Index j = 0; j < m; ++j)
          v(j) = ((j > 0 && (mask >> (j - 1)) & 1U) ? -1.0 : 1.0) / weights_[j];
        out.push_back(std::move(v));
      }
    }
    if (!real_) {
      for (std::size_t r = 0; r < 4 * dim_; ++r) {
        Vector v(m);
        for (Eigen::Index j = 0; j < m; ++j)
          v(j) = std::polar(1.0 / weights_[j], rng.uniform(0.0, 2.0 * M_PI));
        out.push_back(std::move(v));
      }
    }
  } else if (kind_ == Kind::Polytope) {
    for (Eigen::Index k = 0; k < vertices_.rows(); ++k) out.emplace_back(vertices_.row(k).adjoint());
  }
  for (std::size_t r = 0; r < random_count; ++r) out.emplace_back(rng.gaussian(m, 1, real_).col(0));
  return out;
}

std::string BaseNorm::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Euclidean: os << "euclidean(" << dim_ << ")"; break;
    case Kind::Polytope: os << "polytope(" << dim_ << ", " << vertices_.rows() << " vertices)"; break;
    case Kind::Lp:
      os << "l" << (std::isinf(p_) ? std::string("inf") : std::to_string(p_)) << "(" << dim_ << ")";
      break;
  }
  if (real_) os << "[real]";
  return os.str();
}

InjectiveResult injective_norm(const BaseNorm& base, const Matrix& c, const InjectiveOptions& options) {
  if (static_cast<std::size_t>(c.cols()) != base.dim())
    throw InputError("injective norm: element has " + std::to_string(c.cols()) +
                     " base coordinates, base norm has " + std::to_string(base.dim()));
  if (base.real() && !is_real(c)) throw InputError("real-mode base norm applied to complex coefficients");
  const Eigen::Index m = c.cols();
  InjectiveResult result;

  if (c.isZero(0.0)) {
    result.bounds = {0.0, 0.0};
    result.argmax = Vector::Zero(m);
    result.method = "zero";
    return result;
  }

  if (base.kind() == BaseNorm::Kind::Euclidean) {
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinV);
    const double s = svd.singularValues()(0);
    result.bounds = {s, s};
    result.argmax = svd.matrixV().col(0);
    result.method = "svd";
    return result;
  }

  if (base.kind() == BaseNorm::Kind::Polytope) {
    const Matrix& f = base.vertices();
    double best = -1.0;
    for (Eigen::Index k = 0; k < f.rows(); ++k) {
      const double v = (c * f.row(k).transpose()).norm();
      if (v > best) best = v, result.argmax = f.row(k).transpose();
    }
    result.bounds = {best, best};
    result.method = "vertex-enumeration";
    return result;
  }

  // ℓp: reduce to the unweighted q -> 2 norm of C D.
  const double p = base.p();
  RealVector dscale(m);
  for (Eigen::Index j = 0; j < m; ++j)
    dscale(j) = std::isinf(p) ? base.weights()[j] : std::pow(base.weights()[j], 1.0 / p);
  const Matrix cd = c * dscale.cast<Complex>().asDiagonal();
  const double q = conjugate_exponent(p);
  auto to_functional = [&](const Vector& g) -> Vector { return dscale.cast<Complex>().asDiagonal() * g; };

  if (std::isinf(p)) {
    Eigen::Index jmax = 0;
    const double v = cd.colwise().norm().maxCoeff(&jmax);
    Vector g = Vector::Zero(m);
    g(jmax) = 1.0;
    result.bounds = {v, v};
    result.argmax = to_functional(g);
    result.method = "max-column";
    return result;
  }

  Eigen::JacobiSVD<Matrix> svd(cd, Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  if (p == 2.0) {
    result.bounds = {smax, smax};
    result.argmax = to_functional(svd.matrixV().col(0));
    result.method = "svd";
    return result;
  }

  if (p == 1.0 && base.real() && static_cast<std::size_t>(m) <= kMaxEnumerationDim) {
    const std::size_t count = std::size_t{1} << (m - 1);
    double best = -1.0;
    Vector bestg(m);
    Vector g(m);
    for (std::size_t mask = 0; mask < count; ++mask) {
      for (Eigen::Index j = 0; j < m; ++j) g(j) = (j > 0 && ((mask >> (j - 1)) & 1U)) ? -1.0 : 1.0;
      const double v = (cd * g).norm();
      if (v > best) best = v, bestg = g;
    }
    result.bounds = {best, best};
    result.argmax = to_functional(bestg);
    result.method = "sign-enumeration";
    return result;
  }

  // Conditional-gradient ascent of the convex map g -> ‖C D g‖ over the ℓq ball;
  // monotone from every start.
  RealVector colnorms = cd.colwise().norm().transpose();
  const double holder = lp_of(colnorms, p);
  const double embed = q >= 2.0 ? std::pow(static_cast<double>(m), 0.5 - (std::isinf(q) ? 0.0 : 1.0 / q)) : 1.0;
  const double upper = std::min(holder, smax * embed);

  Rng rng(options.seed);
  std::vector<Vector> starts;
  {
    Vector v = svd.matrixV().col(0);
    starts.push_back(v / q_norm(v, q));
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    Vector e = Vector::Zero(m);
    e(j) = 1.0;
    starts.push_back(e);
  }
  for (int s = 0; s < options.starts; ++s) {
    Vector v = rng.gaussian(m, 1, base.real()).col(0);
    starts.push_back(v / q_norm(v, q));
  }
  double best = -1.0;
  Vector bestg;
  for (Vector g : starts) {
    double value = (cd * g).norm();
    for (int it = 0; it < options.iterations; ++it) {
      const Vector h = cd.adjoint() * (cd * g);
      if (h.isZero(0.0)) break;
      Vector next = duality_map(h, q);
      if (base.real()) next = next.real().cast<Complex>();
      const double nv = (cd * next).norm();
      if (nv <= value * (1.0 + 1e-15)) {
        if (nv > value) g = next, value = nv;
        break;
      }
      g = next;
      value = nv;
    }
    if (value > best) best = value, bestg = g;
  }
  result.bounds = {best, std::max(best, upper)};
  if (result.bounds.exact()) result.bounds.upper = best;
  result.argmax = to_functional(bestg);
  result.method = "phase-ascent";
  return result;
}

}  // namespace pllab
