#include "pllab/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pllab/errors.hpp"
#include "pllab/rng.hpp"

namespace pllab {

namespace {

std::string format_p(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

Vector basis_vector(Eigen::Index n, Eigen::Index i) {
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

/// Z with row i = vec(U_i)^T, U_i = U[:, i*mF : (i+1)*mF].
Matrix left_stack(const Matrix& u, Eigen::Index me, Eigen::Index mf) {
  const Eigen::Index d = u.rows();
  Matrix z(me, d * mf);
  for (Eigen::Index i = 0; i < me; ++i) z.row(i) = flatten(u.middleCols(i * mf, mf)).transpose();
  return z;
}

/// Z' with row j = vec(U'_j)^T, U'_j = the d × mE matrix of columns i*mF + j.
Matrix right_stack(const Matrix& u, Eigen::Index me, Eigen::Index mf) {
  const Eigen::Index d = u.rows();
  Matrix z(mf, d * me);
  for (Eigen::Index j = 0; j < mf; ++j) {
    Matrix block(d, me);
    for (Eigen::Index i = 0; i < me; ++i) block.col(i) = u.col(i * mf + j);
    z.row(j) = flatten(block).transpose();
  }
  return z;
}

Matrix generator_matrix(const Quantization& q) {
  const auto& gens = q.generators();
  Matrix t(static_cast<Eigen::Index>(q.k() * q.l()), static_cast<Eigen::Index>(gens.size()));
  for (std::size_t j = 0; j < gens.size(); ++j) t.col(static_cast<Eigen::Index>(j)) = flatten(gens[j]);
  return t;
}

NormValue exact_value(double v, std::string method) { return {v, v, true, std::move(method)}; }

NormValue from_enclosure(const Enclosure& e, std::string method) {
  return {e.upper, e.lower, e.exact(), std::move(method)};
}

/// inf Σ ‖x_k‖ ‖W_k‖_inner over Z = Σ x_k vec(W_k)^T, W_k of shape d × mf.
Decomposition projective_search(const Matrix& z, const VectorNorm& left, const std::vector<Vector>& dictionary,
                                const std::optional<BaseNorm>& left_base, const Quantization& inner, Eigen::Index d,
                                Eigen::Index mf, const NormOptions& options) {
  const bool inner_hilbert = inner.kind() == Quantization::Kind::Hilbert;
  NormOptions inner_options = options;
  inner_options.seed = derive_seed(options.seed, "inner");
  inner_options.starts = std::min(options.starts, 4);
  inner_options.irls_iterations = std::max(10, options.irls_iterations / 3);
  inner_options.generation_rounds = std::min(options.generation_rounds, 2);
  const VectorNorm right = [&, inner_options](const Vector& g) {
    return inner_hilbert ? g.norm() : amp_norm(inner, unflatten(g, d, mf), inner_options).value;
  };
  DecompositionOptions dopts;
  dopts.irls_iterations = inner_hilbert ? 3 * options.irls_iterations : options.irls_iterations;
  dopts.right_euclidean = inner_hilbert;
  dopts.evaluation_stride = inner_hilbert ? 1 : 10;
  dopts.generation_rounds = inner_hilbert ? options.generation_rounds : std::min(options.generation_rounds, 3);
  std::optional<BaseNorm> dual;
  if (left_base) dual = left_base->dual();
  if (dual) {
    const InjectiveOptions iopts{options.starts, 200, derive_seed(options.seed, "oracle")};
    dopts.atom_oracle = [dual, iopts](const Matrix& lambda) {
      Matrix c = lambda.adjoint();
      if (dual->real()) c = c.real().cast<Complex>();
      return std::vector<Vector>{injective_norm(*dual, c, iopts).argmax};
    };
  }
  return search_decomposition(z, left, dictionary, right, dopts);
}

NormValue tensor_p_norm(const BaseNorm& base, const Quantization& inner, const Matrix& u,
                        const NormOptions& options) {
  const auto me = static_cast<Eigen::Index>(base.dim());
  const auto mf = static_cast<Eigen::Index>(inner.dim());
  const Eigen::Index d = u.rows();
  if (u.isZero(0.0)) return exact_value(0.0, "zero");

  if (base.is_l1()) {
    NormValue out{0.0, 0.0, true, "l1-closed-form"};
    for (Eigen::Index i = 0; i < me; ++i) {
      const double w = base.norm(basis_vector(me, i));
      const NormValue v = amp_norm(inner, u.middleCols(i * mf, mf), options);
      out.value += w * v.value;
      out.lower += w * v.lower;
      out.exact = out.exact && v.exact;
    }
    return out;
  }

  const Matrix z = left_stack(u, me, mf);
  const bool inner_hilbert = inner.kind() == Quantization::Kind::Hilbert;
  if (inner_hilbert && base.kind() == BaseNorm::Kind::Euclidean) return exact_value(nuclear_norm(z), "nuclear");

  Rng rng(derive_seed(options.seed, "tensor-p-dictionary"));
  NormOptions inner_options = options;
  inner_options.seed = derive_seed(options.seed, "inner");
  const VectorNorm left = [&](const Vector& x) { return base.norm(x); };
  const Decomposition dec = projective_search(z, left, base.dictionary_directions(rng, 2 * base.dim()), base, inner, d,
                                              mf, options);
  const double upper = dec.value;

  // Lower bounds: projective dominates any functional slice f ↦ ‖Σ f_i U_i‖_F.
  InjectiveOptions iopts{options.starts, 200, derive_seed(options.seed, "injective")};
  const InjectiveResult inj = injective_norm(base, z.transpose(), iopts);
  double lower = 0.0;
  std::string lower_method = "injective";
  if (inner_hilbert) {
    lower = inj.bounds.lower;
    const double kn = base.euclidean_lower_constant() * nuclear_norm(z);
    if (kn > lower) lower = kn, lower_method = "kappa-nuclear";
    const auto dual = base.dual();
    if (dual) {
      for (const Matrix& lam : dec.multiplier_path) {
        const double pairing = std::abs((lam.adjoint() * z).trace());
        Matrix c = lam.transpose();
        if (dual->real()) c = c.real().cast<Complex>();
        const double bound = injective_norm(*dual, c, iopts).bounds.upper;
        if (bound > 0.0 && pairing / bound > lower) lower = pairing / bound, lower_method = "dual-multiplier";
      }
    }
  } else {
    lower = amp_norm(inner, unflatten(z.transpose() * inj.argmax, d, mf), inner_options).lower;
    for (Eigen::Index i = 0; i < me; ++i) {
      const double c = base.dual_norm(basis_vector(me, i)).upper;
      if (c > 0.0) lower = std::max(lower, amp_norm(inner, u.middleCols(i * mf, mf), inner_options).lower / c);
    }
  }
  if (lower > upper) {
    if (lower - upper > 1e-9 * std::max(1.0, upper))
      throw SoundnessViolation("projective bracket inverted: lower " + std::to_string(lower) + " > upper " +
                               std::to_string(upper));
    lower = upper;
  }
  const Enclosure e{lower, upper};
  return {upper, lower, e.exact(), "decomposition/" + dec.method + "+" + lower_method};
}

}  // namespace

Quantization Quantization::min(BaseNorm base) {
  Quantization q;
  q.kind_ = Kind::Min;
  q.dim_ = base.dim();
  q.base_ = std::move(base);
  return q;
}

Quantization Quantization::max(BaseNorm base) {
  Quantization q;
  q.kind_ = Kind::Max;
  q.dim_ = base.dim();
  q.base_ = std::move(base);
  return q;
}

Quantization Quantization::hilbert(std::size_t dim) {
  if (dim == 0) throw InputError("hilbert quantization needs positive dimension");
  Quantization q;
  q.kind_ = Kind::Hilbert;
  q.dim_ = dim;
  return q;
}

Quantization Quantization::lp(double p, std::vector<double> measure, Quantization inner) {
  if (!(p >= 1.0)) throw InputError("p outside [1, inf]");
  if (measure.empty()) throw InputError("lp quantization needs at least one point");
  for (double w : measure)
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("lp point masses must be positive and finite");
  Quantization q;
  q.kind_ = Kind::Lp;
  q.dim_ = measure.size() * inner.dim();
  q.p_ = p;
  q.measure_ = std::move(measure);
  q.inner_ = std::make_shared<const Quantization>(std::move(inner));
  return q;
}

Quantization Quantization::concrete(std::size_t k, std::size_t l, std::vector<Matrix> generators) {
  if (k == 0 || l == 0) throw InputError("concrete quantization needs positive K and L dimensions");
  if (generators.empty()) throw InputError("concrete quantization needs at least one generator");
  for (const Matrix& t : generators)
    if (static_cast<std::size_t>(t.rows()) != l || static_cast<std::size_t>(t.cols()) != k)
      throw InputError("concrete generator has shape " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) +
                       ", expected " + std::to_string(l) + "x" + std::to_string(k));
  Quantization q;
  q.kind_ = Kind::Concrete;
  q.dim_ = generators.size();
  q.k_ = k;
  q.l_ = l;
  q.generators_ = std::move(generators);
  if (numerical_rank(generator_matrix(q)) < q.dim_) throw InputError("concrete generators are linearly dependent");
  return q;
}

Quantization Quantization::tensor_p(BaseNorm base, Quantization inner) {
  Quantization q;
  q.kind_ = Kind::TensorP;
  q.dim_ = base.dim() * inner.dim();
  q.base_ = std::move(base);
  q.inner_ = std::make_shared<const Quantization>(std::move(inner));
  return q;
}

const BaseNorm& Quantization::base() const {
  if (!base_) throw InputError(kind_name() + " quantization has no base norm");
  return *base_;
}

const Quantization& Quantization::inner() const {
  if (!inner_) throw InputError(kind_name() + " quantization has no inner quantization");
  return *inner_;
}

std::string Quantization::kind_name() const {
  switch (kind_) {
    case Kind::Min: return "min";
    case Kind::Max: return "max";
    case Kind::Hilbert: return "hilbert";
    case Kind::Lp: return "lp";
    case Kind::Concrete: return "concrete";
    case Kind::TensorP: return "tensor_p";
  }
  return "?";
}

std::string Quantization::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Min:
    case Kind::Max: os << kind_name() << "(" << base_->describe() << ")"; break;
    case Kind::Hilbert: os << "hilbert(" << dim_ << ")"; break;
    case Kind::Lp: os << "lp(p=" << format_p(p_) << ", " << measure_.size() << " points, " << inner_->describe() << ")"; break;
    case Kind::Concrete: os << "concrete(" << k_ << "->" << l_ << ", " << dim_ << " generators)"; break;
    case Kind::TensorP: os << "tensor_p(" << base_->describe() << ", " << inner_->describe() << ")"; break;
  }
  return os.str();
}

Matrix concrete_gamma(const Quantization& q, const Matrix& u) {
  const auto l = static_cast<Eigen::Index>(q.l()), k = static_cast<Eigen::Index>(q.k());
  const Eigen::Index d = u.rows();
  Matrix g = Matrix::Zero(d * l, k);
  for (Eigen::Index p = 0; p < d; ++p)
    for (std::size_t j = 0; j < q.generators().size(); ++j) {
      const Complex c = u(p, static_cast<Eigen::Index>(j));
      if (c != Complex(0.0)) g.middleRows(p * l, l) += c * q.generators()[j];
    }
  return g;
}

Matrix lp_block(const Quantization& q, const Matrix& u, std::size_t t) {
  const auto mf = static_cast<Eigen::Index>(q.inner().dim());
  return u.middleCols(static_cast<Eigen::Index>(t) * mf, mf);
}

NormValue amp_norm(const Quantization& q, const Matrix& u, const NormOptions& options) {
  if (static_cast<std::size_t>(u.cols()) != q.dim())
    throw InputError("dimension mismatch: element has " + std::to_string(u.cols()) + " base coordinates, " +
                     q.describe() + " has dimension " + std::to_string(q.dim()));
  if (q.real() && !is_real(u)) throw InputError("real-mode quantization applied to complex coefficients");
  if (u.rows() == 0) return exact_value(0.0, "empty");
  if (u.rows() == 1 && (q.kind() == Quantization::Kind::Min || q.kind() == Quantization::Kind::Max))
    return exact_value(q.base().norm(u.row(0).transpose()), "base");
  switch (q.kind()) {
    case Quantization::Kind::Hilbert:
      return exact_value(u.norm(), "frobenius");
    case Quantization::Kind::Min: {
      const InjectiveResult r = injective_norm(q.base(), u, {options.starts, 200, options.seed});
      return from_enclosure(r.bounds, "injective/" + r.method);
    }
    case Quantization::Kind::Max: {
      if (q.base().kind() == BaseNorm::Kind::Euclidean && !q.base().is_l1())
        return exact_value(nuclear_norm(u), "nuclear");
      NormValue v = tensor_p_norm(q.base(), Quantization::scalar(), u, options);
      return v;
    }
    case Quantization::Kind::TensorP:
      return tensor_p_norm(q.base(), q.inner(), u, options);
    case Quantization::Kind::Concrete:
      return exact_value(spectral_norm(concrete_gamma(q, u)), "gamma-operator-norm");
    case Quantization::Kind::Lp: {
      const double p = q.p();
      NormValue out{0.0, 0.0, true, "lp-fibres"};
      double su = 0.0, sl = 0.0;
      for (std::size_t t = 0; t < q.measure().size(); ++t) {
        const NormValue v = amp_norm(q.inner(), lp_block(q, u, t), options);
        out.exact = out.exact && v.exact;
        if (std::isinf(p)) {
          su = std::max(su, v.value);
          sl = std::max(sl, v.lower);
        } else {
          su += q.measure()[t] * std::pow(v.value, p);
          sl += q.measure()[t] * std::pow(v.lower, p);
        }
      }
      out.value = std::isinf(p) ? su : std::pow(su, 1.0 / p);
      out.lower = std::isinf(p) ? sl : std::pow(sl, 1.0 / p);
      if (out.exact) out.lower = out.value;
      return out;
    }
  }
  return {};
}

NormValue underlying_norm(const Quantization& q, const Vector& x, const NormOptions& options) {
  if (static_cast<std::size_t>(x.size()) != q.dim())
    throw InputError("dimension mismatch: vector of length " + std::to_string(x.size()) + " for " + q.describe());
  if (q.kind() == Quantization::Kind::Min || q.kind() == Quantization::Kind::Max)
    return exact_value(q.base().norm(x), "base-norm");
  return amp_norm(q, x.transpose(), options);
}

Enclosure dual_norm(const Quantization& q, const Vector& f) {
  if (static_cast<std::size_t>(f.size()) != q.dim())
    throw InputError("dimension mismatch: functional of length " + std::to_string(f.size()) + " for " + q.describe());
  switch (q.kind()) {
    case Quantization::Kind::Min:
    case Quantization::Kind::Max:
      return q.base().dual_norm(f);
    case Quantization::Kind::Hilbert:
      return {f.norm(), f.norm()};
    case Quantization::Kind::Lp: {
      const auto mf = static_cast<Eigen::Index>(q.inner().dim());
      const double p = q.p();
      const std::size_t n = q.measure().size();
      RealVector lo(n), hi(n);
      for (std::size_t t = 0; t < n; ++t) {
        const Enclosure e = dual_norm(q.inner(), f.segment(static_cast<Eigen::Index>(t) * mf, mf));
        lo(t) = e.lower;
        hi(t) = e.upper;
      }
      auto combine = [&](const RealVector& b) {
        if (std::isinf(p)) return b.sum();
        double best = 0.0, s = 0.0;
        if (p == 1.0) {
          for (std::size_t t = 0; t < n; ++t) best = std::max(best, b(t) / q.measure()[t]);
          return best;
        }
        const double qq = p / (p - 1.0);
        for (std::size_t t = 0; t < n; ++t) s += std::pow(b(t) * std::pow(q.measure()[t], -1.0 / p), qq);
        return std::pow(s, 1.0 / qq);
      };
      return {combine(lo), combine(hi)};
    }
    case Quantization::Kind::Concrete: {
      if (f.isZero(0.0)) return {0.0, 0.0};
      // f_j = Σ_pq Y_pq (T_j)_pq; the least-Frobenius Y is feasible, so its
      // trace norm bounds from above.
      const Matrix t = generator_matrix(q);
      const Matrix tc = t.conjugate();
      const Vector y = tc * (t.transpose() * tc).fullPivLu().solve(f);
      const auto l = static_cast<Eigen::Index>(q.l()), k = static_cast<Eigen::Index>(q.k());
      const Matrix ym = unflatten(y, l, k);
      const double upper = nuclear_norm(ym);
      Eigen::JacobiSVD<Matrix> svd(ym, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Matrix target = (svd.matrixU() * svd.matrixV().adjoint()).conjugate();
      double lower = 0.0;
      for (const Vector& x : {Vector(t.colPivHouseholderQr().solve(flatten(target))), Vector(f.conjugate())}) {
        Matrix a = Matrix::Zero(l, k);
        for (Eigen::Index j = 0; j < x.size(); ++j) a += x(j) * q.generators()[j];
        const double na = spectral_norm(a);
        if (na > 0.0) lower = std::max(lower, std::abs(f.dot(x.conjugate())) / na);
      }
      return {std::min(lower, upper), upper};
    }
    case Quantization::Kind::TensorP: {
      const BaseNorm& base = q.base();
      const auto me = static_cast<Eigen::Index>(base.dim());
      const auto mf = static_cast<Eigen::Index>(q.inner().dim());
      Vector b(me);
      for (Eigen::Index i = 0; i < me; ++i) b(i) = dual_norm(q.inner(), f.segment(i * mf, mf)).upper;
      double upper = 0.0;
      if (base.kind() == BaseNorm::Kind::Polytope) {
        for (Eigen::Index i = 0; i < me; ++i) upper += base.dual_norm(basis_vector(me, i)).upper * b(i).real();
      } else {
        upper = base.dual_norm(b).upper;
      }
      double lower = 0.0;
      Rng rng(derive_seed(0, "tensor-p-dual"));
      std::vector<Vector> xs = base.dictionary_directions(rng, 4);
      for (Eigen::Index i = 0; i < me; ++i) xs.push_back(basis_vector(me, i));
      for (const Vector& x : xs) {
        const double nx = base.norm(x);
        if (!(nx > 0.0)) continue;
        Vector g = Vector::Zero(mf);
        for (Eigen::Index i = 0; i < me; ++i) g += x(i) * f.segment(i * mf, mf);
        lower = std::max(lower, dual_norm(q.inner(), g).lower / nx);
      }
      return {std::min(lower, upper), upper};
    }
  }
  return {};
}

namespace {

/// Scales f to dual norm ≤ 1 and rotates so that f(x) is real nonnegative.
Vector normalized_functional(const Quantization& q, Vector f, const Vector& x) {
  const double c = dual_norm(q, f).upper;
  if (!(c > 0.0)) return Vector::Zero(f.size());
  const Complex fx = (f.transpose() * x)(0);
  return std::conj(phase(fx)) * f / c;
}

}  // namespace

Vector norming_functional(const Quantization& q, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != q.dim()) throw InputError("dimension mismatch in norming functional");
  if (x.isZero(0.0)) return Vector::Zero(x.size());
  switch (q.kind()) {
    case Quantization::Kind::Min:
    case Quantization::Kind::Max:
      return q.base().norming_functional(x);
    case Quantization::Kind::Hilbert:
      return x.conjugate() / x.norm();
    case Quantization::Kind::Lp: {
      const Quantization& in = q.inner();
      const auto mf = static_cast<Eigen::Index>(in.dim());
      const std::size_t n = q.measure().size();
      std::vector<double> a(n);
      for (std::size_t t = 0; t < n; ++t)
        a[t] = underlying_norm(in, x.segment(static_cast<Eigen::Index>(t) * mf, mf)).value;
      Vector f = Vector::Zero(x.size());
      const double p = q.p();
      if (std::isinf(p)) {
        const auto t = static_cast<Eigen::Index>(std::max_element(a.begin(), a.end()) - a.begin());
        f.segment(t * mf, mf) = norming_functional(in, x.segment(t * mf, mf));
        return f;
      }
      double total = 0.0;
      for (std::size_t t = 0; t < n; ++t) total += q.measure()[t] * std::pow(a[t], p);
      total = std::pow(total, 1.0 / p);
      for (std::size_t t = 0; t < n; ++t) {
        if (a[t] == 0.0) continue;
        const auto ti = static_cast<Eigen::Index>(t);
        const double scale = p == 1.0 ? q.measure()[t] : q.measure()[t] * std::pow(a[t] / total, p - 1.0);
        f.segment(ti * mf, mf) = scale * norming_functional(in, x.segment(ti * mf, mf));
      }
      return f;
    }
    case Quantization::Kind::Concrete: {
      Matrix a = Matrix::Zero(static_cast<Eigen::Index>(q.l()), static_cast<Eigen::Index>(q.k()));
      for (Eigen::Index j = 0; j < x.size(); ++j) a += x(j) * q.generators()[j];
      Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Vector u1 = svd.matrixU().col(0), v1 = svd.matrixV().col(0);
      Vector f(x.size());
      for (Eigen::Index j = 0; j < x.size(); ++j) f(j) = u1.dot(q.generators()[j] * v1);
      return f;
    }
    case Quantization::Kind::TensorP: {
      const BaseNorm& base = q.base();
      const Quantization& in = q.inner();
      const auto me = static_cast<Eigen::Index>(base.dim());
      const auto mf = static_cast<Eigen::Index>(in.dim());
      Matrix xm(me, mf);
      for (Eigen::Index i = 0; i < me; ++i) xm.row(i) = x.segment(i * mf, mf).transpose();
      Eigen::JacobiSVD<Matrix> svd(xm, Eigen::ComputeThinU | Eigen::ComputeThinV);
      Vector best = Vector::Zero(x.size());
      double best_value = -1.0;
      for (Eigen::Index r = 0; r < svd.singularValues().size(); ++r) {
        const Vector a = base.norming_functional(svd.matrixU().col(r));
        const Vector b = norming_functional(in, Vector(svd.matrixV().col(r).conjugate()));
        Vector f(x.size());
        for (Eigen::Index i = 0; i < me; ++i) f.segment(i * mf, mf) = a(i) * b;
        f = normalized_functional(q, f, x);
        const double v = (f.transpose() * x)(0).real();
        if (v > best_value) best_value = v, best = f;
      }
      return best;
    }
  }
  return Vector::Zero(x.size());
}

std::optional<BaseNorm> as_base_norm(const Quantization& q) {
  switch (q.kind()) {
    case Quantization::Kind::Min:
    case Quantization::Kind::Max:
      return q.base();
    case Quantization::Kind::Hilbert:
      return BaseNorm::euclidean(q.dim());
    case Quantization::Kind::Lp:
      if (q.inner().dim() == 1) {
        const double c = underlying_norm(q.inner(), Vector::Ones(1)).value;
        std::vector<double> w = q.measure();
        if (std::isinf(q.p())) {
          for (double& wi : w) wi = c;
        } else {
          for (double& wi : w) wi *= std::pow(c, q.p());
        }
        return BaseNorm::lp(q.p(), std::move(w), q.inner().real());
      }
      break;
    default:
      break;
  }
  if (q.dim() == 1) {
    const NormValue v = underlying_norm(q, Vector::Ones(1));
    if (v.exact && v.value > 0.0) return BaseNorm::lp(1.0, {v.value});
  }
  return std::nullopt;
}

std::vector<Vector> dictionary_directions(const Quantization& q, Rng& rng, std::size_t random_count) {
  if (const auto b = as_base_norm(q)) return b->dictionary_directions(rng, random_count);
  std::vector<Vector> out;
  const auto m = static_cast<Eigen::Index>(q.dim());
  if (q.kind() == Quantization::Kind::Lp) {
    const auto mf = static_cast<Eigen::Index>(q.inner().dim());
    for (std::size_t t = 0; t < q.measure().size(); ++t)
      for (const Vector& v : dictionary_directions(q.inner(), rng, 1)) {
        Vector e = Vector::Zero(m);
        e.segment(static_cast<Eigen::Index>(t) * mf, mf) = v;
        out.push_back(std::move(e));
      }
  }
  for (std::size_t r = 0; r < random_count; ++r) out.emplace_back(rng.gaussian(m, 1, q.real()).col(0));
  return out;
}

Decomposition decompose_left(const Matrix& u, const Quantization& e, const Quantization& f,
                             const NormOptions& options) {
  const auto me = static_cast<Eigen::Index>(e.dim()), mf = static_cast<Eigen::Index>(f.dim());
  if (u.cols() != me * mf) throw InputError("dimension mismatch: element is not over E (x) F");
  // Same dictionary stream as the TENSOR_P evaluation, so that both searches agree.
  Rng rng(derive_seed(options.seed, "tensor-p-dictionary"));
  NormOptions inner = options;
  inner.seed = derive_seed(options.seed, "inner");
  const VectorNorm left = [&](const Vector& x) { return underlying_norm(e, x, inner).value; };
  return projective_search(left_stack(u, me, mf), left, dictionary_directions(e, rng, 2 * e.dim()), as_base_norm(e), f,
                           u.rows(), mf, options);
}

Decomposition decompose_right(const Matrix& u, const Quantization& e, const Quantization& f,
                              const NormOptions& options) {
  const auto me = static_cast<Eigen::Index>(e.dim()), mf = static_cast<Eigen::Index>(f.dim());
  if (u.cols() != me * mf) throw InputError("dimension mismatch: element is not over E (x) F");
  Rng rng(derive_seed(options.seed, "decompose-right"));
  NormOptions inner = options;
  inner.seed = derive_seed(options.seed, "inner");
  const VectorNorm left = [&](const Vector& y) { return underlying_norm(f, y, inner).value; };
  Decomposition dec = projective_search(right_stack(u, me, mf), left, dictionary_directions(f, rng, 2 * f.dim()),
                                        as_base_norm(f), e, u.rows(), me, options);
  std::swap(dec.left, dec.right);
  return dec;
}

std::optional<SemiRuanWitness> semi_ruan_witness_search(const Quantization& q, int trials, std::uint64_t seed,
                                                        double tolerance) {
  if (trials < 1) throw InputError("semi-Ruan search needs at least one trial");
  const auto m = static_cast<Eigen::Index>(q.dim());
  const bool real = q.real();
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng(seed).child(static_cast<std::uint64_t>(trial));
    const int d = rng.uniform_int(2, 5);
    // Disjoint coordinate blocks of H_d.
    std::vector<int> side(d);
    side[0] = 0;
    side[1] = 1;
    for (int r = 2; r < d; ++r) side[r] = rng.uniform_int(0, 1);
    std::shuffle(side.begin(), side.end(), rng.engine());
    const int shape = rng.uniform_int(0, 2);
    auto sample = [&](int which) {
      Matrix x;
      if (shape == 0) {
        x = rng.gaussian(d, m, real);
      } else {
        Vector xi = rng.gaussian(d, 1, real).col(0);
        Vector b = shape == 1 ? Vector(rng.gaussian(m, 1, real).col(0)) : basis_vector(m, rng.uniform_int(0, static_cast<int>(m) - 1));
        x = xi * b.transpose();
      }
      for (int r = 0; r < d; ++r)
        if (side[r] != which) x.row(r).setZero();
      const double n = x.norm();
      return n > 0.0 ? Matrix(x / n) : x;
    };
    const Matrix u = sample(0), v = sample(1);
    NormOptions opts;
    opts.seed = derive_seed(seed, static_cast<std::uint64_t>(trial));
    const NormValue nu = amp_norm(q, u, opts), nv = amp_norm(q, v, opts), nuv = amp_norm(q, u + v, opts);
    const double lhs = nuv.lower * nuv.lower;
    const double rhs = nu.value * nu.value + nv.value * nv.value;
    if (lhs > rhs + tolerance * std::max(1.0, rhs)) return SemiRuanWitness{u, v, lhs, rhs, trial};
  }
  return std::nullopt;
}

bool is_l_space(const Quantization& q) {
  if (q.dim() == 1) return true;
  switch (q.kind()) {
    case Quantization::Kind::Min:
    case Quantization::Kind::Hilbert:
    case Quantization::Kind::Concrete:
      return true;
    case Quantization::Kind::Lp:
      return q.p() >= 2.0 && is_l_space(q.inner());
    default:
      return false;
  }
}

}  // namespace pllab
