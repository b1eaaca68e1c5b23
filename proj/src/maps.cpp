#include "pllab/maps.hpp"

#include <algorithm>
#include <cmath>

#include "pllab/errors.hpp"
#include "pllab/rng.hpp"

namespace pllab {

Matrix amplify_linear(const LinearMap& phi, const Matrix& u) {
  if (u.cols() != phi.matrix.rows())
    throw InputError("dimension mismatch: map expects " + std::to_string(phi.matrix.rows()) + " base coordinates, got " +
                     std::to_string(u.cols()));
  return u * phi.matrix;
}

Matrix amplify_bilinear(const BilinearMap& r, const Matrix& u, const Matrix& v, Pairing pairing) {
  if (static_cast<std::size_t>(u.cols()) != r.left.dim() || static_cast<std::size_t>(v.cols()) != r.right.dim())
    throw InputError("dimension mismatch: bilinear map sources do not match the inputs");
  return diamond(AmplifiedElement(u), AmplifiedElement(v), pairing).coeffs() * r.table;
}

namespace {

constexpr int kEvaluationsPerStart = 250;
constexpr int kAlternatingIterations = 50;
constexpr Eigen::Index kWarmStarts = 8;

Matrix random_like(Rng& rng, Eigen::Index rows, Eigen::Index cols, bool real) {
  return rng.gaussian(rows, cols, real);
}

/// (1+1)-ES with the one-fifth success rule on a scale-invariant ratio.
template <class Ratio>
void evolve(Matrix& x, double& best, const Ratio& ratio, Rng& rng, bool real, int evaluations) {
  double sigma = 0.3;
  for (int e = 0; e < evaluations; ++e) {
    Matrix step = random_like(rng, x.rows(), x.cols(), real);
    step *= sigma * x.norm() / std::max(step.norm(), 1e-300);
    Matrix cand = x + step;
    const double v = ratio(cand);
    if (v > best) {
      best = v;
      x = cand / cand.norm();
      sigma *= 1.5;
    } else {
      sigma *= std::pow(1.5, -0.25);
    }
    if (sigma < 1e-10) sigma = 0.3;
  }
}

/// Inner norm settings for ratio sampling: denominators are upper values and
/// numerators lower values, so loose settings only lower the ratio.
NormOptions search_norm_options(std::uint64_t seed) {
  NormOptions o;
  o.starts = 2;
  o.irls_iterations = 20;
  o.generation_rounds = 3;
  o.seed = derive_seed(seed, "norm");
  return o;
}

bool reached(const LbNormEstimate& out) {
  return out.closed_form && out.lower >= *out.closed_form * (1.0 - 1e-12);
}

bool all_hilbert(std::initializer_list<const Quantization*> qs) {
  for (const Quantization* q : qs)
    if (q->kind() != Quantization::Kind::Hilbert) return false;
  return true;
}

/// Matrix of the linear map X ↦ vec(op(X)) on d × m inputs.
template <class Op>
Matrix operator_matrix(const Op& op, Eigen::Index d, Eigen::Index m) {
  Matrix cols;
  for (Eigen::Index k = 0; k < d * m; ++k) {
    Vector e = Vector::Zero(d * m);
    e(k) = 1.0;
    const Vector y = flatten(op(unflatten(e, d, m)));
    if (cols.size() == 0) cols.resize(y.size(), d * m);
    cols.col(k) = y;
  }
  return cols;
}

Vector basis_vector(Eigen::Index n, Eigen::Index i) {
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

/// Rank-one table f ⊗ g, if `table` has that form with one target coordinate.
std::optional<std::pair<Vector, Vector>> rank_one_table(const Matrix& table, Eigen::Index me, Eigen::Index mf) {
  if (table.cols() != 1) return std::nullopt;
  Matrix t(me, mf);
  for (Eigen::Index i = 0; i < me; ++i)
    for (Eigen::Index j = 0; j < mf; ++j) t(i, j) = table(i * mf + j, 0);
  if (t.isZero(0.0)) return std::pair{Vector(Vector::Zero(me)), Vector(Vector::Zero(mf))};
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector s = svd.singularValues();
  if (s.size() > 1 && s(1) > 1e-12 * s(0)) return std::nullopt;
  return std::pair{Vector(s(0) * svd.matrixU().col(0)), Vector(svd.matrixV().col(0).conjugate())};
}

}  // namespace

LbNormEstimate lb_norm_lower(const LinearMap& phi, int budget, std::uint64_t seed) {
  if (budget < 1) throw InputError("budget must be at least 1");
  const Quantization& src = phi.source;
  const Quantization& tgt = phi.target;
  if (static_cast<std::size_t>(phi.matrix.rows()) != src.dim() || static_cast<std::size_t>(phi.matrix.cols()) != tgt.dim())
    throw InputError("linear map shape does not match its source and target");
  const auto m = static_cast<Eigen::Index>(src.dim());
  const bool real = src.real();

  LbNormEstimate out;
  out.method = "es";
  if (phi.matrix.cols() == 1 && tgt.dim() == 1) {
    const Enclosure e = dual_norm(src, phi.matrix.col(0));
    if (e.exact()) out.closed_form = e.upper * underlying_norm(tgt, Vector::Ones(1)).value;
  } else if (all_hilbert({&src, &tgt})) {
    out.closed_form = spectral_norm(phi.matrix);
  }
  out.exact = out.closed_form.has_value();

  const NormOptions nopts = search_norm_options(seed);
  int evals = 0;
  auto ratio = [&](const Matrix& u) {
    ++evals;
    const double den = amp_norm(src, u, nopts).value;
    if (!(den > 0.0)) return 0.0;
    return amp_norm(tgt, amplify_linear(phi, u), nopts).lower / den;
  };

  // Warm starts: norming vectors of the column functionals, through the dual base norm.
  if (const auto base = as_base_norm(src)) {
    if (const auto dual = base->dual()) {
      const Eigen::Index k = std::min<Eigen::Index>(phi.matrix.cols(), kWarmStarts);
      for (Eigen::Index j = 0; j < k && evals < budget / 2; ++j) {
        const Vector col = phi.matrix.col(j);
        if (col.isZero(0.0)) continue;
        const Matrix x = dual->norming_functional(col).transpose();
        const double v = ratio(x);
        if (v > out.lower) out.lower = v, out.lower_d1 = std::max(out.lower_d1, v), out.witness_u = x;
      }
    }
  }

  const int starts = std::max(1, (budget - evals) / kEvaluationsPerStart);
  const int per_start = std::max(1, (budget - evals) / starts);
  for (int s = 0; s < starts && !reached(out); ++s) {
    Rng rng = Rng(seed).child(static_cast<std::uint64_t>(s));
    const Eigen::Index d = 1 + (s % 3);
    const int before = evals;
    Matrix x = random_like(rng, d, m, real);
    double best = ratio(x);
    for (Eigen::Index j = 0; j < m && evals - before < per_start; ++j) {
      Matrix b = Matrix::Zero(d, m);
      b(0, j) = 1.0;
      const double v = ratio(b);
      if (v > best) best = v, x = b;
    }
    x /= x.norm();
    evolve(x, best, ratio, rng, real, per_start - (evals - before));
    if (best > out.lower) out.lower = best, out.witness_u = x;
    if (d == 1) out.lower_d1 = std::max(out.lower_d1, best);
  }
  out.evaluations = evals;
  return out;
}

LbNormEstimate lb_norm_lower(const BilinearMap& r, int budget, std::uint64_t seed, Pairing pairing) {
  if (budget < 1) throw InputError("budget must be at least 1");
  const auto me = static_cast<Eigen::Index>(r.left.dim()), mf = static_cast<Eigen::Index>(r.right.dim());
  if (r.table.rows() != me * mf || static_cast<std::size_t>(r.table.cols()) != r.target.dim())
    throw InputError("bilinear table shape does not match its sources and target");

  LbNormEstimate out;
  out.method = "es-alternating";
  if (const auto fg = rank_one_table(r.table, me, mf); fg && r.target.dim() == 1) {
    const Enclosure a = dual_norm(r.left, fg->first), b = dual_norm(r.right, fg->second);
    if (a.exact() && b.exact()) out.closed_form = a.upper * b.upper * underlying_norm(r.target, Vector::Ones(1)).value;
  }
  out.exact = out.closed_form.has_value();

  const NormOptions nopts = search_norm_options(seed);
  int evals = 0;
  auto ratio = [&](const Matrix& u, const Matrix& v) {
    ++evals;
    const double den = amp_norm(r.left, u, nopts).value * amp_norm(r.right, v, nopts).value;
    if (!(den > 0.0)) return 0.0;
    return amp_norm(r.target, amplify_bilinear(r, u, v, pairing), nopts).lower / den;
  };
  const bool hilbert = all_hilbert({&r.left, &r.right, &r.target});
  const bool real_u = r.left.real(), real_v = r.right.real();

  const int starts = std::max(1, budget / kEvaluationsPerStart);
  const int per_start = std::max(2, budget / starts);
  for (int s = 0; s < starts && !reached(out); ++s) {
    Rng rng = Rng(seed).child(static_cast<std::uint64_t>(s));
    const Eigen::Index d = 1 + (s % 3);
    Matrix u = random_like(rng, d, me, real_u), v = random_like(rng, d, mf, real_v);
    u /= u.norm();
    v /= v.norm();
    double best = ratio(u, v);
    const int rounds = std::max(1, std::min(kAlternatingIterations, per_start / 20));
    const int chunk = std::max(1, per_start / (2 * rounds));
    for (int it = 0; it < rounds; ++it) {
      if (hilbert) {
        // Each half-step is an operator-norm problem solved by SVD.
        const Matrix lu = operator_matrix([&](const Matrix& x) { return amplify_bilinear(r, x, v, pairing); }, d, me);
        Eigen::JacobiSVD<Matrix> su(lu, Eigen::ComputeThinV);
        u = unflatten(su.matrixV().col(0), d, me);
        const Matrix lv = operator_matrix([&](const Matrix& y) { return amplify_bilinear(r, u, y, pairing); }, d, mf);
        Eigen::JacobiSVD<Matrix> sv(lv, Eigen::ComputeThinV);
        v = unflatten(sv.matrixV().col(0), d, mf);
        best = std::max(best, ratio(u, v));
      } else {
        evolve(u, best, [&](const Matrix& x) { return ratio(x, v); }, rng, real_u, chunk);
        evolve(v, best, [&](const Matrix& y) { return ratio(u, y); }, rng, real_v, chunk);
      }
    }
    if (best > out.lower) out.lower = best, out.witness_u = u, out.witness_v = v;
    if (d == 1) out.lower_d1 = std::max(out.lower_d1, best);
  }
  out.evaluations = evals;
  return out;
}

Certificate user_certificate(std::string id, std::string provenance, BilinearMap map, double bound) {
  if (!(bound > 0.0)) throw InputError("certificate bound must be positive");
  if (static_cast<std::size_t>(map.table.cols()) != map.target.dim() ||
      static_cast<std::size_t>(map.table.rows()) != map.left.dim() * map.right.dim())
    throw InputError("certificate table shape does not match its spaces");
  return Certificate{std::move(id), "user: " + std::move(provenance), std::move(map), bound, true};
}

Matrix linearize(const Certificate& c, const Matrix& u) {
  if (u.cols() != c.map.table.rows())
    throw InputError("dimension mismatch: certificate expects " + std::to_string(c.map.table.rows()) +
                     " base coordinates");
  return u * c.map.table;
}

double certificate_value(const Certificate& c, const Matrix& u, const NormOptions& options) {
  return amp_norm(c.map.target, linearize(c, u), options).lower / c.bound;
}

namespace {

Certificate functional_pair(const Quantization& e, const Quantization& f, Vector a, Vector b, std::string id,
                            std::string provenance) {
  const double na = dual_norm(e, a).upper, nb = dual_norm(f, b).upper;
  if (na > 0.0) a /= na;
  if (nb > 0.0) b /= nb;
  const auto me = static_cast<Eigen::Index>(e.dim()), mf = static_cast<Eigen::Index>(f.dim());
  Matrix table(me * mf, 1);
  for (Eigen::Index i = 0; i < me; ++i)
    for (Eigen::Index j = 0; j < mf; ++j) table(i * mf + j, 0) = a(i) * b(j);
  return Certificate{std::move(id), std::move(provenance), BilinearMap{table, e, f, Quantization::scalar()}, 1.0, false};
}

/// Best functional on `q` for maximizing ‖C f‖_2: exact or ascended injective
/// argmax when the underlying norm is classical.
Vector best_functional(const Quantization& q, const Matrix& c, std::uint64_t seed) {
  if (const auto base = as_base_norm(q)) {
    InjectiveResult r = injective_norm(*base, base->real() ? Matrix(c.real().cast<Complex>()) : c, {4, 100, seed});
    return r.argmax;
  }
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinV);
  return svd.matrixV().col(0);
}

}  // namespace

Certificate adapted_functional_pair(const Quantization& e, const Quantization& f, const Matrix& u,
                                    std::uint64_t seed, int rounds) {
  const auto me = static_cast<Eigen::Index>(e.dim()), mf = static_cast<Eigen::Index>(f.dim());
  const Eigen::Index d = u.rows();
  auto normalized = [](const Quantization& q, Vector x) {
    const double n = dual_norm(q, x).upper;
    return n > 0.0 ? Vector(x / n) : x;
  };
  auto value = [&](const Vector& a, const Vector& b) {
    Vector r = Vector::Zero(d);
    for (Eigen::Index i = 0; i < me; ++i)
      for (Eigen::Index j = 0; j < mf; ++j) r += a(i) * b(j) * u.col(i * mf + j);
    return r.norm();
  };
  // Start from the dominant F-direction of U.
  Matrix uf(d * me, mf);
  for (Eigen::Index i = 0; i < me; ++i) uf.middleRows(i * d, d) = u.middleCols(i * mf, mf);
  Vector b = normalized(f, best_functional(f, uf, derive_seed(seed, "g0")));
  Vector a = Vector::Zero(me);
  double best = -1.0;
  Vector best_a = a, best_b = b;
  for (int it = 0; it < rounds; ++it) {
    Matrix cg = Matrix::Zero(d, me);
    for (Eigen::Index i = 0; i < me; ++i)
      for (Eigen::Index j = 0; j < mf; ++j) cg.col(i) += b(j) * u.col(i * mf + j);
    a = normalized(e, best_functional(e, cg, derive_seed(seed, 2 * it + 1)));
    Matrix ca = Matrix::Zero(d, mf);
    for (Eigen::Index i = 0; i < me; ++i)
      for (Eigen::Index j = 0; j < mf; ++j) ca.col(j) += a(i) * u.col(i * mf + j);
    b = normalized(f, best_functional(f, ca, derive_seed(seed, 2 * it + 2)));
    const double v = value(a, b);
    if (v <= best * (1.0 + 1e-13)) {
      if (v > best) best = v, best_a = a, best_b = b;
      break;
    }
    best = v, best_a = a, best_b = b;
  }
  return functional_pair(e, f, best_a, best_b, "functional-pair:adapted",
                         "bilinear f x g of norming functionals, lb-norm = |f||g|");
}

std::vector<Certificate> builtin_certificates(const Quantization& e, const Quantization& f) {
  using Kind = Quantization::Kind;
  std::vector<Certificate> out;
  const auto me = static_cast<Eigen::Index>(e.dim()), mf = static_cast<Eigen::Index>(f.dim());
  const std::string pair_prov = "bilinear f x g of bounded functionals, lb-norm = |f||g|";

  for (Eigen::Index i = 0; i < me; ++i)
    for (Eigen::Index j = 0; j < mf; ++j)
      out.push_back(functional_pair(e, f, basis_vector(me, i), basis_vector(mf, j),
                                    "functional-pair:" + std::to_string(i) + "," + std::to_string(j), pair_prov));

  if (e.kind() == Kind::Hilbert && f.kind() == Kind::Hilbert && me == mf) {
    Matrix table = Matrix::Zero(me * mf, me);
    for (Eigen::Index k = 0; k < me; ++k) table(k * mf + k, k) = 1.0;
    out.push_back(Certificate{"coordinatewise-M", "coordinatewise multiplication l2 x l2 -> l1 is L-contractive",
                              BilinearMap{table, e, f, Quantization::lp(1.0, std::vector<double>(me, 1.0), Quantization::scalar())},
                              1.0, false});
    out.push_back(Certificate{"coordinatewise-N", "coordinatewise multiplication l2 x l2 -> l2 (Hilbert L-norm)",
                              BilinearMap{table, e, f, Quantization::hilbert(static_cast<std::size_t>(me))}, 1.0, false});
  }

  if (e.kind() == Kind::Max) {
    out.push_back(Certificate{"theta-max-tensor-p", "canonical bilinear theta: E_max x F -> E (x)_p F is L-contractive",
                              BilinearMap{Matrix::Identity(me * mf, me * mf), e, f, Quantization::tensor_p(e.base(), f)},
                              1.0, false});
  }

  if (e.kind() == Kind::Lp && e.inner().dim() == 1) {
    const double c = underlying_norm(e.inner(), Vector::Ones(1)).value;
    std::vector<double> mu = e.measure();
    if (!std::isinf(e.p()))
      for (double& w : mu) w *= std::pow(c, e.p());
    const std::string id = e.p() == 1.0 ? "grothendieck-lp-embedding" : "lp-embedding";
    Quantization target = Quantization::lp(e.p(), mu, f);
    Matrix table = Matrix::Identity(me * mf, me * mf);
    if (std::isinf(e.p()) && c != 1.0) table *= c;
    out.push_back(Certificate{id, "R: L_p(X) x F -> L_p(X, F), (z, x) -> z(.)x is L-contractive",
                              BilinearMap{table, e, f, target}, 1.0, false});
  }
  if (f.kind() == Kind::Lp && f.inner().dim() == 1) {
    const double c = underlying_norm(f.inner(), Vector::Ones(1)).value;
    std::vector<double> nu = f.measure();
    if (!std::isinf(f.p()))
      for (double& w : nu) w *= std::pow(c, f.p());
    Quantization target = Quantization::lp(f.p(), nu, e);
    Matrix table = Matrix::Zero(me * mf, me * mf);
    for (Eigen::Index i = 0; i < me; ++i)
      for (Eigen::Index t = 0; t < mf; ++t) table(i * mf + t, t * me + i) = std::isinf(f.p()) ? c : 1.0;
    const std::string id = f.p() == 1.0 ? "grothendieck-lp-embedding-right" : "lp-embedding-right";
    out.push_back(Certificate{id, "E x L_p(Y) -> L_p(Y, E), (x, z) -> z(.)x is L-contractive (flip of the embedding)",
                              BilinearMap{table, e, f, target}, 1.0, false});
  }

  if (e.kind() == Kind::Min && f.kind() == Kind::Min && e.base().kind() == BaseNorm::Kind::Euclidean &&
      f.base().kind() == BaseNorm::Kind::Euclidean) {
    out.push_back(Certificate{"identity-min-hilbert", "u <> v has operator norm |u||v| for minimal Hilbert factors",
                              BilinearMap{Matrix::Identity(me * mf, me * mf), e, f,
                                          Quantization::min(BaseNorm::euclidean(static_cast<std::size_t>(me * mf)))},
                              1.0, false});
  }
  return out;
}

}  // namespace pllab
