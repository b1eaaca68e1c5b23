#include "pllab/tensor_lab.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pllab/errors.hpp"
#include "pllab/rng.hpp"

namespace pllab {

namespace {

Matrix diamond_coeffs(const Matrix& u, const Matrix& v, Pairing pairing) {
  return diamond(AmplifiedElement(u), AmplifiedElement(v), pairing).coeffs();
}

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

NormOptions norm_options(const SearchOptions& o) {
  NormOptions n;
  n.seed = derive_seed(o.seed, "norms");
  return n;
}

void check_shape(const Quantization& e, const Quantization& f, const Matrix& u) {
  if (static_cast<std::size_t>(u.cols()) != e.dim() * f.dim())
    throw InputError("dimension mismatch: element has " + std::to_string(u.cols()) + " base coordinates, E (x) F has " +
                     std::to_string(e.dim() * f.dim()));
  if (u.rows() == 0) throw InputError("element has empty H-dimension");
}

void check_reconstruction(const Matrix& rebuilt, const Matrix& u, const std::string& generator) {
  const double scale = std::max(1.0, u.norm());
  if (rebuilt.rows() != u.rows() || rebuilt.cols() != u.cols() || (rebuilt - u).norm() > 1e-10 * scale)
    throw SoundnessViolation("representation '" + generator + "' does not reconstruct its target");
}

/// d × (r·d) operator with block k (in pairing order) equal to P_k.
Matrix support_slice_operator(const std::vector<Matrix>& projectors, const std::vector<double>& mu, Eigen::Index d,
                              Pairing pairing) {
  const auto r = static_cast<Eigen::Index>(projectors.size());
  Matrix a = Matrix::Zero(d, r * d);
  for (Eigen::Index k = 0; k < r; ++k)
    for (Eigen::Index s = 0; s < d; ++s)
      a.col(static_cast<Eigen::Index>(pairing.index(k, s, r, d))) = mu[k] * projectors[k].col(s);
  return a;
}

struct SliceTerm {
  Vector x;  // vector on the "cheap" side (E for left slices, F for right slices)
  Matrix w;  // d × m of the other side
};

std::vector<SliceTerm> slices_from(const Decomposition& dec, Eigen::Index d, Eigen::Index m, bool x_is_left) {
  std::vector<SliceTerm> out;
  for (std::size_t k = 0; k < dec.left.size(); ++k) {
    const Vector& x = x_is_left ? dec.left[k] : dec.right[k];
    const Vector& g = x_is_left ? dec.right[k] : dec.left[k];
    if (x.isZero(0.0) || g.isZero(0.0)) continue;
    out.push_back({x, unflatten(g, d, m)});
  }
  return out;
}

Decomposition basis_slicing(const Matrix& z) {
  Decomposition dec;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Vector e = Vector::Zero(z.rows());
    e(i) = 1.0;
    dec.left.push_back(e);
    dec.right.push_back(z.row(i).transpose());
  }
  dec.method = "basis-slicing";
  return dec;
}

Decomposition svd_slicing(const Matrix& z) {
  Decomposition dec;
  Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()(k) <= 1e-15 * top) break;
    dec.left.push_back(svd.matrixU().col(k));
    dec.right.push_back(svd.singularValues()(k) * svd.matrixV().col(k).conjugate());
  }
  dec.method = "svd-slicing";
  return dec;
}

Matrix left_stack(const Matrix& u, Eigen::Index me, Eigen::Index mf) {
  Matrix z(me, u.rows() * mf);
  for (Eigen::Index i = 0; i < me; ++i) z.row(i) = flatten(u.middleCols(i * mf, mf)).transpose();
  return z;
}

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

}  // namespace

Matrix PLRepresentation::reconstruct(Pairing pairing) const {
  Matrix out;
  for (const PLTerm& t : terms) {
    const Matrix piece = t.a * diamond_coeffs(t.u, t.v, pairing);
    if (out.size() == 0) out = piece;
    else out += piece;
  }
  return out;
}

Matrix LRepresentation::reconstruct(Pairing pairing) const {
  Matrix sum;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Matrix piece = diamond_coeffs(u[k], v[k], pairing);
    if (sum.size() == 0) sum = piece;
    else sum += piece;
  }
  return a * sum;
}

double pl_value(const Quantization& e, const Quantization& f, const PLRepresentation& rep, const NormOptions& options) {
  double total = 0.0;
  for (const PLTerm& t : rep.terms) {
    const double na = spectral_norm(t.a);
    if (na == 0.0) continue;
    total += na * amp_norm(e, t.u, options).value * amp_norm(f, t.v, options).value;
  }
  return total;
}

double l_value(const Quantization& e, const Quantization& f, const LRepresentation& rep, const NormOptions& options) {
  double s = 0.0;
  for (std::size_t k = 0; k < rep.u.size(); ++k) {
    const double p = amp_norm(e, rep.u[k], options).value * amp_norm(f, rep.v[k], options).value;
    s += p * p;
  }
  return spectral_norm(rep.a) * std::sqrt(s);
}

bool supports_valid(const LRepresentation& rep, double tol) {
  if (rep.supports.size() != rep.u.size()) return false;
  for (std::size_t k = 0; k < rep.u.size(); ++k) {
    const double scale = std::max(1.0, rep.u[k].norm());
    if ((rep.supports[k] * rep.u[k] - rep.u[k]).norm() > tol * scale) return false;
    for (std::size_t j = k + 1; j < rep.u.size(); ++j)
      if ((rep.supports[k] * rep.supports[j]).norm() > tol) return false;
  }
  return true;
}

Matrix frame_operator(const Matrix& u, std::size_t me, std::size_t mf, Pairing pairing) {
  Matrix t(u.rows(), u.cols());
  for (std::size_t i = 0; i < me; ++i)
    for (std::size_t j = 0; j < mf; ++j)
      t.col(static_cast<Eigen::Index>(pairing.index(i, j, me, mf))) = u.col(static_cast<Eigen::Index>(i * mf + j));
  return t;
}

Matrix v_example(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix v = Matrix::Zero(m, m * m);
  for (Eigen::Index k = 0; k < m; ++k) v(k, k * m + k) = 1.0;
  return v;
}

std::vector<PLRepresentation> pl_candidates(const Quantization& e, const Quantization& f, const Matrix& u,
                                            const SearchOptions& options) {
  check_shape(e, f, u);
  const auto me = static_cast<Eigen::Index>(e.dim()), mf = static_cast<Eigen::Index>(f.dim());
  const Eigen::Index d = u.rows();
  const NormOptions nopts = norm_options(options);
  std::vector<PLRepresentation> out;

  {
    PLRepresentation rep;
    rep.generator = "elementary";
    for (Eigen::Index i = 0; i < me; ++i)
      for (Eigen::Index j = 0; j < mf; ++j) {
        const Matrix col = u.col(i * mf + j);
        if (col.isZero(0.0)) continue;
        Matrix x = Matrix::Zero(1, me), y = Matrix::Zero(1, mf);
        x(0, i) = 1.0;
        y(0, j) = 1.0;
        rep.terms.push_back({col, x, y});
      }
    out.push_back(std::move(rep));
  }

  auto from_left = [&](const Decomposition& dec, std::string name) {
    PLRepresentation rep;
    rep.generator = std::move(name);
    for (const SliceTerm& s : slices_from(dec, d, mf, true)) rep.terms.push_back({identity(d), s.x.transpose(), s.w});
    out.push_back(std::move(rep));
  };
  auto from_right = [&](const Decomposition& dec, std::string name) {
    PLRepresentation rep;
    rep.generator = std::move(name);
    for (const SliceTerm& s : slices_from(dec, d, me, false)) rep.terms.push_back({identity(d), s.w, s.x.transpose()});
    out.push_back(std::move(rep));
  };

  NormOptions dopts = nopts;
  dopts.seed = options.seed;
  from_left(decompose_left(u, e, f, dopts), "isometry-sum-left");
  from_right(decompose_right(u, e, f, dopts), "isometry-sum-right");
  const int restarts = std::max(0, options.budget / 100 - 1);
  for (int r = 1; r <= restarts; ++r) {
    NormOptions ro = dopts;
    ro.seed = derive_seed(options.seed, static_cast<std::uint64_t>(r));
    ro.irls_iterations = dopts.irls_iterations * 2;
    from_left(decompose_left(u, e, f, ro), "refined-left-" + std::to_string(r));
    from_right(decompose_right(u, e, f, ro), "refined-right-" + std::to_string(r));
  }

  {
    PLRepresentation rep;
    rep.generator = "frame";
    rep.terms.push_back({frame_operator(u, e.dim(), f.dim(), options.pairing), identity(me), identity(mf)});
    out.push_back(std::move(rep));
  }

  for (PLRepresentation& rep : out) {
    check_reconstruction(rep.terms.empty() ? Matrix(Matrix::Zero(d, u.cols())) : rep.reconstruct(options.pairing), u,
                         rep.generator);
    rep.value = pl_value(e, f, rep, nopts);
  }
  return out;
}

LRepresentation orthogonalize_representation(const Quantization& e, const Quantization& f,
                                             const PLRepresentation& rep, Pairing pairing,
                                             const NormOptions& options) {
  struct Group {
    Matrix a;
    Eigen::Index du = 0, dv = 0;
    std::vector<std::size_t> members;
    std::vector<Matrix> projectors;
  };
  std::vector<Group> groups;
  Eigen::Index du_max = 1, dv_max = 1, d_out = 0;
  std::vector<double> term_norm(rep.terms.size(), 0.0);
  for (std::size_t k = 0; k < rep.terms.size(); ++k) {
    const PLTerm& t = rep.terms[k];
    d_out = t.a.rows();
    term_norm[k] = amp_norm(e, t.u, options).value * amp_norm(f, t.v, options).value;
    if (term_norm[k] == 0.0 || t.a.isZero(0.0)) continue;
    const Matrix p = range_projector(t.u);
    du_max = std::max(du_max, t.u.rows());
    dv_max = std::max(dv_max, t.v.rows());
    bool placed = false;
    for (Group& g : groups) {
      if (g.du != t.u.rows() || g.dv != t.v.rows() || g.a.rows() != t.a.rows() || g.a.cols() != t.a.cols()) continue;
      if ((g.a - t.a).norm() > 1e-14 * std::max(1.0, t.a.norm())) continue;
      bool orthogonal = true;
      for (const Matrix& q : g.projectors) orthogonal = orthogonal && (q * p).norm() <= 1e-12;
      if (!orthogonal) continue;
      g.members.push_back(k);
      g.projectors.push_back(p);
      placed = true;
      break;
    }
    if (!placed) groups.push_back({t.a, t.u.rows(), t.v.rows(), {k}, {p}});
  }

  LRepresentation out;
  out.generator = "orthogonalized:" + rep.generator;
  const auto n = static_cast<Eigen::Index>(groups.size());
  if (n == 0) {
    out.a = Matrix::Zero(std::max<Eigen::Index>(d_out, 1), 1);
    out.value = 0.0;
    return out;
  }
  const Eigen::Index big = n * du_max;
  out.a = Matrix::Zero(d_out, big * dv_max);
  const Matrix id_v = identity(dv_max);
  for (Eigen::Index gi = 0; gi < n; ++gi) {
    const Group& g = groups[gi];
    const OperatorBlock ju = block_embedding(g.du, du_max, 0), jv = block_embedding(g.dv, dv_max, 0);
    const Matrix a_padded = g.a * diamond(ju, jv, pairing).entries().adjoint();
    const OperatorBlock s = block_embedding(du_max, big, gi * du_max);
    double sg = 0.0;
    for (std::size_t k : g.members) sg += term_norm[k] * term_norm[k];
    sg = std::sqrt(sg);
    const double na = spectral_norm(g.a);
    const double lambda = std::sqrt(na / sg);
    out.a += (1.0 / lambda) * a_padded * diamond(s.adjoint(), OperatorBlock(id_v), pairing).entries();
    const Matrix lift = s.entries() * ju.entries();
    for (std::size_t idx = 0; idx < g.members.size(); ++idx) {
      const PLTerm& t = rep.terms[g.members[idx]];
      out.u.push_back(lambda * lift * t.u);
      out.v.push_back(jv.entries() * t.v);
      out.supports.push_back(lift * g.projectors[idx] * lift.adjoint());
    }
  }
  out.value = l_value(e, f, out, options);
  return out;
}

std::vector<LRepresentation> l_candidates(const Quantization& e, const Quantization& f, const Matrix& u,
                                          const SearchOptions& options) {
  check_shape(e, f, u);
  const auto me = static_cast<Eigen::Index>(e.dim()), mf = static_cast<Eigen::Index>(f.dim());
  const Eigen::Index d = u.rows();
  const NormOptions nopts = norm_options(options);
  const Pairing pairing = options.pairing;
  std::vector<LRepresentation> out;

  {
    LRepresentation rep;
    rep.generator = "frame";
    rep.a = frame_operator(u, e.dim(), f.dim(), pairing);
    rep.u = {identity(me)};
    rep.v = {identity(mf)};
    rep.supports = {identity(me)};
    out.push_back(std::move(rep));
  }

  // Support slices: U = Σ_k x_k ⊗ W_k lifted to orthogonal coordinates of
  // H_r, with a assembled from range projectors of the W_k.
  auto add_slices = [&](const std::vector<SliceTerm>& slices, bool x_is_left, const std::string& name) {
    if (slices.empty()) return;
    const auto r = static_cast<Eigen::Index>(slices.size());
    std::vector<Matrix> projectors;
    std::vector<double> cost;
    for (const SliceTerm& s : slices) {
      projectors.push_back(range_projector(s.w));
      const double cx = underlying_norm(x_is_left ? e : f, s.x, nopts).value;
      const double cw = amp_norm(x_is_left ? f : e, s.w, nopts).value;
      cost.push_back(cx * cw);
    }
    const double cmax = *std::max_element(cost.begin(), cost.end());
    LRepresentation best;
    for (int balance = 0; balance < 2; ++balance) {
      std::vector<double> mu(r);
      for (Eigen::Index k = 0; k < r; ++k) mu[k] = balance == 0 ? 1.0 : std::sqrt(std::max(cost[k], 1e-300) / cmax);
      LRepresentation rep;
      rep.generator = name + (balance == 0 ? "" : "-balanced");
      rep.a = support_slice_operator(projectors, mu, d, pairing);
      for (Eigen::Index k = 0; k < r; ++k) {
        const SliceTerm& s = slices[k];
        if (x_is_left) {
          Matrix uk = Matrix::Zero(r, me);
          uk.row(k) = s.x.transpose() / mu[k];
          Matrix pk = Matrix::Zero(r, r);
          pk(k, k) = 1.0;
          rep.u.push_back(uk);
          rep.v.push_back(s.w);
          rep.supports.push_back(pk);
        } else {
          Matrix uk = Matrix::Zero(r * d, me);
          Matrix pk = Matrix::Zero(r * d, r * d);
          for (Eigen::Index t = 0; t < d; ++t) {
            const auto row = static_cast<Eigen::Index>(pairing.index(k, t, r, d));
            uk.row(row) = s.w.row(t) / mu[k];
            pk(row, row) = 1.0;
          }
          rep.u.push_back(uk);
          rep.v.push_back(s.x.transpose());
          rep.supports.push_back(pk);
        }
      }
      rep.value = l_value(e, f, rep, nopts);
      if (rep.value < best.value) best = std::move(rep);
    }
    out.push_back(std::move(best));
  };

  const Matrix zl = left_stack(u, me, mf), zr = right_stack(u, me, mf);
  NormOptions dopts = nopts;
  dopts.seed = options.seed;
  add_slices(slices_from(basis_slicing(zl), d, mf, true), true, "support-slice-left-basis");
  add_slices(slices_from(svd_slicing(zl), d, mf, true), true, "support-slice-left-svd");
  add_slices(slices_from(decompose_left(u, e, f, dopts), d, mf, true), true, "support-slice-left-search");
  {
    std::vector<SliceTerm> s;
    for (const SliceTerm& t : slices_from(basis_slicing(zr), d, me, true)) s.push_back(t);
    add_slices(s, false, "support-slice-right-basis");
    s.clear();
    for (const SliceTerm& t : slices_from(svd_slicing(zr), d, me, true)) s.push_back(t);
    add_slices(s, false, "support-slice-right-svd");
    Decomposition dr = decompose_right(u, e, f, dopts);
    add_slices(slices_from(dr, d, me, false), false, "support-slice-right-search");
  }

  SearchOptions pl_opts = options;
  pl_opts.budget = std::min(options.budget, 100);
  for (const PLRepresentation& rep : pl_candidates(e, f, u, pl_opts)) {
    LRepresentation o = orthogonalize_representation(e, f, rep, pairing, nopts);
    if (!o.u.empty()) out.push_back(std::move(o));
  }

  for (LRepresentation& rep : out) {
    check_reconstruction(rep.reconstruct(pairing), u, rep.generator);
    if (!supports_valid(rep)) throw SoundnessViolation("representation '" + rep.generator + "' has overlapping supports");
    rep.value = l_value(e, f, rep, nopts);
  }
  return out;
}

std::vector<Certificate> l_pool(const std::vector<Certificate>& certificates, int trials, std::uint64_t seed) {
  std::map<std::string, bool> passes;
  std::vector<Certificate> out;
  for (const Certificate& c : certificates) {
    if (!is_l_space(c.map.target)) continue;
    const std::string key = c.map.target.describe();
    auto it = passes.find(key);
    if (it == passes.end())
      it = passes.emplace(key, !semi_ruan_witness_search(c.map.target, trials, derive_seed(seed, key)).has_value()).first;
    if (it->second) out.push_back(c);
  }
  return out;
}

namespace {

void evaluate_lower(NormBracket& b, const std::vector<Certificate>& certs, const Matrix& u, const NormOptions& nopts) {
  for (const Certificate& c : certs) {
    const Matrix image = linearize(c, u);
    const double v = amp_norm(c.map.target, image, nopts).lower / c.bound;
    b.lower_candidates.push_back({c.id, v});
    if (v > b.lower || b.lower_witness.certificate.empty()) {
      b.lower = std::max(b.lower, v);
      b.lower_witness = {c.id, c.provenance, c.map.target.describe(), c.user_supplied, image, v};
    }
  }
}

void finalize(NormBracket& b, const SearchOptions& options, const std::string& what) {
  if (b.lower > b.upper + options.tolerance * std::max(1.0, b.upper))
    throw SoundnessViolation(what + " bracket inverted: certificate '" + b.lower_witness.certificate + "' gives " +
                             std::to_string(b.lower) + " above representation value " + std::to_string(b.upper));
  // Rounding-level inversions: report the smaller value on both ends.
  b.lower = std::min(b.lower, b.upper);
  b.gap = b.upper - b.lower > options.tolerance * std::max(1.0, b.upper);
}

std::vector<Certificate> certificate_pool(const Quantization& e, const Quantization& f, const Matrix& u,
                                          const SearchOptions& options, const std::vector<Certificate>& extra) {
  std::vector<Certificate> certs = builtin_certificates(e, f);
  certs.insert(certs.end(), extra.begin(), extra.end());
  certs.push_back(adapted_functional_pair(e, f, u, derive_seed(options.seed, "adapted-pair")));
  return certs;
}

std::size_t representation_dimension(const PLRepresentation& r) {
  std::size_t m = 0;
  for (const PLTerm& t : r.terms) m = std::max<std::size_t>(m, static_cast<std::size_t>(t.a.cols()));
  return m;
}

}  // namespace

NormBracket pl_norm_bracket(const Quantization& e, const Quantization& f, const Matrix& u,
                            const SearchOptions& options, const std::vector<Certificate>& extra_certificates) {
  check_shape(e, f, u);
  const NormOptions nopts = norm_options(options);
  NormBracket b;
  for (PLRepresentation& rep : pl_candidates(e, f, u, options)) {
    b.upper_candidates.push_back({rep.generator, rep.value});
    b.max_dimension = std::max(b.max_dimension, representation_dimension(rep));
    if (rep.value < b.upper) {
      b.upper = rep.value;
      b.pl_witness = std::move(rep);
    }
  }
  evaluate_lower(b, certificate_pool(e, f, u, options, extra_certificates), u, nopts);
  finalize(b, options, "pl");
  return b;
}

NormBracket l_norm_bracket(const Quantization& e, const Quantization& f, const Matrix& u,
                           const SearchOptions& options, const std::vector<Certificate>& extra_certificates) {
  check_shape(e, f, u);
  const NormOptions nopts = norm_options(options);
  NormBracket b;
  for (LRepresentation& rep : l_candidates(e, f, u, options)) {
    b.upper_candidates.push_back({rep.generator, rep.value});
    b.max_dimension = std::max(b.max_dimension, static_cast<std::size_t>(rep.a.cols()));
    if (rep.value < b.upper) {
      b.upper = rep.value;
      b.l_witness = std::move(rep);
    }
  }
  const int trials = std::max(50, options.budget);
  evaluate_lower(b, l_pool(certificate_pool(e, f, u, options, extra_certificates), trials, options.seed), u, nopts);
  finalize(b, options, "l");
  return b;
}

Comparison compare_pl_l(const Quantization& e, const Quantization& f, const Matrix& u, const SearchOptions& options) {
  Comparison c{pl_norm_bracket(e, f, u, options), l_norm_bracket(e, f, u, options), 0.0, true};
  const double tol = options.tolerance;
  c.consistent = c.pl.lower >= c.l.lower - tol * std::max(1.0, c.l.lower) &&
                 c.l.lower <= c.pl.upper + tol * std::max(1.0, c.pl.upper);
  for (const CandidateValue& v : c.l.lower_candidates)
    c.consistent = c.consistent && v.value <= c.pl.upper + tol * std::max(1.0, c.pl.upper);
  if (!c.consistent) throw SoundnessViolation("pl and l brackets are inconsistent");
  c.separation = c.l.upper > 0.0 ? c.pl.lower / c.l.upper : 1.0;
  return c;
}

}  // namespace pllab
