#include "pllab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "pllab/errors.hpp"
#include "pllab/maps.hpp"
#include "pllab/tensor_lab.hpp"

namespace pllab {

namespace {

using Kind = Quantization::Kind;

const std::vector<Kind> kAllKinds{Kind::Min, Kind::Max, Kind::Hilbert, Kind::Lp, Kind::Concrete, Kind::TensorP};

std::string kind_label(Kind k) {
  switch (k) {
    case Kind::Min: return "min";
    case Kind::Max: return "max";
    case Kind::Hilbert: return "hilbert";
    case Kind::Lp: return "lp";
    case Kind::Concrete: return "concrete";
    case Kind::TensorP: return "tensor_p";
  }
  return "?";
}

std::string padded_index(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", i);
  return buf;
}

std::vector<double> random_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (double& x : w) x = rng.uniform(0.5, 2.0);
  return w;
}

BaseNorm random_base(Rng& rng, std::size_t m, bool real) {
  const int type = rng.uniform_int(0, m <= 3 ? 5 : 4);
  switch (type) {
    case 0: return BaseNorm::euclidean(m, real);
    case 1: return BaseNorm::lp(1.0, random_weights(rng, m), real);
    case 2: return BaseNorm::lp(2.0, random_weights(rng, m), real);
    case 3: return BaseNorm::lp(kInfinity, random_weights(rng, m), real);
    case 4: return BaseNorm::lp(rng.uniform() < 0.5 ? 1.5 : 3.0, random_weights(rng, m), real);
    default: {
      const auto mm = static_cast<Eigen::Index>(m);
      const Eigen::Index extra = 2;
      Matrix half(mm + extra, mm);
      half.topRows(mm) = Matrix::Identity(mm, mm);
      half.bottomRows(extra) = rng.gaussian(extra, mm, true);
      Matrix f(2 * half.rows(), mm);
      f << half, -half;
      return BaseNorm::polytope(f, real);
    }
  }
}

Matrix random_element(Rng& rng, Eigen::Index d, const Quantization& q) {
  Matrix u = rng.gaussian(d, static_cast<Eigen::Index>(q.dim()), q.real());
  return u / u.norm();
}

/// Records lhs ≤ rhs + tolerance·max(1, |rhs|).
void record(PropertyOutcome& o, double lhs, double rhs, double tolerance, int trial,
            const std::function<Json()>& witness) {
  const double excess = lhs - rhs;
  if (excess > o.worst_excess || o.worst_trial < 0) {
    o.worst_excess = excess;
    o.worst_trial = trial;
  }
  if (!(lhs <= rhs + tolerance * std::max(1.0, std::abs(rhs)))) {
    if (o.failures == 0) o.witness = witness();
    ++o.failures;
  }
}

CaseResult bracket_result(std::string id, const NormBracket& b, double expected, double tolerance) {
  CaseResult r;
  r.id = std::move(id);
  r.lower = b.lower;
  r.upper = b.upper;
  r.expected = expected;
  const double slack = tolerance * std::max(1.0, std::abs(expected));
  r.pass = b.lower <= expected + slack && expected <= b.upper + slack;
  r.gap = b.gap;
  r.detail = to_json(b);
  return r;
}

CaseResult property_result(std::string id, const PropertyOutcome& o, bool expect_violation = false) {
  CaseResult r;
  r.id = std::move(id);
  r.lower = r.upper = o.worst_trial < 0 ? 0.0 : o.worst_excess;
  r.expected = 0.0;
  r.pass = expect_violation ? o.failures > 0 : o.failures == 0;
  r.detail = {{"trials", o.trials}, {"failures", o.failures}, {"worst_trial", o.worst_trial}};
  if (!o.witness.is_null()) r.detail["witness"] = o.witness;
  return r;
}

}  // namespace

NormOptions sweep_norm_options(std::uint64_t seed) {
  NormOptions o;
  o.starts = 2;
  o.irls_iterations = 15;
  o.generation_rounds = 2;
  o.seed = seed;
  return o;
}

Quantization random_quantization(Rng& rng, Kind kind) {
  const bool real = rng.uniform() < 0.3;
  switch (kind) {
    case Kind::Min: return Quantization::min(random_base(rng, static_cast<std::size_t>(rng.uniform_int(1, 4)), real));
    case Kind::Max: return Quantization::max(random_base(rng, static_cast<std::size_t>(rng.uniform_int(1, 4)), real));
    case Kind::Hilbert: return Quantization::hilbert(static_cast<std::size_t>(rng.uniform_int(1, 4)));
    case Kind::Lp: {
      const double ps[] = {1.0, 1.5, 2.0, 3.0, kInfinity};
      const double p = ps[rng.uniform_int(0, 4)];
      const auto points = static_cast<std::size_t>(rng.uniform_int(1, 3));
      Quantization inner = Quantization::scalar();
      const int which = rng.uniform_int(0, 2);
      if (which == 1) inner = Quantization::hilbert(2);
      if (which == 2) inner = Quantization::min(random_base(rng, 2, false));
      return Quantization::lp(p, random_weights(rng, points), inner);
    }
    case Kind::Concrete: {
      const auto k = static_cast<std::size_t>(rng.uniform_int(1, 3));
      const auto l = static_cast<std::size_t>(rng.uniform_int(1, 3));
      const int n = rng.uniform_int(1, static_cast<int>(std::min<std::size_t>(3, k * l)));
      std::vector<Matrix> gens;
      for (int j = 0; j < n; ++j)
        gens.push_back(rng.gaussian(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k), false));
      return Quantization::concrete(k, l, std::move(gens));
    }
    case Kind::TensorP: {
      const auto m = static_cast<std::size_t>(rng.uniform_int(1, 3));
      Quantization inner = Quantization::hilbert(static_cast<std::size_t>(rng.uniform_int(1, 2)));
      const int which = rng.uniform_int(0, 2);
      if (which == 1) inner = Quantization::lp(rng.uniform() < 0.5 ? 1.0 : 2.0, {1.0, 0.5}, Quantization::scalar());
      if (which == 2) inner = Quantization::min(BaseNorm::euclidean(2));
      return Quantization::tensor_p(random_base(rng, m, real), inner);
    }
  }
  return Quantization::scalar();
}

PropertyOutcome module_action_property(Kind kind, int trials, std::uint64_t seed, double tolerance) {
  PropertyOutcome o;
  o.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).child(static_cast<std::uint64_t>(t));
    const Quantization q = random_quantization(rng, kind);
    const Eigen::Index d = rng.uniform_int(1, 3), d2 = rng.uniform_int(1, 4);
    const Matrix u = random_element(rng, d, q);
    Matrix a = rng.gaussian(d2, d, q.real());
    a /= spectral_norm(a);
    const Matrix au = module_action(OperatorBlock(a), AmplifiedElement(u)).coeffs();
    const NormOptions opts = sweep_norm_options(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const NormValue nu = amp_norm(q, u, opts), nau = amp_norm(q, au, opts);
    record(o, nau.lower, spectral_norm(a) * nu.value, tolerance, t, [&] {
      return Json{{"quantization", to_json(q)}, {"a", to_json(a)}, {"u", to_json(u)}, {"lhs", nau.lower},
                  {"rhs", nu.value}};
    });
  }
  return o;
}

PropertyOutcome cross_norm_property(Kind kind, int trials, std::uint64_t seed, double tolerance) {
  PropertyOutcome o;
  o.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).child(static_cast<std::uint64_t>(t));
    const Quantization q = random_quantization(rng, kind);
    const Eigen::Index d = rng.uniform_int(1, 4);
    Vector xi = rng.gaussian(d, 1, q.real()).col(0);
    xi /= xi.norm();
    Vector x = rng.gaussian(static_cast<Eigen::Index>(q.dim()), 1, q.real()).col(0);
    x /= x.norm();
    const Matrix u = AmplifiedElement::elementary(GradedVector(xi), x).coeffs();
    const NormOptions opts = sweep_norm_options(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const NormValue nu = amp_norm(q, u, opts), nx = underlying_norm(q, x, opts);
    auto witness = [&] {
      return Json{{"quantization", to_json(q)}, {"xi", vector_to_json(xi)}, {"x", vector_to_json(x)},
                  {"element", to_json(nu)}, {"underlying", to_json(nx)}};
    };
    record(o, nu.lower, nx.value, tolerance, t, witness);
    record(o, nx.lower, nu.value, tolerance, t, witness);
  }
  return o;
}

PropertyOutcome norm_axioms_property(Kind kind, int trials, std::uint64_t seed, double tolerance) {
  PropertyOutcome o;
  o.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).child(static_cast<std::uint64_t>(t));
    const Quantization q = random_quantization(rng, kind);
    const Eigen::Index d = rng.uniform_int(1, 3);
    const Matrix u = random_element(rng, d, q), v = random_element(rng, d, q);
    Complex c = q.real() ? Complex(rng.normal(), 0.0) : rng.complex_normal();
    c *= rng.uniform(0.1, 3.0) / std::abs(c);
    const NormOptions opts = sweep_norm_options(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const NormValue nu = amp_norm(q, u, opts), nv = amp_norm(q, v, opts);
    const NormValue ncu = amp_norm(q, c * u, opts), nsum = amp_norm(q, u + v, opts);
    auto witness = [&] {
      return Json{{"quantization", to_json(q)}, {"u", to_json(u)}, {"v", to_json(v)}, {"c", to_json(c)}};
    };
    const double ac = std::abs(c);
    record(o, ncu.lower, ac * nu.value, tolerance, t, witness);
    record(o, ac * nu.lower, ncu.value, tolerance, t, witness);
    record(o, nsum.lower, nu.value + nv.value, tolerance, t, witness);
    if (!(nu.lower > 0.0)) {
      if (o.failures == 0) o.witness = witness();
      ++o.failures;
    }
  }
  return o;
}

PropertyOutcome ordering_property(int trials, std::uint64_t seed, double tolerance) {
  PropertyOutcome o;
  o.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).child(static_cast<std::uint64_t>(t));
    const auto m = static_cast<std::size_t>(rng.uniform_int(1, 4));
    std::optional<BaseNorm> base;
    std::optional<Quantization> q;
    if (rng.uniform() < 0.3) {
      base = BaseNorm::euclidean(m);
      q = Quantization::hilbert(m);
    } else {
      const double ps[] = {1.0, 1.5, 2.0, 3.0};
      const double p = ps[rng.uniform_int(0, 3)];
      std::vector<double> w = random_weights(rng, m);
      base = BaseNorm::lp(p, w);
      q = Quantization::lp(p, w, Quantization::scalar());
    }
    const Quantization qmin = Quantization::min(*base), qmax = Quantization::max(*base);
    const Matrix u = random_element(rng, rng.uniform_int(1, 3), *q);
    const NormOptions opts = sweep_norm_options(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const NormValue a = amp_norm(qmin, u, opts), b = amp_norm(*q, u, opts), c = amp_norm(qmax, u, opts);
    auto witness = [&] {
      return Json{{"quantization", to_json(*q)}, {"u", to_json(u)}, {"min", to_json(a)}, {"q", to_json(b)},
                  {"max", to_json(c)}};
    };
    record(o, a.lower, b.value, tolerance, t, witness);
    record(o, b.lower, c.value, tolerance, t, witness);
  }
  return o;
}

PropertyOutcome lp_underlying_property(int trials, std::uint64_t seed, double tolerance) {
  PropertyOutcome o;
  o.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).child(static_cast<std::uint64_t>(t));
    const double ps[] = {1.0, 1.5, 2.0, 4.0, kInfinity};
    const double p = ps[rng.uniform_int(0, 4)];
    const auto points = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const std::vector<double> mu = random_weights(rng, points);
    const int which = rng.uniform_int(0, 2);
    const auto k = static_cast<Eigen::Index>(which == 0 ? 1 : 2);
    const BaseNorm l1 = BaseNorm::lp(1.0, {1.0, 3.0});
    const Quantization inner = which == 0   ? Quantization::scalar()
                               : which == 1 ? Quantization::hilbert(2)
                                            : Quantization::min(l1);
    const Quantization q = Quantization::lp(p, mu, inner);
    const Vector x = rng.gaussian(static_cast<Eigen::Index>(q.dim()), 1).col(0);
    double oracle = 0.0;
    for (std::size_t s = 0; s < points; ++s) {
      const Vector fibre = x.segment(static_cast<Eigen::Index>(s) * k, k);
      const double n = which == 2 ? std::abs(fibre(0)) + 3.0 * std::abs(fibre(1)) : fibre.norm();
      oracle = std::isinf(p) ? std::max(oracle, n) : oracle + mu[s] * std::pow(n, p);
    }
    if (!std::isinf(p)) oracle = std::pow(oracle, 1.0 / p);
    const NormValue v = underlying_norm(q, x);
    auto witness = [&] {
      return Json{{"quantization", to_json(q)}, {"x", vector_to_json(x)}, {"oracle", oracle}, {"value", to_json(v)}};
    };
    record(o, std::abs(v.value - oracle), 0.0, tolerance, t, witness);
    record(o, std::abs(v.lower - oracle), 0.0, tolerance, t, witness);
  }
  return o;
}

std::string family_name(SemiRuanFamily family) {
  switch (family) {
    case SemiRuanFamily::Min: return "min";
    case SemiRuanFamily::Hilbert: return "hilbert";
    case SemiRuanFamily::LpAtLeastTwo: return "lp-p-ge-2";
    case SemiRuanFamily::LpOne: return "lp-p1";
  }
  return "?";
}

Quantization random_family_member(Rng& rng, SemiRuanFamily family) {
  switch (family) {
    case SemiRuanFamily::Min: return random_quantization(rng, Kind::Min);
    case SemiRuanFamily::Hilbert: return random_quantization(rng, Kind::Hilbert);
    case SemiRuanFamily::LpAtLeastTwo: {
      const double ps[] = {2.0, 3.0, 4.0, kInfinity};
      const double p = ps[rng.uniform_int(0, 3)];
      const auto points = static_cast<std::size_t>(rng.uniform_int(1, 3));
      Quantization inner = Quantization::scalar();
      const int which = rng.uniform_int(0, 2);
      if (which == 1) inner = Quantization::hilbert(2);
      if (which == 2) inner = Quantization::min(BaseNorm::euclidean(2));
      return Quantization::lp(p, random_weights(rng, points), inner);
    }
    case SemiRuanFamily::LpOne:
      return Quantization::lp(1.0, random_weights(rng, static_cast<std::size_t>(rng.uniform_int(2, 3))),
                              Quantization::scalar());
  }
  return Quantization::scalar();
}

PropertyOutcome semi_ruan_property(SemiRuanFamily family, int trials, std::uint64_t seed, double tolerance,
                                   bool stop_at_first) {
  PropertyOutcome o;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).child(static_cast<std::uint64_t>(t));
    const Quantization q = random_family_member(rng, family);
    const auto w = semi_ruan_witness_search(q, 1, derive_seed(seed, static_cast<std::uint64_t>(t)), tolerance);
    ++o.trials;
    if (w) {
      if (o.failures == 0) {
        o.witness = {{"quantization", to_json(q)}, {"u", to_json(w->u)}, {"v", to_json(w->v)},
                     {"lhs", w->lhs},           {"rhs", w->rhs},     {"trial", t}};
      }
      ++o.failures;
      if (w->lhs - w->rhs > o.worst_excess || o.worst_trial < 0) o.worst_excess = w->lhs - w->rhs, o.worst_trial = t;
      if (stop_at_first) break;
    }
  }
  return o;
}

std::vector<std::pair<Quantization, Quantization>> certificate_configurations() {
  const Quantization scalar = Quantization::scalar();
  return {
      {Quantization::hilbert(3), Quantization::hilbert(3)},
      {Quantization::max(BaseNorm::lp(3.0, {1.0, 2.0, 1.0})), Quantization::hilbert(2)},
      {Quantization::lp(1.0, {1.0, 2.0, 0.5}, scalar), Quantization::hilbert(2)},
      {Quantization::lp(2.0, {0.5, 1.5}, scalar), Quantization::min(BaseNorm::lp(1.0, {1.0, 1.0}))},
      {Quantization::min(BaseNorm::euclidean(2)), Quantization::min(BaseNorm::euclidean(3))},
      {Quantization::hilbert(2), Quantization::lp(1.0, {0.7, 1.3, 1.0}, scalar)},
      {Quantization::lp(kInfinity, {1.0, 1.0}, scalar), Quantization::hilbert(2)},
      {Quantization::lp(3.0, {1.0, 2.0}, scalar), Quantization::lp(2.0, {1.0, 1.0}, scalar)},
  };
}

PropertyOutcome certificate_soundness_property(std::size_t config, int trials, std::uint64_t seed,
                                               double tolerance) {
  const auto configs = certificate_configurations();
  if (config >= configs.size()) throw InputError("unknown certificate configuration");
  const auto& [e, f] = configs[config];
  const std::vector<Certificate> certs = builtin_certificates(e, f);
  PropertyOutcome o;
  o.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).child(static_cast<std::uint64_t>(t));
    const Matrix u = random_element(rng, rng.uniform_int(1, 3), e);
    const Matrix v = random_element(rng, rng.uniform_int(1, 3), f);
    const NormOptions opts = sweep_norm_options(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const double rhs = amp_norm(e, u, opts).value * amp_norm(f, v, opts).value;
    for (const Certificate& c : certs) {
      const double lhs = amp_norm(c.map.target, amplify_bilinear(c.map, u, v), opts).lower;
      record(o, lhs, c.bound * rhs, tolerance, t, [&] {
        return Json{{"certificate", c.id}, {"u", to_json(u)}, {"v", to_json(v)}, {"lhs", lhs}, {"rhs", c.bound * rhs}};
      });
    }
  }
  return o;
}

PropertyOutcome lp_embedding_equality_property(int trials, std::uint64_t seed, double tolerance) {
  PropertyOutcome o;
  o.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).child(static_cast<std::uint64_t>(t));
    const double ps[] = {1.0, 1.5, 2.0, 3.0, kInfinity};
    const double p = ps[rng.uniform_int(0, 4)];
    const Quantization e =
        Quantization::lp(p, random_weights(rng, static_cast<std::size_t>(rng.uniform_int(1, 3))), Quantization::scalar());
    const int which = rng.uniform_int(0, 3);
    const Quantization f = which == 0   ? Quantization::hilbert(static_cast<std::size_t>(rng.uniform_int(1, 3)))
                           : which == 1 ? Quantization::min(BaseNorm::euclidean(2))
                           : which == 2 ? Quantization::lp(2.0, {1.0, 0.5}, Quantization::scalar())
                                        : random_quantization(rng, Kind::Concrete);
    const auto certs = builtin_certificates(e, f);
    const auto it = std::find_if(certs.begin(), certs.end(), [](const Certificate& c) {
      return c.id == "lp-embedding" || c.id == "grothendieck-lp-embedding";
    });
    if (it == certs.end()) throw SoundnessViolation("LP embedding missing from the catalog");
    const Matrix w = random_element(rng, rng.uniform_int(1, 3), e);
    const Matrix u = random_element(rng, rng.uniform_int(1, 3), f);
    const double lhs = amp_norm(it->map.target, amplify_bilinear(it->map, w, u)).value;
    const double rhs = amp_norm(e, w).value * amp_norm(f, u).value;
    record(o, std::abs(lhs - rhs), 0.0, tolerance, t, [&] {
      return Json{{"left", to_json(e)}, {"right", to_json(f)}, {"w", to_json(w)}, {"u", to_json(u)},
                  {"image_norm", lhs}, {"product", rhs}};
    });
  }
  return o;
}

// ---------------------------------------------------------------------------

std::vector<Case> verify_paper_cases(const RunOptions& options) {
  std::vector<Case> cases;
  const double tol = options.tolerance;
  auto search = [options, tol](const std::string& id) {
    return SearchOptions{options.budget, derive_seed(options.seed, id), options.pairing, tol};
  };

  for (int n = 1; n <= options.n_max; ++n) {
    const std::string suffix = "/n=" + std::to_string(n);
    cases.push_back({"v-example/pl" + suffix, [=] {
                       const Quantization h = Quantization::hilbert(static_cast<std::size_t>(n));
                       const Matrix v = v_example(static_cast<std::size_t>(n));
                       CaseResult r = bracket_result("v-example/pl" + suffix,
                                                     pl_norm_bracket(h, h, v, search("v-example/pl" + suffix)),
                                                     static_cast<double>(n), tol);
                       r.input_digest = digest({{"n", n}, {"element", to_json(v)}});
                       return r;
                     }});
    cases.push_back({"v-example/l" + suffix, [=] {
                       const Quantization h = Quantization::hilbert(static_cast<std::size_t>(n));
                       const Matrix v = v_example(static_cast<std::size_t>(n));
                       CaseResult r = bracket_result("v-example/l" + suffix,
                                                     l_norm_bracket(h, h, v, search("v-example/l" + suffix)),
                                                     std::sqrt(static_cast<double>(n)), tol);
                       r.input_digest = digest({{"n", n}, {"element", to_json(v)}});
                       return r;
                     }});
  }

  for (int i = 0; i < 10; ++i) {
    const std::string id = "min-svd/" + padded_index(i);
    cases.push_back({id, [=] {
                       Rng rng(derive_seed(options.seed, id));
                       const Eigen::Index d = rng.uniform_int(1, 6), m = rng.uniform_int(1, 6);
                       const Eigen::Index r = rng.uniform_int(1, static_cast<int>(std::min(d, m)));
                       const Matrix xi = rng.orthonormal_columns(d, r), x = rng.orthonormal_columns(m, r);
                       Vector lambda = rng.gaussian(r, 1).col(0);
                       const Matrix u = xi * lambda.asDiagonal() * x.transpose();
                       const Quantization q = Quantization::min(BaseNorm::euclidean(static_cast<std::size_t>(m)));
                       const NormValue v = amp_norm(q, u);
                       CaseResult res;
                       res.id = id;
                       res.lower = v.lower;
                       res.upper = v.value;
                       res.expected = lambda.cwiseAbs().maxCoeff();
                       res.pass = std::abs(v.value - *res.expected) <= tol * std::max(1.0, *res.expected) &&
                                  std::abs(v.lower - *res.expected) <= tol * std::max(1.0, *res.expected);
                       res.gap = !v.exact;
                       res.input_digest = digest(to_json(u));
                       res.detail = {{"value", to_json(v)}, {"lambda", vector_to_json(lambda)}};
                       return res;
                     }});
  }

  for (int i = 0; i < 5; ++i) {
    const std::string id = "hilbert-reshape/" + padded_index(i);
    cases.push_back({id, [=] {
                       Rng rng(derive_seed(options.seed, id));
                       const auto me = static_cast<std::size_t>(rng.uniform_int(1, 3));
                       const auto mf = static_cast<std::size_t>(rng.uniform_int(1, 3));
                       const Matrix u = rng.gaussian(rng.uniform_int(1, 3), static_cast<Eigen::Index>(me * mf));
                       const Quantization e = Quantization::min(BaseNorm::euclidean(me));
                       const Quantization f = Quantization::min(BaseNorm::euclidean(mf));
                       const double expected = spectral_norm(frame_operator(u, me, mf, options.pairing));
                       CaseResult r = bracket_result(id, l_norm_bracket(e, f, u, search(id)), expected, tol);
                       r.input_digest = digest(to_json(u));
                       return r;
                     }});
  }

  for (int i = 0; i < 5; ++i) {
    const std::string id = "l1-closed-form/" + padded_index(i);
    cases.push_back({id, [=] {
                       Rng rng(derive_seed(options.seed, id));
                       const std::vector<double> mu = random_weights(rng, static_cast<std::size_t>(rng.uniform_int(1, 4)));
                       const std::vector<double> nu = random_weights(rng, static_cast<std::size_t>(rng.uniform_int(1, 4)));
                       const Quantization e = Quantization::lp(1.0, mu, Quantization::scalar());
                       const Quantization f = Quantization::lp(1.0, nu, Quantization::scalar());
                       const Matrix u = rng.gaussian(rng.uniform_int(1, 3), static_cast<Eigen::Index>(mu.size() * nu.size()));
                       double expected = 0.0;
                       for (std::size_t s = 0; s < mu.size(); ++s)
                         for (std::size_t t = 0; t < nu.size(); ++t)
                           expected += mu[s] * nu[t] * u.col(static_cast<Eigen::Index>(s * nu.size() + t)).norm();
                       CaseResult r = bracket_result(id, pl_norm_bracket(e, f, u, search(id)), expected, tol);
                       r.input_digest = digest(to_json(u));
                       return r;
                     }});
  }

  cases.push_back({"lp-embedding-equality", [=] {
                     CaseResult r = property_result(
                         "lp-embedding-equality",
                         lp_embedding_equality_property(50, derive_seed(options.seed, "lp-embedding-equality"), tol));
                     r.input_digest = digest({{"trials", 50}});
                     return r;
                   }});

  const auto configs = certificate_configurations();
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const std::string id = "certificate-sweep/" + padded_index(static_cast<int>(c));
    cases.push_back({id, [=] {
                       CaseResult r = property_result(
                           id, certificate_soundness_property(c, 100, derive_seed(options.seed, id), tol));
                       const auto cf = certificate_configurations()[c];
                       r.detail["left"] = cf.first.describe();
                       r.detail["right"] = cf.second.describe();
                       r.input_digest = digest({{"left", to_json(cf.first)}, {"right", to_json(cf.second)}});
                       return r;
                     }});
  }
  return cases;
}

std::vector<Case> property_cases(const RunOptions& options) {
  std::vector<Case> cases;
  const double tol = options.tolerance;
  const int trials = options.trials;
  auto add = [&](const std::string& id, std::function<PropertyOutcome(std::uint64_t)> f, bool expect_violation) {
    cases.push_back({id, [=] {
                       CaseResult r = property_result(id, f(derive_seed(options.seed, id)), expect_violation);
                       r.input_digest = digest({{"property", id}, {"trials", trials}});
                       return r;
                     }});
  };
  for (Kind k : kAllKinds) {
    add("module-action/" + kind_label(k), [=](std::uint64_t s) { return module_action_property(k, trials, s, tol); },
        false);
    add("cross-norm/" + kind_label(k), [=](std::uint64_t s) { return cross_norm_property(k, trials, s, 1e-10); },
        false);
    add("norm-axioms/" + kind_label(k), [=](std::uint64_t s) { return norm_axioms_property(k, trials, s, tol); },
        false);
  }
  add("min-max-ordering", [=](std::uint64_t s) { return ordering_property(trials, s, tol); }, false);
  add("lp-underlying", [=](std::uint64_t s) { return lp_underlying_property(trials, s, tol); }, false);
  for (SemiRuanFamily fam : {SemiRuanFamily::Min, SemiRuanFamily::Hilbert, SemiRuanFamily::LpAtLeastTwo})
    add("semi-ruan/" + family_name(fam), [=](std::uint64_t s) { return semi_ruan_property(fam, trials, s, tol); },
        false);
  add("semi-ruan-witness/lp-p1",
      [=](std::uint64_t s) { return semi_ruan_property(SemiRuanFamily::LpOne, trials, s, tol, true); }, true);
  const int cert_trials = std::max(1, trials / 10);
  for (std::size_t c = 0; c < certificate_configurations().size(); ++c)
    add("certificate-soundness/" + padded_index(static_cast<int>(c)),
        [=](std::uint64_t s) { return certificate_soundness_property(c, cert_trials, s, tol); }, false);
  return cases;
}

namespace {

void require(bool ok, const std::string& pointer, const std::string& what) {
  if (!ok) throw InputError(pointer + ": " + what, pointer);
}

const Json& field(const Json& j, const std::string& key, const std::string& pointer) {
  require(j.is_object(), pointer.empty() ? "/" : pointer, "expected an object");
  const auto it = j.find(key);
  require(it != j.end(), pointer + "/" + key, "missing required field");
  return *it;
}

Case document_case(const std::string& command, const Json& c, const std::string& id, const std::string& pointer,
                   const RunOptions& options) {
  std::optional<double> expected;
  if (c.contains("expected")) {
    require(c["expected"].is_number(), pointer + "/expected", "expected a number");
    expected = c["expected"].get<double>();
  }
  const std::string dig = digest(c);
  const double tol = options.tolerance;
  auto finish = [expected, tol, dig](CaseResult r) {
    if (expected) {
      const double slack = tol * std::max(1.0, std::abs(*expected));
      r.pass = r.pass && r.lower <= *expected + slack && *expected <= r.upper + slack;
    }
    r.expected = expected;
    r.input_digest = dig;
    return r;
  };

  if (command == "norm") {
    const Quantization q = quantization_from_json(field(c, "quantization", pointer), pointer + "/quantization");
    const Matrix u = matrix_from_json(field(c, "element", pointer), pointer + "/element");
    require(static_cast<std::size_t>(u.cols()) == q.dim(), pointer + "/element",
            "element has " + std::to_string(u.cols()) + " base coordinates, quantization has dimension " +
                std::to_string(q.dim()));
    require(!q.real() || is_real(u), pointer + "/element", "complex coefficients for a real-mode quantization");
    NormOptions nopts;
    nopts.seed = options.seed;
    return {id, [=] {
              const NormValue v = amp_norm(q, u, nopts);
              CaseResult r;
              r.id = id;
              r.lower = v.lower;
              r.upper = v.value;
              r.gap = !v.exact && v.value - v.lower > tol * std::max(1.0, v.value);
              r.detail = {{"quantization", q.describe()}, {"value", to_json(v)}};
              return finish(r);
            }};
  }

  const Quantization e = quantization_from_json(field(c, "left", pointer), pointer + "/left");
  const Quantization f = quantization_from_json(field(c, "right", pointer), pointer + "/right");
  const Matrix u = matrix_from_json(field(c, "element", pointer), pointer + "/element");
  require(static_cast<std::size_t>(u.cols()) == e.dim() * f.dim(), pointer + "/element",
          "element has " + std::to_string(u.cols()) + " base coordinates, E (x) F has dimension " +
              std::to_string(e.dim() * f.dim()));
  require(!(e.real() && f.real()) || is_real(u), pointer + "/element",
          "complex coefficients for real-mode factors");
  SearchOptions sopts{options.budget, options.seed, options.pairing, tol};
  if (c.contains("pairing")) {
    require(c["pairing"].is_string(), pointer + "/pairing", "expected a string");
    try {
      sopts.pairing = Pairing::from_name(c["pairing"].get<std::string>());
    } catch (const InputError& err) {
      throw InputError(pointer + "/pairing: " + err.what(), pointer + "/pairing");
    }
  }
  std::vector<Certificate> extra;
  if (c.contains("certificates")) {
    const Json& cs = c["certificates"];
    require(cs.is_array(), pointer + "/certificates", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string cp = pointer + "/certificates/" + std::to_string(i);
      Certificate cert = certificate_from_json(cs[i], cp);
      require(cert.map.left.describe() == e.describe() && cert.map.right.describe() == f.describe(), cp + "/map",
              "certificate factors differ from the element's factors");
      extra.push_back(std::move(cert));
    }
  }

  if (command == "pl" || command == "l") {
    const bool pl = command == "pl";
    return {id, [=] {
              const NormBracket b = pl ? pl_norm_bracket(e, f, u, sopts, extra) : l_norm_bracket(e, f, u, sopts, extra);
              CaseResult r;
              r.id = id;
              r.lower = b.lower;
              r.upper = b.upper;
              r.gap = b.gap;
              r.detail = to_json(b);
              return finish(r);
            }};
  }
  if (command == "compare") {
    require(extra.empty(), pointer + "/certificates", "compare does not take user certificates");
    return {id, [=] {
              const Comparison cmp = compare_pl_l(e, f, u, sopts);
              CaseResult r;
              r.id = id;
              r.lower = cmp.separation;
              r.upper = cmp.l.lower > 0.0 ? cmp.pl.upper / cmp.l.lower : kInfinity;
              r.gap = cmp.pl.gap || cmp.l.gap;
              r.pass = cmp.consistent;
              r.detail = {{"pl", to_json(cmp.pl)}, {"l", to_json(cmp.l)}, {"consistent", cmp.consistent}};
              return finish(r);
            }};
  }
  throw InputError("command '" + command + "' does not take an input document", "/");
}

}  // namespace

std::vector<Case> document_cases(const std::string& command, const Json& doc, const RunOptions& options) {
  check_schema_version(doc);
  std::vector<Case> out;
  if (doc.contains("cases")) {
    const Json& cs = doc["cases"];
    require(cs.is_array() && !cs.empty(), "/cases", "expected a non-empty array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string pointer = "/cases/" + std::to_string(i);
      std::string id = "case-" + padded_index(static_cast<int>(i));
      if (cs[i].is_object() && cs[i].contains("id")) {
        require(cs[i]["id"].is_string(), pointer + "/id", "expected a string");
        id = cs[i]["id"].get<std::string>();
      }
      out.push_back(document_case(command, cs[i], id, pointer, options));
    }
  } else {
    std::string id = "input";
    if (doc.contains("id")) {
      require(doc["id"].is_string(), "/id", "expected a string");
      id = doc["id"].get<std::string>();
    }
    out.push_back(document_case(command, doc, id, "", options));
  }
  std::vector<std::string> ids;
  for (const Case& c : out) ids.push_back(c.id);
  std::sort(ids.begin(), ids.end());
  require(std::adjacent_find(ids.begin(), ids.end()) == ids.end(), "/cases", "case ids must be unique");
  return out;
}

std::vector<CaseResult> run_cases(const std::vector<Case>& cases, unsigned threads, const std::string& reproduce) {
  std::vector<CaseResult> results(cases.size());
  std::vector<std::exception_ptr> input_errors(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        results[i] = cases[i].run();
      } catch (const InputError&) {
        input_errors[i] = std::current_exception();
      } catch (const std::exception& e) {
        results[i] = CaseResult{};
        results[i].pass = false;
        results[i].detail = {{"error", e.what()}};
      }
      results[i].id = cases[i].id;
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(cases.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : input_errors)
    if (e) std::rethrow_exception(e);
  for (CaseResult& r : results)
    if (!r.pass) r.reproduce = reproduce + " --case '" + r.id + "'";
  std::sort(results.begin(), results.end(), [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
  return results;
}

unsigned thread_count(const char* env_value) {
  unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  if (env_value == nullptr || *env_value == '\0') return hw;
  char* end = nullptr;
  const long v = std::strtol(env_value, &end, 10);
  if (end == env_value || *end != '\0' || v < 1) return hw;
  return static_cast<unsigned>(std::min<long>(v, 1024));
}

namespace {

Json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

Json report_json(const std::string& command, const RunOptions& options, const std::vector<CaseResult>& results) {
  Json cases = Json::array();
  int passed = 0, failed = 0, gaps = 0;
  for (const CaseResult& r : results) {
    Json c{{"case", r.id},
           {"input_digest", r.input_digest},
           {"lower", number_json(r.lower)},
           {"upper", number_json(r.upper)},
           {"expected", r.expected ? number_json(*r.expected) : Json(nullptr)},
           {"pass", r.pass},
           {"gap", r.gap},
           {"detail", r.detail}};
    if (!r.pass) c["reproduce"] = r.reproduce;
    cases.push_back(std::move(c));
    r.pass ? ++passed : ++failed;
    if (r.gap) ++gaps;
  }
  const int code = exit_code(results);
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"options",
           {{"budget", options.budget},
            {"seed", options.seed},
            {"tolerance", options.tolerance},
            {"n_max", options.n_max},
            {"trials", options.trials},
            {"pairing", std::string(options.pairing.name())}}},
          {"cases", cases},
          {"summary",
           {{"cases", results.size()},
            {"passed", passed},
            {"failed", failed},
            {"gaps", gaps},
            {"status", code == 0 ? "pass" : code == 1 ? "violation" : "gap"}}}};
}

std::string report_csv(const std::vector<CaseResult>& results) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::ostringstream os;
  os << "case,lower,upper,expected,pass\n";
  for (const CaseResult& r : results)
    os << cell(r.id) << ',' << format_double(r.lower) << ',' << format_double(r.upper) << ','
       << (r.expected ? format_double(*r.expected) : "") << ',' << (r.pass ? "true" : "false") << '\n';
  return os.str();
}

int exit_code(const std::vector<CaseResult>& results) {
  bool gap = false;
  for (const CaseResult& r : results) {
    if (!r.pass) return 1;
    gap = gap || r.gap;
  }
  return gap ? 2 : 0;
}

}  // namespace pllab
