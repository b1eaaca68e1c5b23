// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pllab/maps.hpp"
#include "pllab/suites.hpp"
#include "pllab/tensor_lab.hpp"

using namespace pllab;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Line {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& title, const Line& line) {
  std::printf("[%s] criterion %d: %s (%s)\n", line.pass ? "PASS" : "FAIL", n, title.c_str(), line.detail.c_str());
  std::fflush(stdout);
  if (!line.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Modified Gram-Schmidt on a Gaussian matrix: r orthonormal columns in C^n.
Matrix gram_schmidt(Rng& rng, Eigen::Index n, Eigen::Index r) {
  Matrix q = rng.gaussian(n, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    for (Eigen::Index j = 0; j < k; ++j) q.col(k) -= q.col(j).dot(q.col(k)) * q.col(j);
    q.col(k) /= q.col(k).norm();
  }
  return q;
}

// Spectral norm from the top eigenvalue of U U*.
double gram_spectral(const Matrix& u) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(u * u.adjoint(), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

SearchOptions search(std::uint64_t seed, Pairing p) {
  SearchOptions o;
  o.seed = seed;
  o.pairing = p;
  return o;
}

double candidate_value(const NormBracket& b, const std::string& id) {
  for (const CandidateValue& c : b.lower_candidates)
    if (c.id == id) return c.value;
  return -kInfinity;
}

// Criteria 1-4 for one pairing; `values` collects every reported number.
struct Core {
  Line c1, c2, c3, c4;
  double c1_seconds = 0.0;
  std::vector<double> values;
};

Core run_core(Pairing pairing) {
  Core out;

  {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::string bad;
    for (std::size_t n = 1; n <= 4; ++n) {
      const Quantization h = Quantization::hilbert(n);
      const Matrix v = v_example(n);
      const NormBracket pl = pl_norm_bracket(h, h, v, search(kSeed + n, pairing));
      const NormBracket l = l_norm_bracket(h, h, v, search(kSeed + n, pairing));
      const double sn = std::sqrt(static_cast<double>(n)), dn = static_cast<double>(n);
      for (double x : {pl.lower - dn, pl.upper - dn, l.lower - sn, l.upper - sn}) worst = std::max(worst, std::abs(x));
      // At n = 1 a functional pair ties; the named certificate must reach the value itself.
      if (std::abs(candidate_value(pl, "coordinatewise-M") - dn) > 1e-9) bad += " coordinatewise-M short";
      if (std::abs(candidate_value(l, "coordinatewise-N") - sn) > 1e-9) bad += " coordinatewise-N short";
      if (!pl.pl_witness || (pl.pl_witness->reconstruct(pairing) - v).norm() > 1e-12) bad += " pl-upper-witness";
      if (!l.l_witness || !supports_valid(*l.l_witness)) bad += " l-upper-witness";
      out.values.insert(out.values.end(), {pl.lower, pl.upper, l.lower, l.upper});
    }
    out.c1_seconds = seconds_since(t0);
    out.c1.pass = worst <= 1e-9 && bad.empty() && out.c1_seconds < 10.0;
    out.c1.detail = fmt("max deviation %.3g, %.2f s", worst, out.c1_seconds) + bad;
  }

  {
    Rng rng(kSeed ^ 0x2);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Eigen::Index d = rng.uniform_int(1, 6), m = rng.uniform_int(1, 6);
      const Eigen::Index r = rng.uniform_int(1, static_cast<int>(std::min(d, m)));
      const Matrix xi = gram_schmidt(rng, d, r), x = gram_schmidt(rng, m, r);
      Matrix u = Matrix::Zero(d, m);
      double expected = 0.0;
      for (Eigen::Index k = 0; k < r; ++k) {
        const Complex lambda = rng.complex_normal();
        expected = std::max(expected, std::abs(lambda));
        u += lambda * xi.col(k) * x.col(k).transpose();
      }
      const NormValue v = amp_norm(Quantization::min(BaseNorm::euclidean(static_cast<std::size_t>(m))), u);
      worst = std::max({worst, std::abs(v.value - expected), std::abs(v.lower - expected)});
      out.values.push_back(v.value);
    }
    out.c2.pass = worst <= 1e-10;
    out.c2.detail = fmt("100 combinations, max deviation %.3g", worst);
  }

  {
    Rng rng(kSeed ^ 0x3);
    double worst_gap = 0.0, worst_dev = 0.0;
    for (int t = 0; t < 50; ++t) {
      const auto me = static_cast<std::size_t>(rng.uniform_int(1, 3)), mf = static_cast<std::size_t>(rng.uniform_int(1, 3));
      const Matrix u = rng.gaussian(rng.uniform_int(1, 3), static_cast<Eigen::Index>(me * mf));
      const NormBracket b = l_norm_bracket(Quantization::min(BaseNorm::euclidean(me)),
                                           Quantization::min(BaseNorm::euclidean(mf)), u,
                                           search(kSeed + 300 + static_cast<std::uint64_t>(t), pairing));
      const double s = gram_spectral(u);
      worst_gap = std::max(worst_gap, b.upper - b.lower);
      worst_dev = std::max({worst_dev, std::abs(b.lower - s), std::abs(b.upper - s)});
      out.values.insert(out.values.end(), {b.lower, b.upper});
    }
    out.c3.pass = worst_gap <= 1e-9 && worst_dev <= 1e-9;
    out.c3.detail = fmt("50 elements, max gap %.3g, max deviation from spectral norm %.3g", worst_gap, worst_dev);
  }

  {
    Rng rng(kSeed ^ 0x4);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const int me = rng.uniform_int(1, 4), mf = rng.uniform_int(1, 4);
      std::vector<double> mu(static_cast<std::size_t>(me)), nu(static_cast<std::size_t>(mf));
      for (double& w : mu) w = rng.uniform(0.2, 3.0);
      for (double& w : nu) w = rng.uniform(0.2, 3.0);
      const Matrix u = rng.gaussian(rng.uniform_int(1, 3), me * mf);
      double expected = 0.0;
      for (int s = 0; s < me; ++s)
        for (int t2 = 0; t2 < mf; ++t2) expected += mu[s] * nu[t2] * u.col(s * mf + t2).norm();
      const NormBracket b = pl_norm_bracket(Quantization::lp(1.0, mu, Quantization::scalar()),
                                            Quantization::lp(1.0, nu, Quantization::scalar()), u,
                                            search(kSeed + 400 + static_cast<std::uint64_t>(t), pairing));
      worst = std::max({worst, std::abs(b.lower - expected), std::abs(b.upper - expected)});
      out.values.insert(out.values.end(), {b.lower, b.upper});
    }

    double worst_iso = 0.0;
    const std::vector<BaseNorm> bases{BaseNorm::lp(1.0, {1.0, 2.0, 1.0}), BaseNorm::lp(kInfinity, {1.0, 1.0, 0.5}),
                                      BaseNorm::euclidean(3), BaseNorm::lp(3.0, {1.0, 2.0, 1.0})};
    for (int t = 0; t < 8; ++t) {
      const BaseNorm& base = bases[static_cast<std::size_t>(t) % bases.size()];
      const Quantization e = Quantization::max(base), f = Quantization::hilbert(2);
      const Matrix u = rng.gaussian(rng.uniform_int(1, 2), 6);
      const std::uint64_t s = kSeed + 500 + static_cast<std::uint64_t>(t);
      double candidate = kInfinity;
      for (const PLRepresentation& rep : pl_candidates(e, f, u, search(s, pairing)))
        if (rep.generator == "isometry-sum-left") candidate = rep.value;
      NormOptions no;
      no.seed = s;
      const double reference = amp_norm(Quantization::tensor_p(e.base(), f), u, no).value;
      worst_iso = std::max(worst_iso, std::abs(candidate - reference));
      out.values.push_back(candidate);
    }
    out.c4.pass = worst <= 1e-9 && worst_iso <= 1e-6;
    out.c4.detail = fmt("l1 closed form max deviation %.3g; isometry-sum-left vs projective norm %.3g", worst, worst_iso);
  }
  return out;
}

Line criterion5() {
  using K = Quantization::Kind;
  const int trials = 10000;
  Line line;
  std::string notes;
  int run = 0;
  const std::vector<std::pair<K, std::string>> kinds{{K::Min, "min"}, {K::Max, "max"},           {K::Hilbert, "hilbert"},
                                                     {K::Lp, "lp"},   {K::Concrete, "concrete"}, {K::TensorP, "tensor_p"}};
  for (const auto& [kind, name] : kinds) {
    const PropertyOutcome a = module_action_property(kind, trials, derive_seed(kSeed, "module-action/" + name), 1e-9);
    const PropertyOutcome c = cross_norm_property(kind, trials, derive_seed(kSeed, "cross-norm/" + name), 1e-10);
    run += a.trials + c.trials;
    if (!a.pass()) line.pass = false, notes += " module-action/" + name + " failed " + std::to_string(a.failures);
    if (!c.pass()) line.pass = false, notes += " cross-norm/" + name + " failed " + std::to_string(c.failures);
  }
  for (SemiRuanFamily fam : {SemiRuanFamily::Min, SemiRuanFamily::Hilbert, SemiRuanFamily::LpAtLeastTwo}) {
    const PropertyOutcome o = semi_ruan_property(fam, trials, derive_seed(kSeed, "semi-ruan/" + family_name(fam)), 1e-9);
    run += o.trials;
    if (!o.pass()) line.pass = false, notes += " semi-ruan/" + family_name(fam) + " violated";
  }
  const PropertyOutcome w = semi_ruan_property(SemiRuanFamily::LpOne, trials, derive_seed(kSeed, "semi-ruan/lp1"), 1e-9, true);
  if (w.failures == 0) line.pass = false, notes += " no LP(1) witness";
  line.detail = std::to_string(run) + " trials, LP(1) witness after " + std::to_string(w.trials) + " trials" + notes;
  return line;
}

Line criterion6() {
  Line line;
  int pairs = 0;
  double worst = -kInfinity;
  std::string notes;
  const auto configs = certificate_configurations();
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const PropertyOutcome o = certificate_soundness_property(c, 1000, derive_seed(kSeed, c), 1e-9);
    pairs += o.trials;
    worst = std::max(worst, o.worst_excess);
    if (!o.pass()) line.pass = false, notes += " config " + std::to_string(c) + " failed";
  }
  const PropertyOutcome e = lp_embedding_equality_property(1000, derive_seed(kSeed, "lp-embedding"), 1e-9);
  if (!e.pass()) line.pass = false, notes += " lp-embedding equality failed";
  line.detail = std::to_string(pairs) + " pairs over " + std::to_string(configs.size()) +
                fmt(" configurations, worst excess %.3g; embedding worst %.3g", worst, e.worst_excess) + notes;
  return line;
}

Line criterion7() {
  Rng rng(kSeed ^ 0x7);
  double worst_ratio = kInfinity, worst_excess = -kInfinity;
  for (int t = 0; t < 100; ++t) {
    const int m = rng.uniform_int(1, 5);
    const int type = t % 3;
    const Vector f = rng.gaussian(m, 1).col(0);
    double dual = 0.0;
    BaseNorm base = BaseNorm::euclidean(static_cast<std::size_t>(m));
    if (type == 0) {
      base = BaseNorm::lp(1.0, std::vector<double>(static_cast<std::size_t>(m), 1.0));
      for (Eigen::Index j = 0; j < m; ++j) dual = std::max(dual, std::abs(f(j)));
    } else if (type == 1) {
      base = BaseNorm::lp(kInfinity, std::vector<double>(static_cast<std::size_t>(m), 1.0));
      for (Eigen::Index j = 0; j < m; ++j) dual += std::abs(f(j));
    } else {
      for (Eigen::Index j = 0; j < m; ++j) dual += std::norm(f(j));
      dual = std::sqrt(dual);
    }
    const Quantization src = (t / 3) % 2 == 0 ? Quantization::min(base) : Quantization::max(base);
    const LbNormEstimate est = lb_norm_lower(LinearMap{f, src, Quantization::scalar()}, 1000, derive_seed(kSeed, t));
    worst_ratio = std::min(worst_ratio, est.lower / dual);
    worst_excess = std::max(worst_excess, est.lower - dual);
  }
  Line line;
  line.pass = worst_ratio >= 0.99 && worst_excess <= 1e-12;
  line.detail = fmt("100 functionals, worst lower/dual %.6f, max excess %.3g", worst_ratio, worst_excess);
  return line;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const Core rm = run_core(Pairing(PairingScheme::RowMajor));
  const Core cm = run_core(Pairing(PairingScheme::ColumnMajor));
  auto both = [](const Line& a, const Line& b) {
    return Line{a.pass && b.pass, "row-major: " + a.detail + "; column-major: " + b.detail};
  };
  report(1, "V example separates pl = n from l = sqrt(n), n = 1..4", both(rm.c1, cm.c1));
  report(2, "MIN norm over Euclidean bases is max |lambda_k|", both(rm.c2, cm.c2));
  report(3, "l bracket over MIN-Euclidean factors collapses to the spectral norm", both(rm.c3, cm.c3));
  report(4, "l1 identifications", both(rm.c4, cm.c4));
  report(5, "property suites at 10^4 trials", criterion5());
  report(6, "certificate soundness and LP-embedding equality", criterion6());
  report(7, "lb-norm search on functionals reaches 1% of the dual norm", criterion7());

  Line c8;
  double diff = 0.0;
  if (rm.values.size() != cm.values.size()) {
    c8.pass = false;
    c8.detail = "value counts differ";
  } else {
    for (std::size_t i = 0; i < rm.values.size(); ++i) diff = std::max(diff, std::abs(rm.values[i] - cm.values[i]));
    c8.pass = diff <= 1e-10;
    c8.detail = std::to_string(rm.values.size()) + fmt(" values, max difference %.3g", diff);
  }
  report(8, "criteria 1-4 agree under row-major and column-major pairing", c8);

  std::printf("acceptance: %d failing criteria, %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
