#pragma once

// Case runner shared by the CLI and the acceptance binary: the fixed
// verification suite, the randomized property suites, and jobs read from
// input documents. Every case is seeded from (seed, case id) alone, so the
// report does not depend on scheduling.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pllab/hilbert.hpp"
#include "pllab/quantization.hpp"
#include "pllab/rng.hpp"
#include "pllab/serialize.hpp"

namespace pllab {

struct RunOptions {
  int budget = 200;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  int n_max = 4;
  int trials = 1000;
  Pairing pairing;
};

struct CaseResult {
  std::string id;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> expected;
  bool pass = true;
  bool gap = false;
  std::string input_digest;
  Json detail = Json::object();
  std::string reproduce;
};

struct Case {
  std::string id;
  std::function<CaseResult()> run;
};

std::vector<Case> verify_paper_cases(const RunOptions& options);
std::vector<Case> property_cases(const RunOptions& options);
/// Cases for norm, pl, l and compare from an input document: one case, or
/// {"cases": [...]} with optional "id" fields.
std::vector<Case> document_cases(const std::string& command, const Json& doc, const RunOptions& options);

/// Runs on up to `threads` workers; results sorted by case id. Failed cases
/// get `reproduce` as their reproduction command. Exceptions other than
/// InputError become failed cases.
std::vector<CaseResult> run_cases(const std::vector<Case>& cases, unsigned threads, const std::string& reproduce);

/// Worker cap from a PLLAB_THREADS value (null or invalid: hardware concurrency).
unsigned thread_count(const char* env_value);

Json report_json(const std::string& command, const RunOptions& options, const std::vector<CaseResult>& results);
std::string report_csv(const std::vector<CaseResult>& results);

/// 0 all pass, 1 some case failed, 2 only gaps.
int exit_code(const std::vector<CaseResult>& results);

// Property suites.

struct PropertyOutcome {
  int trials = 0;
  int failures = 0;
  /// Largest lhs - rhs observed; the assertion is lhs <= rhs + tolerance.
  double worst_excess = -kInfinity;
  int worst_trial = -1;
  Json witness;
  bool pass() const { return failures == 0; }
};

/// Cheap search settings for randomized sweeps; bounds stay sound.
NormOptions sweep_norm_options(std::uint64_t seed);

/// Small random instance of `kind` (dimension at most 6).
Quantization random_quantization(Rng& rng, Quantization::Kind kind);

/// ‖a·U‖ ≤ ‖a‖‖U‖.
PropertyOutcome module_action_property(Quantization::Kind kind, int trials, std::uint64_t seed, double tolerance);
/// ‖ξ x‖ = ‖ξ‖‖x‖, checked as agreement of the two enclosures.
PropertyOutcome cross_norm_property(Quantization::Kind kind, int trials, std::uint64_t seed, double tolerance);
/// Homogeneity, triangle inequality, definiteness.
PropertyOutcome norm_axioms_property(Quantization::Kind kind, int trials, std::uint64_t seed, double tolerance);
/// MIN ≤ Q ≤ MAX for quantizations of the same base norm.
PropertyOutcome ordering_property(int trials, std::uint64_t seed, double tolerance);
/// The LP underlying norm equals the weighted ℓp norm of the fibre norms.
PropertyOutcome lp_underlying_property(int trials, std::uint64_t seed, double tolerance);

enum class SemiRuanFamily { Min, Hilbert, LpAtLeastTwo, LpOne };
std::string family_name(SemiRuanFamily family);
Quantization random_family_member(Rng& rng, SemiRuanFamily family);
/// One semi-Ruan search trial per random family member. `failures` counts
/// violations; for LpOne a violation is the expected outcome.
PropertyOutcome semi_ruan_property(SemiRuanFamily family, int trials, std::uint64_t seed, double tolerance,
                                   bool stop_at_first = false);

/// Factor pairs for which the catalog has non-trivial certificates.
std::vector<std::pair<Quantization, Quantization>> certificate_configurations();
/// ‖r_∞(u, v)‖ ≤ bound·‖u‖‖v‖ for every catalog certificate of `config`.
PropertyOutcome certificate_soundness_property(std::size_t config, int trials, std::uint64_t seed,
                                               double tolerance);
/// |‖R_∞(w, u)‖ - ‖w‖‖u‖| for the LP embedding, over random LP and F.
PropertyOutcome lp_embedding_equality_property(int trials, std::uint64_t seed, double tolerance);

}  // namespace pllab
