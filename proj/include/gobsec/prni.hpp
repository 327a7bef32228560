#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gobsec/ast.hpp"
#include "gobsec/parser.hpp"

namespace gobsec {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; derives independent seeds from (seed, a, b).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

using TypeSubst = std::vector<std::pair<std::string, TypePtr>>;
using ValueSubst = std::vector<std::pair<std::string, ExprPtr>>;

SecType apply_subst(const TypeSubst& sigma, const SecType& s);
TypePtr apply_subst(const TypeSubst& sigma, const TypePtr& t);

/// Candidate pool: prims, Top, and the closed named types of a program.
std::vector<TypePtr> default_pool(const SourceProgram& program);

/// Draws sigma in D[[delta]]: each variable from its closed bounds plus the
/// pool members inside the interval. Throws GobsecError on an empty interval.
TypeSubst sample_subst(const TypeVarEnv& delta, const std::vector<TypePtr>& pool, Rng& rng);

/// Closed values of the given safety type.
ExprPtr gen_value(const TypePtr& t, Rng& rng, int depth = 3);

struct Observation {
  std::string path;  // method path from the observed value, e.g. ".head().length()"
  ExprPtr left;
  ExprPtr right;
};

struct RelationResult {
  bool related = true;
  std::optional<Observation> observation;
};

struct ProbeContext {
  std::vector<TypePtr> pool;
  std::size_t fuel = 10000;
  std::size_t budget = 256;  // method invocations per check
};

/// A pair related at `s` by construction (closed, well-formed s).
std::pair<ExprPtr, ExprPtr> gen_related_pair(const SecType& s, Rng& rng,
                                             const ProbeContext& ctx, int depth = 3);

/// Bounded refutation search over the public methods of `s`.
RelationResult check_related(std::size_t k, const ExprPtr& v1, const ExprPtr& v2,
                             const SecType& s, const ProbeContext& ctx, std::uint64_t seed);

struct PrniConfig {
  std::size_t pairs = 1000;
  std::size_t substs = 10;
  std::size_t k = 6;
  std::size_t fuel = 10000;
  std::uint64_t seed = 0;
  bool parallel = true;
  std::vector<TypePtr> extra_pool;
};

struct Witness {
  std::size_t subst_index = 0;
  std::size_t pair_index = 0;
  TypeSubst sigma;
  ValueSubst gamma1;
  ValueSubst gamma2;
  ExprPtr output1;
  ExprPtr output2;
  Observation observation;
};

struct Verdict {
  bool counterexample = false;
  std::size_t trials = 0;  // trials run up to the verdict
  std::size_t substs_tested = 0;
  std::size_t pairs_tested = 0;
  std::size_t max_k = 0;
  std::size_t timeouts = 0;
  std::uint64_t seed = 0;
  std::optional<Witness> witness;
};

/// Differential test of the program body at observation type `observe`.
/// The body must simple-typecheck; security typing is not required.
Verdict prni_test(const SourceProgram& program, const SecType& observe,
                  const PrniConfig& config);

/// Re-runs the witness trial and reports whether it still distinguishes.
bool replay_witness(const SourceProgram& program, const SecType& observe,
                    const PrniConfig& config, const Witness& witness);

}  // namespace gobsec
