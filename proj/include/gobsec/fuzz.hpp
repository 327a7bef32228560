#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "gobsec/ast.hpp"
#include "gobsec/eval.hpp"
#include "gobsec/prni.hpp"

namespace gobsec {

struct GeneratedTerm {
  ExprPtr term;
  SecType type;        // target the term was checked against
  std::size_t tries;   // candidates drawn until one typechecked
};

/// A closed term accepted by the security checker at a randomly chosen
/// target type. Throws GobsecError when `max_tries` candidates all fail.
GeneratedTerm gen_welltyped(Rng& rng, int depth = 4, std::size_t max_tries = 200);

struct FuzzReport {
  std::size_t terms = 0;
  std::size_t values = 0;
  std::size_t timeouts = 0;
  std::size_t stuck = 0;
  std::size_t rejected = 0;  // candidates discarded by the checker
  std::size_t simple_failures = 0;
  std::optional<ExprPtr> first_stuck;
  std::string first_stuck_reason;
};

/// Generates `count` well-typed closed terms and evaluates each one.
FuzzReport fuzz_safety(std::uint64_t seed, std::size_t count, std::size_t fuel = 10000,
                       bool parallel = true);

}  // namespace gobsec
