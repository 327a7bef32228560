#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gobsec/ast.hpp"

namespace gobsec {

constexpr std::size_t kDefaultFuel = 100000;

/// theta: primitive method implementations. nullopt where undefined.
std::optional<Literal> theta(std::string_view method, const Literal& receiver,
                             const std::vector<Literal>& args);

std::uint64_t fnv1a64(std::string_view bytes);
std::int64_t utf8_length(std::string_view s);
std::string utf8_first(std::string_view s);

/// Drop ascriptions and type arguments, everywhere including method bodies.
ExprPtr erase(const ExprPtr& e);

struct StepResult {
  enum class Kind { Stepped, Value, Stuck } kind = Kind::Value;
  ExprPtr next;   // Stepped
  ExprPtr redex;  // Stuck
  std::string reason;
};

/// One leftmost reduction step of a closed, erased term.
StepResult step(const ExprPtr& e);

struct Outcome {
  enum class Kind { Value, Timeout, Stuck } kind = Kind::Value;
  ExprPtr value;  // Value
  ExprPtr redex;  // Stuck
  std::string reason;
  std::size_t steps = 0;

  bool is_value() const { return kind == Kind::Value; }
};

/// Runs to a value, a stuck redex, or fuel exhaustion. Same reductions and
/// step count as iterating `step`, without recursion on the C++ stack.
Outcome eval(const ExprPtr& e, std::size_t fuel = kDefaultFuel);

/// Reference driver iterating `step`; quadratic, for tests.
Outcome eval_by_steps(const ExprPtr& e, std::size_t fuel = kDefaultFuel);

std::string_view outcome_name(Outcome::Kind k);

}  // namespace gobsec
