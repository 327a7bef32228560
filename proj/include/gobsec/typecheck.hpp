#pragma once

#include <optional>
#include <vector>

#include "gobsec/ast.hpp"
#include "gobsec/diagnostic.hpp"
#include "gobsec/parser.hpp"

namespace gobsec {

/// Minimal security type of `e`. Throws TypeError or WfError.
SecType sec_synth(const TypeVarEnv& delta, const TermEnv& gamma, const ExprPtr& e);

struct CheckResult {
  bool ok = false;
  std::optional<SecType> type;  // synthesized type when synthesis succeeded
  std::vector<Diagnostic> diagnostics;
};

CheckResult sec_check(const TypeVarEnv& delta, const TermEnv& gamma, const ExprPtr& e,
                      const SecType& expected);

/// Single-facet typing over safety types. Throws TypeError.
TypePtr simple_synth(const TermEnv& gamma, const ExprPtr& e);
bool simple_check(const TermEnv& gamma, const ExprPtr& e, const TypePtr& expected);

enum class CheckStage { Ok, Wf, Type };

struct ProgramCheck {
  CheckStage stage = CheckStage::Ok;
  std::optional<SecType> type;      // security mode
  TypePtr simple_type;              // simple mode
  std::vector<Diagnostic> diagnostics;
};

/// Environment well-formedness, then typing of the body.
ProgramCheck check_program(const SourceProgram& program, bool simple = false);

}  // namespace gobsec
