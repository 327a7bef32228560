#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gobsec/ast.hpp"
#include "gobsec/diagnostic.hpp"

namespace gobsec {

enum class Expectation { None, Secure, Insecure, IllTyped };

std::string_view expectation_name(Expectation e);

struct AliasTable;  // raw alias declarations, kept for later parses

struct SourceProgram {
  TypeVarEnv tvars;
  TermEnv vars;
  ExprPtr body;
  Expectation expect = Expectation::None;
  /// Parameterless aliases, fully expanded, in declaration order.
  std::vector<std::pair<std::string, TypePtr>> named_types;
  std::shared_ptr<const AliasTable> aliases;
};

SourceProgram parse_program(std::string_view text);

/// Parse a security type / expression in the scope of `context`'s aliases
/// and type variables.
SecType parse_sectype(std::string_view text, const SourceProgram& context);
TypePtr parse_type(std::string_view text, const SourceProgram& context);
ExprPtr parse_expr(std::string_view text, const SourceProgram& context);

}  // namespace gobsec
