#pragma once

#include <string>

#include "gobsec/ast.hpp"
#include "gobsec/parser.hpp"

namespace gobsec {

std::string pretty_print(const TypePtr& t);
std::string pretty_print(const SecType& s);
std::string pretty_print(const std::string& method, const MethodSig& sig);
std::string pretty_print(const ExprPtr& e);
std::string pretty_print(const Literal& lit);

/// Fully expanded program text; parses back to an alpha-equal program.
std::string print_program(const SourceProgram& program);

}  // namespace gobsec
