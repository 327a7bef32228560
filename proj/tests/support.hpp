#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "gobsec/ast.hpp"
#include "gobsec/parser.hpp"

namespace testing_support {

using namespace gobsec;

inline constexpr const char* kPolicies = R"(
type StringLen = [ length : Unit! -> Int! ]
type StringFst = [ first : Unit! -> String! ]
type StrFstLen = [ first : Unit! -> String!, length : Unit! -> Int! ]
type StringEq = [ eq : String! -> Bool! ]
type StringEqL = [ eq : String! -> Bool! ]
type StringEqBad = [ eq : String? -> Bool! ]
type StringEqPoly = [ eq : String<*> -> Bool<*> ]
type IntEq = [ eq : Int! -> Bool! ]
type StringHashEq = [ hash : Unit! -> Int<IntEq> ]
type ListStr<X> = [
  isEmpty : Unit! -> Bool!,
  head : Unit! -> String<X>,
  tail : Unit! -> ListStr<X>!
]
type SelfRet = Obj(a)[ m : Unit! -> a? ]
)";

/// Policies plus the given declarations and a trivial body.
inline SourceProgram context(const std::string& decls = "") {
  return parse_program(std::string(kPolicies) + decls + "\nunit\n");
}

inline const SourceProgram& policies() {
  static const SourceProgram p = context();
  return p;
}

inline TypePtr ty(const std::string& text, const SourceProgram& ctx = policies()) {
  return parse_type(text, ctx);
}

inline SecType st(const std::string& text, const SourceProgram& ctx = policies()) {
  return parse_sectype(text, ctx);
}

inline ExprPtr ex(const std::string& text, const SourceProgram& ctx = policies()) {
  return parse_expr(text, ctx);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus_file(const std::string& name) {
  return std::string(GOBSEC_CORPUS_DIR) + "/" + name;
}

inline SourceProgram corpus_program(const std::string& name) {
  return parse_program(read_file(corpus_file(name)));
}

}  // namespace testing_support
