#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gobsec {

enum class PrimKind : std::uint8_t { Int, String, Bool, Unit };

std::string_view prim_name(PrimKind kind);
std::optional<PrimKind> prim_from_name(std::string_view name);

struct Type;
using TypePtr = std::shared_ptr<const Type>;

/// Faceted security type `safety<decl>`, or the use-site polymorphic
/// primitive form `P<*>` that only occurs inside primitive signatures.
struct SecType {
  enum class Kind : std::uint8_t { Faceted, PrimStar };

  Kind kind = Kind::Faceted;
  TypePtr safety;
  TypePtr decl;
  PrimKind star_kind = PrimKind::Unit;

  static SecType faceted(TypePtr safety, TypePtr decl);
  static SecType star(PrimKind kind);

  bool is_star() const { return kind == Kind::PrimStar; }
};

struct TypeParam {
  std::string name;
  TypePtr lower;
  TypePtr upper;
};

struct MethodSig {
  enum class Kind : std::uint8_t { Generic, Prim };

  Kind kind = Kind::Generic;

  // Generic: <X1:A1..B1, ...> S1 * ... * Sn -> S
  std::vector<TypeParam> type_params;
  std::vector<SecType> params;
  SecType ret;

  // Prim: P1<*> * ... -> P<*>
  std::vector<PrimKind> prim_params;
  PrimKind prim_ret = PrimKind::Unit;

  static MethodSig generic(std::vector<TypeParam> type_params,
                           std::vector<SecType> params, SecType ret);
  static MethodSig prim(std::vector<PrimKind> params, PrimKind ret);

  bool is_prim() const { return kind == Kind::Prim; }
  std::size_t arity() const {
    return is_prim() ? prim_params.size() : params.size();
  }
};

struct MethodEntry {
  std::string name;
  MethodSig sig;
};

struct Type {
  enum class Kind : std::uint8_t { Obj, SelfVar, TypeVar, Prim };

  Kind kind = Kind::Obj;
  // Self binder for Obj; variable name for SelfVar / TypeVar.
  std::string name;
  PrimKind prim = PrimKind::Unit;
  std::vector<MethodEntry> methods;

  bool is_obj() const { return kind == Kind::Obj; }
  bool is_self_var() const { return kind == Kind::SelfVar; }
  bool is_type_var() const { return kind == Kind::TypeVar; }
  bool is_prim() const { return kind == Kind::Prim; }
  bool is_top() const { return is_obj() && methods.empty(); }

  const MethodEntry* find_method(std::string_view method) const;
};

TypePtr make_obj(std::string self_name, std::vector<MethodEntry> methods);
TypePtr make_self_var(std::string name);
TypePtr make_type_var(std::string name);
TypePtr make_prim(PrimKind kind);
/// The empty object interface `Obj(a)[]`.
TypePtr top_type();

SecType public_of(const TypePtr& t);   // T<T>
SecType private_of(const TypePtr& t);  // T<Top>

// ---------------------------------------------------------------------------
// Terms

struct Literal {
  PrimKind kind = PrimKind::Unit;
  std::int64_t int_value = 0;
  bool bool_value = false;
  std::string string_value;

  static Literal of_int(std::int64_t v);
  static Literal of_string(std::string v);
  static Literal of_bool(bool v);
  static Literal unit();

  friend bool operator==(const Literal& a, const Literal& b);
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct MethodDef {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
};

struct Expr {
  enum class Kind : std::uint8_t { Var, Lit, Obj, Invoke, Ascribe, If, Let };

  Kind kind = Kind::Var;
  std::size_t offset = 0;

  // Var: variable; Obj: self name; Invoke: method; Let: bound variable.
  std::string name;
  Literal lit;
  // Obj: ascribed self type; Ascribe: target type.
  SecType type;
  std::vector<MethodDef> methods;
  std::vector<TypePtr> type_args;
  // Invoke: receiver, args...; Ascribe: inner; If: cond, then, else;
  // Let: bound, body.
  std::vector<ExprPtr> children;

  bool is_value() const { return kind == Kind::Lit || kind == Kind::Obj; }
  const MethodDef* find_method(std::string_view method) const;

  const ExprPtr& receiver() const { return children.front(); }
};

ExprPtr make_var(std::string name, std::size_t offset = 0);
ExprPtr make_lit(Literal lit, std::size_t offset = 0);
ExprPtr make_object(std::string self_name, SecType type,
                    std::vector<MethodDef> methods, std::size_t offset = 0);
ExprPtr make_invoke(ExprPtr receiver, std::string method,
                    std::vector<TypePtr> type_args, std::vector<ExprPtr> args,
                    std::size_t offset = 0);
ExprPtr make_ascribe(ExprPtr inner, SecType type, std::size_t offset = 0);
ExprPtr make_if(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch,
                std::size_t offset = 0);
ExprPtr make_let(std::string name, ExprPtr bound, ExprPtr body,
                 std::size_t offset = 0);

// ---------------------------------------------------------------------------
// Environments

struct TypeVarBound {
  std::string name;
  TypePtr lower;
  TypePtr upper;
};

/// Delta: ordered bounded generic variables.
class TypeVarEnv {
 public:
  TypeVarEnv() = default;
  explicit TypeVarEnv(std::vector<TypeVarBound> entries)
      : entries_(std::move(entries)) {}

  const TypeVarBound* find(std::string_view name) const;
  /// Copy extended with `name`; an existing binding of `name` is replaced.
  TypeVarEnv extended(std::string name, TypePtr lower, TypePtr upper) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  const std::vector<TypeVarBound>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<TypeVarBound> entries_;
};

/// Gamma: ordered term variables.
class TermEnv {
 public:
  TermEnv() = default;
  explicit TermEnv(std::vector<std::pair<std::string, SecType>> entries)
      : entries_(std::move(entries)) {}

  const SecType* find(std::string_view name) const;
  /// Copy extended with `name`; later bindings shadow earlier ones.
  TermEnv extended(std::string name, SecType type) const;

  const std::vector<std::pair<std::string, SecType>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<std::string, SecType>> entries_;
};

/// Sigma: assumptions `alpha <: beta` and `P <: beta`.
struct SubAssumption {
  TypePtr left;  // SelfVar or Prim
  std::string right;
};

class SubAssumptions {
 public:
  bool holds(const Type& left, std::string_view right) const;
  /// Rejects a right-hand variable that already occurs in the environment.
  bool add(TypePtr left, std::string right);
  bool mentions(std::string_view var) const;
  const std::vector<SubAssumption>& entries() const { return entries_; }

 private:
  std::vector<SubAssumption> entries_;
};

// ---------------------------------------------------------------------------
// Substitution

std::set<std::string> free_type_vars(const TypePtr& t);
std::set<std::string> free_self_vars(const TypePtr& t);
std::set<std::string> free_type_vars(const SecType& s);
std::set<std::string> free_self_vars(const SecType& s);

TypePtr subst_type_var(const TypePtr& target, const TypePtr& actual,
                       std::string_view var);
SecType subst_type_var(const SecType& target, const TypePtr& actual,
                       std::string_view var);
MethodSig subst_type_var(const MethodSig& target, const TypePtr& actual,
                         std::string_view var);

TypePtr subst_self_var(const TypePtr& target, const TypePtr& replacement,
                       std::string_view self_name);
SecType subst_self_var(const SecType& target, const TypePtr& replacement,
                       std::string_view self_name);
MethodSig subst_self_var(const MethodSig& target, const TypePtr& replacement,
                         std::string_view self_name);

/// Rename a self binder occurrence: `alpha` becomes the variable `fresh`.
TypePtr rename_self_var(const TypePtr& target, std::string_view from,
                        std::string_view to);

/// Rename the i-th type parameter of a generic signature to `fresh` in every
/// position it scopes (later bounds, parameters, return).
MethodSig rename_type_param(const MethodSig& sig, std::size_t index,
                            const std::string& fresh);

/// Simultaneous substitution of closed values for term variables.
ExprPtr subst_term(const ExprPtr& body,
                   const std::vector<std::pair<std::string, ExprPtr>>& bindings);

/// Alpha-normalized rendering: binders are numbered by depth, free names are
/// kept. Two types are alpha-equal iff their canonical strings coincide.
std::string canonical(const TypePtr& t);
std::string canonical(const SecType& s);
std::string canonical(const MethodSig& m);

bool alpha_equal(const TypePtr& a, const TypePtr& b);
bool alpha_equal(const SecType& a, const SecType& b);
bool alpha_equal(const ExprPtr& a, const ExprPtr& b);

/// Smallest `base_k` (or `base` itself) not in `avoid`.
std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid);

}  // namespace gobsec
