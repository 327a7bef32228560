#include "gobsec/ast.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace gobsec {

std::string_view prim_name(PrimKind kind) {
  switch (kind) {
    case PrimKind::Int:
      return "Int";
    case PrimKind::String:
      return "String";
    case PrimKind::Bool:
      return "Bool";
    case PrimKind::Unit:
      return "Unit";
  }
  return "?";
}

std::optional<PrimKind> prim_from_name(std::string_view name) {
  if (name == "Int") return PrimKind::Int;
  if (name == "String") return PrimKind::String;
  if (name == "Bool") return PrimKind::Bool;
  if (name == "Unit") return PrimKind::Unit;
  return std::nullopt;
}

SecType SecType::faceted(TypePtr safety, TypePtr decl) {
  SecType s;
  s.kind = Kind::Faceted;
  s.safety = std::move(safety);
  s.decl = std::move(decl);
  return s;
}

SecType SecType::star(PrimKind kind) {
  SecType s;
  s.kind = Kind::PrimStar;
  s.safety = make_prim(kind);
  s.star_kind = kind;
  return s;
}

MethodSig MethodSig::generic(std::vector<TypeParam> type_params,
                             std::vector<SecType> params, SecType ret) {
  MethodSig m;
  m.kind = Kind::Generic;
  m.type_params = std::move(type_params);
  m.params = std::move(params);
  m.ret = std::move(ret);
  return m;
}

MethodSig MethodSig::prim(std::vector<PrimKind> params, PrimKind ret) {
  MethodSig m;
  m.kind = Kind::Prim;
  m.prim_params = std::move(params);
  m.prim_ret = ret;
  return m;
}

const MethodEntry* Type::find_method(std::string_view method) const {
  for (const auto& entry : methods) {
    if (entry.name == method) return &entry;
  }
  return nullptr;
}

TypePtr make_obj(std::string self_name, std::vector<MethodEntry> methods) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::Obj;
  t->name = std::move(self_name);
  t->methods = std::move(methods);
  return t;
}

TypePtr make_self_var(std::string name) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::SelfVar;
  t->name = std::move(name);
  return t;
}

TypePtr make_type_var(std::string name) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::TypeVar;
  t->name = std::move(name);
  return t;
}

TypePtr make_prim(PrimKind kind) {
  static const TypePtr kPrims[] = {
      [] {
        auto t = std::make_shared<Type>();
        t->kind = Type::Kind::Prim;
        t->prim = PrimKind::Int;
        return t;
      }(),
      [] {
        auto t = std::make_shared<Type>();
        t->kind = Type::Kind::Prim;
        t->prim = PrimKind::String;
        return t;
      }(),
      [] {
        auto t = std::make_shared<Type>();
        t->kind = Type::Kind::Prim;
        t->prim = PrimKind::Bool;
        return t;
      }(),
      [] {
        auto t = std::make_shared<Type>();
        t->kind = Type::Kind::Prim;
        t->prim = PrimKind::Unit;
        return t;
      }(),
  };
  return kPrims[static_cast<int>(kind)];
}

TypePtr top_type() {
  static const TypePtr kTop = make_obj("a", {});
  return kTop;
}

SecType public_of(const TypePtr& t) { return SecType::faceted(t, t); }
SecType private_of(const TypePtr& t) {
  return SecType::faceted(t, top_type());
}

Literal Literal::of_int(std::int64_t v) {
  Literal l;
  l.kind = PrimKind::Int;
  l.int_value = v;
  return l;
}

Literal Literal::of_string(std::string v) {
  Literal l;
  l.kind = PrimKind::String;
  l.string_value = std::move(v);
  return l;
}

Literal Literal::of_bool(bool v) {
  Literal l;
  l.kind = PrimKind::Bool;
  l.bool_value = v;
  return l;
}

Literal Literal::unit() { return Literal{}; }

bool operator==(const Literal& a, const Literal& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case PrimKind::Int:
      return a.int_value == b.int_value;
    case PrimKind::String:
      return a.string_value == b.string_value;
    case PrimKind::Bool:
      return a.bool_value == b.bool_value;
    case PrimKind::Unit:
      return true;
  }
  return false;
}

const MethodDef* Expr::find_method(std::string_view method) const {
  for (const auto& def : methods) {
    if (def.name == method) return &def;
  }
  return nullptr;
}

namespace {

std::shared_ptr<Expr> new_expr(Expr::Kind kind, std::size_t offset) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->offset = offset;
  return e;
}

}  // namespace

ExprPtr make_var(std::string name, std::size_t offset) {
  auto e = new_expr(Expr::Kind::Var, offset);
  e->name = std::move(name);
  return e;
}

ExprPtr make_lit(Literal lit, std::size_t offset) {
  auto e = new_expr(Expr::Kind::Lit, offset);
  e->lit = std::move(lit);
  return e;
}

ExprPtr make_object(std::string self_name, SecType type,
                    std::vector<MethodDef> methods, std::size_t offset) {
  auto e = new_expr(Expr::Kind::Obj, offset);
  e->name = std::move(self_name);
  e->type = std::move(type);
  e->methods = std::move(methods);
  return e;
}

ExprPtr make_invoke(ExprPtr receiver, std::string method,
                    std::vector<TypePtr> type_args, std::vector<ExprPtr> args,
                    std::size_t offset) {
  auto e = new_expr(Expr::Kind::Invoke, offset);
  e->name = std::move(method);
  e->type_args = std::move(type_args);
  e->children.reserve(args.size() + 1);
  e->children.push_back(std::move(receiver));
  for (auto& a : args) e->children.push_back(std::move(a));
  return e;
}

ExprPtr make_ascribe(ExprPtr inner, SecType type, std::size_t offset) {
  auto e = new_expr(Expr::Kind::Ascribe, offset);
  e->type = std::move(type);
  e->children.push_back(std::move(inner));
  return e;
}

ExprPtr make_if(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch,
                std::size_t offset) {
  auto e = new_expr(Expr::Kind::If, offset);
  e->children = {std::move(cond), std::move(then_branch),
                 std::move(else_branch)};
  return e;
}

ExprPtr make_let(std::string name, ExprPtr bound, ExprPtr body,
                 std::size_t offset) {
  auto e = new_expr(Expr::Kind::Let, offset);
  e->name = std::move(name);
  e->children = {std::move(bound), std::move(body)};
  return e;
}

// ---------------------------------------------------------------------------
// Environments

const TypeVarBound* TypeVarEnv::find(std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->name == name) return &*it;
  }
  return nullptr;
}

TypeVarEnv TypeVarEnv::extended(std::string name, TypePtr lower,
                                TypePtr upper) const {
  TypeVarEnv out = *this;
  for (auto& e : out.entries_) {
    if (e.name == name) {
      e.lower = std::move(lower);
      e.upper = std::move(upper);
      return out;
    }
  }
  out.entries_.push_back({std::move(name), std::move(lower), std::move(upper)});
  return out;
}

const SecType* TermEnv::find(std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == name) return &it->second;
  }
  return nullptr;
}

TermEnv TermEnv::extended(std::string name, SecType type) const {
  TermEnv out = *this;
  out.entries_.emplace_back(std::move(name), std::move(type));
  return out;
}

bool SubAssumptions::holds(const Type& left, std::string_view right) const {
  for (const auto& a : entries_) {
    if (a.right != right) continue;
    if (left.is_self_var() && a.left->is_self_var() &&
        a.left->name == left.name)
      return true;
    if (left.is_prim() && a.left->is_prim() && a.left->prim == left.prim)
      return true;
  }
  return false;
}

bool SubAssumptions::mentions(std::string_view var) const {
  for (const auto& a : entries_) {
    if (a.right == var) return true;
    if (a.left->is_self_var() && a.left->name == var) return true;
  }
  return false;
}

bool SubAssumptions::add(TypePtr left, std::string right) {
  if (mentions(right)) return false;
  if (left->is_self_var() && mentions(left->name)) return false;
  entries_.push_back({std::move(left), std::move(right)});
  return true;
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void collect_free(const TypePtr& t, bool self_kind,
                  std::vector<std::string>& bound, std::set<std::string>& out);

void collect_free(const SecType& s, bool self_kind,
                  std::vector<std::string>& bound, std::set<std::string>& out) {
  if (s.is_star()) return;
  collect_free(s.safety, self_kind, bound, out);
  collect_free(s.decl, self_kind, bound, out);
}

void collect_free(const MethodSig& m, bool self_kind,
                  std::vector<std::string>& bound, std::set<std::string>& out) {
  if (m.is_prim()) return;
  std::size_t pushed = 0;
  for (const auto& tp : m.type_params) {
    collect_free(tp.lower, self_kind, bound, out);
    collect_free(tp.upper, self_kind, bound, out);
    if (!self_kind) {
      bound.push_back(tp.name);
      ++pushed;
    }
  }
  for (const auto& p : m.params) collect_free(p, self_kind, bound, out);
  collect_free(m.ret, self_kind, bound, out);
  bound.resize(bound.size() - pushed);
}

void collect_free(const TypePtr& t, bool self_kind,
                  std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case Type::Kind::Prim:
      return;
    case Type::Kind::SelfVar:
      if (self_kind &&
          std::find(bound.begin(), bound.end(), t->name) == bound.end())
        out.insert(t->name);
      return;
    case Type::Kind::TypeVar:
      if (!self_kind &&
          std::find(bound.begin(), bound.end(), t->name) == bound.end())
        out.insert(t->name);
      return;
    case Type::Kind::Obj:
      if (self_kind) bound.push_back(t->name);
      for (const auto& m : t->methods) collect_free(m.sig, self_kind, bound, out);
      if (self_kind) bound.pop_back();
      return;
  }
}

}  // namespace

std::set<std::string> free_type_vars(const TypePtr& t) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(t, false, bound, out);
  return out;
}

std::set<std::string> free_self_vars(const TypePtr& t) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(t, true, bound, out);
  return out;
}

std::set<std::string> free_type_vars(const SecType& s) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(s, false, bound, out);
  return out;
}

std::set<std::string> free_self_vars(const SecType& s) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(s, true, bound, out);
  return out;
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int k = 1;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (!avoid.count(candidate)) return candidate;
  }
}

// ---------------------------------------------------------------------------
// Capture-avoiding type substitution

namespace {

class TypeSubstituter {
 public:
  using Map = std::map<std::string, TypePtr, std::less<>>;

  TypeSubstituter(Map self_map, Map tvar_map)
      : self_map_(std::move(self_map)), tvar_map_(std::move(tvar_map)) {
    refresh_free();
  }

  TypePtr apply(const TypePtr& t) const {
    if (self_map_.empty() && tvar_map_.empty()) return t;
    switch (t->kind) {
      case Type::Kind::Prim:
        return t;
      case Type::Kind::SelfVar: {
        auto it = self_map_.find(t->name);
        return it == self_map_.end() ? t : it->second;
      }
      case Type::Kind::TypeVar: {
        auto it = tvar_map_.find(t->name);
        return it == tvar_map_.end() ? t : it->second;
      }
      case Type::Kind::Obj:
        return apply_obj(t);
    }
    return t;
  }

  SecType apply(const SecType& s) const {
    if (s.is_star()) return s;
    auto safety = apply(s.safety);
    auto decl = apply(s.decl);
    if (safety == s.safety && decl == s.decl) return s;
    return SecType::faceted(std::move(safety), std::move(decl));
  }

  MethodSig apply(const MethodSig& m) const {
    if (m.is_prim() || (self_map_.empty() && tvar_map_.empty())) return m;
    TypeSubstituter inner = *this;
    MethodSig out = m;
    for (auto& tp : out.type_params) {
      tp.lower = inner.apply(tp.lower);
      tp.upper = inner.apply(tp.upper);
      inner.tvar_map_.erase(tp.name);
      if (inner.repl_tvar_fv_.count(tp.name)) {
        std::set<std::string> avoid = inner.repl_tvar_fv_;
        for (const auto& [k, v] : inner.tvar_map_) avoid.insert(k);
        auto body_fv = free_type_vars_of_sig(m);
        avoid.insert(body_fv.begin(), body_fv.end());
        std::string renamed = fresh_name(tp.name, avoid);
        inner.tvar_map_[tp.name] = make_type_var(renamed);
        tp.name = renamed;
      }
      inner.refresh_free();
    }
    for (auto& p : out.params) p = inner.apply(p);
    out.ret = inner.apply(out.ret);
    return out;
  }

 private:
  static std::set<std::string> free_type_vars_of_sig(const MethodSig& m) {
    std::set<std::string> out;
    for (const auto& tp : m.type_params) {
      out.insert(tp.name);
      auto a = free_type_vars(tp.lower);
      auto b = free_type_vars(tp.upper);
      out.insert(a.begin(), a.end());
      out.insert(b.begin(), b.end());
    }
    for (const auto& p : m.params) {
      auto f = free_type_vars(p);
      out.insert(f.begin(), f.end());
    }
    auto f = free_type_vars(m.ret);
    out.insert(f.begin(), f.end());
    return out;
  }

  TypePtr apply_obj(const TypePtr& t) const {
    TypeSubstituter inner = *this;
    inner.self_map_.erase(t->name);
    if (inner.self_map_.empty() && inner.tvar_map_.empty()) return t;
    std::string binder = t->name;
    if (inner.repl_self_fv_.count(binder)) {
      std::set<std::string> avoid = inner.repl_self_fv_;
      for (const auto& [k, v] : inner.self_map_) avoid.insert(k);
      auto body_fv = free_self_vars(t);
      avoid.insert(body_fv.begin(), body_fv.end());
      binder = fresh_name(binder, avoid);
      inner.self_map_[t->name] = make_self_var(binder);
    }
    inner.refresh_free();
    std::vector<MethodEntry> methods;
    methods.reserve(t->methods.size());
    bool changed = binder != t->name;
    for (const auto& m : t->methods) {
      MethodSig sig = inner.apply(m.sig);
      if (!changed && canonical(sig) != canonical(m.sig)) changed = true;
      methods.push_back({m.name, std::move(sig)});
    }
    if (!changed) return t;
    return make_obj(binder, std::move(methods));
  }

  void refresh_free() {
    repl_self_fv_.clear();
    repl_tvar_fv_.clear();
    auto add = [&](const TypePtr& r) {
      auto s = free_self_vars(r);
      repl_self_fv_.insert(s.begin(), s.end());
      auto v = free_type_vars(r);
      repl_tvar_fv_.insert(v.begin(), v.end());
    };
    for (const auto& [k, v] : self_map_) add(v);
    for (const auto& [k, v] : tvar_map_) add(v);
  }

  Map self_map_;
  Map tvar_map_;
  std::set<std::string> repl_self_fv_;
  std::set<std::string> repl_tvar_fv_;
};

TypeSubstituter tvar_substituter(const TypePtr& actual, std::string_view var) {
  TypeSubstituter::Map m;
  m.emplace(std::string(var), actual);
  return TypeSubstituter({}, std::move(m));
}

TypeSubstituter self_substituter(const TypePtr& actual, std::string_view var) {
  TypeSubstituter::Map m;
  m.emplace(std::string(var), actual);
  return TypeSubstituter(std::move(m), {});
}

}  // namespace

TypePtr subst_type_var(const TypePtr& target, const TypePtr& actual,
                       std::string_view var) {
  return tvar_substituter(actual, var).apply(target);
}
SecType subst_type_var(const SecType& target, const TypePtr& actual,
                       std::string_view var) {
  return tvar_substituter(actual, var).apply(target);
}
MethodSig subst_type_var(const MethodSig& target, const TypePtr& actual,
                         std::string_view var) {
  return tvar_substituter(actual, var).apply(target);
}

TypePtr subst_self_var(const TypePtr& target, const TypePtr& replacement,
                       std::string_view self_name) {
  return self_substituter(replacement, self_name).apply(target);
}
SecType subst_self_var(const SecType& target, const TypePtr& replacement,
                       std::string_view self_name) {
  return self_substituter(replacement, self_name).apply(target);
}
MethodSig subst_self_var(const MethodSig& target, const TypePtr& replacement,
                         std::string_view self_name) {
  return self_substituter(replacement, self_name).apply(target);
}

TypePtr rename_self_var(const TypePtr& target, std::string_view from,
                        std::string_view to) {
  return subst_self_var(target, make_self_var(std::string(to)), from);
}

MethodSig rename_type_param(const MethodSig& sig, std::size_t index,
                            const std::string& fresh) {
  MethodSig out = sig;
  const std::string old = out.type_params[index].name;
  out.type_params[index].name = fresh;
  if (old == fresh) return out;
  auto var = make_type_var(fresh);
  for (std::size_t j = index + 1; j < out.type_params.size(); ++j) {
    if (out.type_params[j].name == old) return out;
    out.type_params[j].lower = subst_type_var(out.type_params[j].lower, var, old);
    out.type_params[j].upper = subst_type_var(out.type_params[j].upper, var, old);
  }
  for (auto& p : out.params) p = subst_type_var(p, var, old);
  out.ret = subst_type_var(out.ret, var, old);
  return out;
}

// ---------------------------------------------------------------------------
// Term substitution

namespace {

using Bindings = std::vector<std::pair<std::string, ExprPtr>>;

Bindings without(const Bindings& b, const std::string& name) {
  Bindings out;
  for (const auto& p : b) {
    if (p.first != name) out.push_back(p);
  }
  return out;
}

Bindings without_all(const Bindings& b, const std::vector<std::string>& names) {
  Bindings out;
  for (const auto& p : b) {
    if (std::find(names.begin(), names.end(), p.first) == names.end())
      out.push_back(p);
  }
  return out;
}

ExprPtr subst_rec(const ExprPtr& e, const Bindings& b) {
  if (b.empty()) return e;
  switch (e->kind) {
    case Expr::Kind::Var:
      for (const auto& [name, value] : b) {
        if (name == e->name) return value;
      }
      return e;
    case Expr::Kind::Lit:
      return e;
    case Expr::Kind::Obj: {
      Bindings inner = without(b, e->name);
      if (inner.empty()) return e;
      auto out = std::make_shared<Expr>(*e);
      bool changed = false;
      for (auto& def : out->methods) {
        auto body = subst_rec(def.body, without_all(inner, def.params));
        if (body != def.body) {
          def.body = std::move(body);
          changed = true;
        }
      }
      return changed ? ExprPtr(out) : e;
    }
    case Expr::Kind::Let: {
      auto bound = subst_rec(e->children[0], b);
      auto body = subst_rec(e->children[1], without(b, e->name));
      if (bound == e->children[0] && body == e->children[1]) return e;
      auto out = std::make_shared<Expr>(*e);
      out->children = {std::move(bound), std::move(body)};
      return out;
    }
    case Expr::Kind::Invoke:
    case Expr::Kind::Ascribe:
    case Expr::Kind::If: {
      std::vector<ExprPtr> children;
      children.reserve(e->children.size());
      bool changed = false;
      for (const auto& c : e->children) {
        children.push_back(subst_rec(c, b));
        changed = changed || children.back() != c;
      }
      if (!changed) return e;
      auto out = std::make_shared<Expr>(*e);
      out->children = std::move(children);
      return out;
    }
  }
  return e;
}

}  // namespace

ExprPtr subst_term(const ExprPtr& body, const Bindings& bindings) {
  return subst_rec(body, bindings);
}

// ---------------------------------------------------------------------------
// Canonical forms

namespace {

class Canonicalizer {
 public:
  void type(const TypePtr& t) {
    switch (t->kind) {
      case Type::Kind::Prim:
        out_ += prim_name(t->prim);
        return;
      case Type::Kind::SelfVar:
        out_ += lookup(self_, t->name, '#', '$');
        return;
      case Type::Kind::TypeVar:
        out_ += lookup(tvar_, t->name, '^', '%');
        return;
      case Type::Kind::Obj: {
        self_.push_back(t->name);
        std::vector<const MethodEntry*> sorted;
        for (const auto& m : t->methods) sorted.push_back(&m);
        std::sort(sorted.begin(), sorted.end(),
                  [](auto* a, auto* b) { return a->name < b->name; });
        out_ += "O[";
        for (const auto* m : sorted) {
          out_ += m->name;
          out_ += ':';
          sig(m->sig);
          out_ += ';';
        }
        out_ += ']';
        self_.pop_back();
        return;
      }
    }
  }

  void sec(const SecType& s) {
    if (s.is_star()) {
      out_ += '*';
      out_ += prim_name(s.star_kind);
      return;
    }
    out_ += "F(";
    type(s.safety);
    out_ += '|';
    type(s.decl);
    out_ += ')';
  }

  void sig(const MethodSig& m) {
    if (m.is_prim()) {
      out_ += "P(";
      for (auto k : m.prim_params) {
        out_ += prim_name(k);
        out_ += ',';
      }
      out_ += ")->";
      out_ += prim_name(m.prim_ret);
      return;
    }
    std::size_t pushed = 0;
    out_ += '<';
    for (const auto& tp : m.type_params) {
      type(tp.lower);
      out_ += "..";
      type(tp.upper);
      out_ += ',';
      tvar_.push_back(tp.name);
      ++pushed;
    }
    out_ += ">(";
    for (const auto& p : m.params) {
      sec(p);
      out_ += ',';
    }
    out_ += ")->";
    sec(m.ret);
    tvar_.resize(tvar_.size() - pushed);
  }

  std::string take() { return std::move(out_); }

 private:
  static std::string lookup(const std::vector<std::string>& scope,
                            const std::string& name, char bound_tag,
                            char free_tag) {
    for (std::size_t i = scope.size(); i-- > 0;) {
      if (scope[i] == name) return bound_tag + std::to_string(i);
    }
    return free_tag + name;
  }

  std::string out_;
  std::vector<std::string> self_;
  std::vector<std::string> tvar_;
};

}  // namespace

std::string canonical(const TypePtr& t) {
  Canonicalizer c;
  c.type(t);
  return c.take();
}

std::string canonical(const SecType& s) {
  Canonicalizer c;
  c.sec(s);
  return c.take();
}

std::string canonical(const MethodSig& m) {
  Canonicalizer c;
  c.sig(m);
  return c.take();
}

bool alpha_equal(const TypePtr& a, const TypePtr& b) {
  return a == b || canonical(a) == canonical(b);
}

bool alpha_equal(const SecType& a, const SecType& b) {
  return canonical(a) == canonical(b);
}

namespace {

using NameMap = std::vector<std::pair<std::string, std::string>>;

bool names_match(const NameMap& env, const std::string& a,
                 const std::string& b) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == a || it->second == b)
      return it->first == a && it->second == b;
  }
  return a == b;
}

bool expr_alpha(const ExprPtr& a, const ExprPtr& b, NameMap& env) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Var:
      return names_match(env, a->name, b->name);
    case Expr::Kind::Lit:
      return a->lit == b->lit;
    case Expr::Kind::Obj: {
      if (!alpha_equal(a->type, b->type)) return false;
      if (a->methods.size() != b->methods.size()) return false;
      for (const auto& ma : a->methods) {
        const MethodDef* mb = b->find_method(ma.name);
        if (!mb || mb->params.size() != ma.params.size()) return false;
        env.emplace_back(a->name, b->name);
        for (std::size_t i = 0; i < ma.params.size(); ++i)
          env.emplace_back(ma.params[i], mb->params[i]);
        bool ok = expr_alpha(ma.body, mb->body, env);
        env.resize(env.size() - ma.params.size() - 1);
        if (!ok) return false;
      }
      return true;
    }
    case Expr::Kind::Let: {
      if (!expr_alpha(a->children[0], b->children[0], env)) return false;
      env.emplace_back(a->name, b->name);
      bool ok = expr_alpha(a->children[1], b->children[1], env);
      env.pop_back();
      return ok;
    }
    case Expr::Kind::Invoke:
      if (a->name != b->name || a->type_args.size() != b->type_args.size())
        return false;
      for (std::size_t i = 0; i < a->type_args.size(); ++i) {
        if (!alpha_equal(a->type_args[i], b->type_args[i])) return false;
      }
      [[fallthrough]];
    case Expr::Kind::Ascribe:
    case Expr::Kind::If:
      if (a->kind == Expr::Kind::Ascribe && !alpha_equal(a->type, b->type))
        return false;
      if (a->children.size() != b->children.size()) return false;
      for (std::size_t i = 0; i < a->children.size(); ++i) {
        if (!expr_alpha(a->children[i], b->children[i], env)) return false;
      }
      return true;
  }
  return false;
}

}  // namespace

bool alpha_equal(const ExprPtr& a, const ExprPtr& b) {
  NameMap env;
  return expr_alpha(a, b, env);
}

}  // namespace gobsec
