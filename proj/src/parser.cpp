#include "gobsec/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

namespace gobsec {

std::string_view expectation_name(Expectation e) {
  switch (e) {
    case Expectation::Secure:
      return "secure";
    case Expectation::Insecure:
      return "insecure";
    case Expectation::IllTyped:
      return "illtyped";
    case Expectation::None:
      break;
  }
  return "none";
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Id, Int, Str, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t offset = 0;
};

const std::set<std::string, std::less<>> kKeywords = {
    "type", "tvar", "var",  "expect", "new",  "if",  "then", "else", "let",
    "in",   "true", "false", "unit",  "Obj",  "Top", "Int",  "String",
    "Bool", "Unit"};

bool is_keyword(std::string_view s) { return kKeywords.count(s) > 0; }

[[noreturn]] void fail_at(std::string_view src, std::size_t offset,
                          const std::string& message) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < offset && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  throw ParseError(std::to_string(line) + ":" + std::to_string(col) + ": " + message,
                   offset, line, col);
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.offset = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Tok::Id;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else if (c == '"') {
      std::size_t j = i + 1;
      std::string value;
      while (true) {
        if (j >= n) fail_at(src, i, "unterminated string literal");
        char d = src[j];
        if (d == '"') break;
        if (d == '\\') {
          if (j + 1 >= n) fail_at(src, j, "bad escape");
          char e = src[j + 1];
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            default: fail_at(src, j, std::string("unknown escape \\") + e);
          }
          j += 2;
          continue;
        }
        value += d;
        ++j;
      }
      t.kind = Tok::Str;
      t.text = std::move(value);
      i = j + 1;
    } else {
      static const char* kSyms[] = {"..", "->", "=>", "(", ")", "[", "]", "{", "}",
                                    "<",  ">",  ",",  ":", ".", "!", "?", "*", "=",
                                    "+",  "-",  ";"};
      bool matched = false;
      for (const char* s : kSyms) {
        std::string_view sv(s);
        if (src.substr(i, sv.size()) == sv) {
          t.kind = Tok::Sym;
          t.text = std::string(sv);
          i += sv.size();
          matched = true;
          break;
        }
      }
      if (!matched) fail_at(src, i, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.offset = n;
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Raw syntax

struct RawType;
using RawTypeP = std::shared_ptr<const RawType>;

struct RawSec {
  bool star = false;
  PrimKind star_kind = PrimKind::Unit;
  RawTypeP safety;
  RawTypeP decl;  // null: same as safety (public); decl_top: private
  bool decl_top = false;
  std::size_t offset = 0;
};

struct RawTParam {
  std::string name;
  RawTypeP lower;  // null: Top
  RawTypeP upper;
};

struct RawSig {
  std::string name;
  std::vector<RawTParam> tparams;
  std::vector<RawSec> params;
  RawSec ret;
  std::size_t offset = 0;
};

struct RawType {
  enum class Kind { Obj, Named, Prim, Top } kind = Kind::Top;
  std::string name;
  PrimKind prim = PrimKind::Unit;
  std::vector<RawTypeP> args;
  std::vector<RawSig> sigs;
  std::size_t offset = 0;
};

struct RawExpr;
using RawExprP = std::shared_ptr<const RawExpr>;

struct RawMethod {
  std::string name;
  std::vector<std::string> params;
  RawExprP body;
  std::size_t offset = 0;
};

struct RawExpr {
  Expr::Kind kind = Expr::Kind::Var;
  std::string name;
  Literal lit;
  RawSec type;
  std::vector<RawMethod> methods;
  std::vector<RawTypeP> targs;
  std::vector<RawExprP> children;
  std::size_t offset = 0;
};

struct RawAlias {
  std::string name;
  std::vector<RawTParam> params;
  RawTypeP body;
  std::size_t offset = 0;
};

}  // namespace

struct AliasTable {
  std::vector<RawAlias> aliases;
  std::string source;  // owning copy for diagnostics

  const RawAlias* find(std::string_view name) const {
    for (const auto& a : aliases) {
      if (a.name == name) return &a;
    }
    return nullptr;
  }
};

namespace {

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view src, std::map<std::string, std::size_t> arities)
      : src_(src), toks_(lex(src)), arities_(std::move(arities)) {}

  static std::map<std::string, std::size_t> scan_arities(const std::vector<Token>& toks) {
    std::map<std::string, std::size_t> out;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
      if (toks[i].kind != Tok::Id || toks[i].text != "type") continue;
      if (toks[i + 1].kind != Tok::Id) continue;
      std::size_t arity = 0;
      std::size_t j = i + 2;
      if (j < toks.size() && toks[j].text == "<") {
        int depth = 0;
        arity = 1;
        for (; j < toks.size(); ++j) {
          if (toks[j].text == "<") ++depth;
          if (toks[j].text == ">" && --depth == 0) break;
          if (toks[j].text == "," && depth == 1) ++arity;
        }
      }
      out[toks[i + 1].text] = arity;
    }
    return out;
  }

  const std::vector<Token>& tokens() const { return toks_; }

  bool at_end() const { return peek().kind == Tok::End; }
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool is_sym(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }
  bool is_word(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Id && peek(k).text == s;
  }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    fail_at(src_, t.offset, message + " (found " + found + ")");
  }

  void expect_sym(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "'");
    next();
  }
  void expect_word(std::string_view s) {
    if (!is_word(s)) fail("expected '" + std::string(s) + "'");
    next();
  }
  std::string ident(const char* what) {
    if (peek().kind != Tok::Id || is_keyword(peek().text))
      fail(std::string("expected ") + what);
    return next().text;
  }
  std::string method_name() {
    if (peek().kind == Tok::Id) return next().text;
    if (is_sym("+") || is_sym("-") || is_sym("*")) return next().text;
    fail("expected method name");
  }

  // type ::= Obj(ID)[sigs] | [sigs] | prim | Top | ID targs?
  RawTypeP type() {
    auto t = std::make_shared<RawType>();
    t->offset = peek().offset;
    if (is_word("Obj")) {
      next();
      expect_sym("(");
      t->name = ident("self variable");
      expect_sym(")");
      t->kind = RawType::Kind::Obj;
      t->sigs = record();
    } else if (is_sym("[")) {
      t->kind = RawType::Kind::Obj;
      t->name = "a";
      t->sigs = record();
    } else if (is_word("Top")) {
      next();
      t->kind = RawType::Kind::Top;
    } else if (peek().kind == Tok::Id && prim_from_name(peek().text)) {
      t->kind = RawType::Kind::Prim;
      t->prim = *prim_from_name(next().text);
    } else {
      t->kind = RawType::Kind::Named;
      t->name = ident("type");
      auto it = arities_.find(t->name);
      if (it != arities_.end() && it->second > 0 && is_sym("<")) {
        next();
        t->args.push_back(type());
        while (is_sym(",")) {
          next();
          t->args.push_back(type());
        }
        expect_sym(">");
      }
    }
    return t;
  }

  std::vector<RawSig> record() {
    expect_sym("[");
    std::vector<RawSig> sigs;
    while (!is_sym("]")) {
      sigs.push_back(sig());
      if (is_sym(",") || is_sym(";")) {
        next();
      } else if (!is_sym("]")) {
        fail("expected ',' or ']'");
      }
    }
    next();
    return sigs;
  }

  std::vector<RawTParam> tparams(bool require_bounds) {
    std::vector<RawTParam> out;
    if (!is_sym("<")) return out;
    next();
    while (true) {
      RawTParam tp;
      tp.name = ident("type parameter");
      if (is_sym(":")) {
        next();
        tp.lower = type();
        expect_sym("..");
        tp.upper = type();
      } else if (require_bounds) {
        fail("type parameter " + tp.name + " needs bounds (" + tp.name + ": A..B)");
      }
      out.push_back(std::move(tp));
      if (is_sym(",")) {
        next();
        continue;
      }
      expect_sym(">");
      return out;
    }
  }

  RawSig sig() {
    RawSig s;
    s.offset = peek().offset;
    s.name = method_name();
    s.tparams = tparams(true);
    expect_sym(":");
    s.params.push_back(sectype(true));
    while (is_sym("*")) {
      next();
      s.params.push_back(sectype(true));
    }
    expect_sym("->");
    s.ret = sectype(true);
    bool any_star = s.ret.star;
    bool all_star = s.ret.star;
    for (const auto& p : s.params) {
      any_star = any_star || p.star;
      all_star = all_star && p.star;
    }
    if (any_star && !all_star) fail_at(src_, s.offset, "mixed primitive signature");
    if (all_star && !s.tparams.empty())
      fail_at(src_, s.offset, "primitive signature cannot take type parameters");
    return s;
  }

  // sectype ::= type "<" type ">" | type "!" | type "?" | prim "<*>"
  RawSec sectype(bool allow_star = false) {
    RawSec s;
    s.offset = peek().offset;
    s.safety = type();
    if (is_sym("!")) {
      next();
    } else if (is_sym("?")) {
      next();
      s.decl_top = true;
    } else if (is_sym("<")) {
      next();
      if (is_sym("*")) {
        if (!allow_star || s.safety->kind != RawType::Kind::Prim)
          fail("star facet is only allowed on primitives inside signatures");
        next();
        s.star = true;
        s.star_kind = s.safety->prim;
      } else {
        s.decl = type();
      }
      expect_sym(">");
    } else {
      fail("expected security facet ('!', '?' or '<U>')");
    }
    return s;
  }

  // ---- expressions

  RawExprP expr() {
    if (is_word("if")) {
      auto e = std::make_shared<RawExpr>();
      e->kind = Expr::Kind::If;
      e->offset = next().offset;
      auto c = expr();
      expect_word("then");
      auto t = expr();
      expect_word("else");
      auto f = expr();
      e->children = {c, t, f};
      return e;
    }
    if (is_word("let")) {
      auto e = std::make_shared<RawExpr>();
      e->kind = Expr::Kind::Let;
      e->offset = next().offset;
      e->name = ident("let variable");
      expect_sym("=");
      auto bound = expr();
      expect_word("in");
      auto body = expr();
      e->children = {bound, body};
      return e;
    }
    return postfix();
  }

  RawExprP postfix() {
    RawExprP e = primary();
    while (is_sym(".")) {
      auto inv = std::make_shared<RawExpr>();
      inv->kind = Expr::Kind::Invoke;
      inv->offset = next().offset;
      inv->name = method_name();
      if (is_sym("<")) {
        next();
        inv->targs.push_back(type());
        while (is_sym(",")) {
          next();
          inv->targs.push_back(type());
        }
        expect_sym(">");
      }
      expect_sym("(");
      inv->children.push_back(e);
      if (is_sym(")")) {
        auto u = std::make_shared<RawExpr>();
        u->kind = Expr::Kind::Lit;
        u->lit = Literal::unit();
        u->offset = peek().offset;
        inv->children.push_back(u);
      } else {
        inv->children.push_back(expr());
        while (is_sym(",")) {
          next();
          inv->children.push_back(expr());
        }
      }
      expect_sym(")");
      e = inv;
    }
    return e;
  }

  RawExprP primary() {
    auto e = std::make_shared<RawExpr>();
    e->offset = peek().offset;
    const Token& t = peek();
    if (t.kind == Tok::Int || (is_sym("-") && peek(1).kind == Tok::Int)) {
      bool neg = is_sym("-");
      if (neg) next();
      Token num = next();
      std::uint64_t mag = 0;
      auto [p, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), mag);
      (void)p;
      std::uint64_t limit = neg ? (1ULL << 63) : (1ULL << 63) - 1;
      if (ec != std::errc() || mag > limit)
        fail_at(src_, num.offset, "integer literal out of range");
      std::int64_t v = neg ? static_cast<std::int64_t>(0 - mag) : static_cast<std::int64_t>(mag);
      e->kind = Expr::Kind::Lit;
      e->lit = Literal::of_int(v);
      return e;
    }
    if (t.kind == Tok::Str) {
      e->kind = Expr::Kind::Lit;
      e->lit = Literal::of_string(next().text);
      return e;
    }
    if (is_word("true") || is_word("false")) {
      e->kind = Expr::Kind::Lit;
      e->lit = Literal::of_bool(next().text == "true");
      return e;
    }
    if (is_word("unit")) {
      next();
      e->kind = Expr::Kind::Lit;
      e->lit = Literal::unit();
      return e;
    }
    if (is_word("new")) {
      next();
      expect_sym("{");
      e->kind = Expr::Kind::Obj;
      e->name = ident("self name");
      expect_sym(":");
      e->type = sectype();
      std::set<std::string> seen;
      while (!is_sym("}")) {
        RawMethod m;
        m.offset = peek().offset;
        m.name = method_name();
        if (!seen.insert(m.name).second)
          fail_at(src_, m.offset, "duplicate method definition " + m.name);
        expect_sym("(");
        if (is_sym(")")) {
          m.params.push_back("_");
        } else {
          m.params.push_back(ident("parameter"));
          while (is_sym(",")) {
            next();
            m.params.push_back(ident("parameter"));
          }
        }
        expect_sym(")");
        for (std::size_t i = 0; i < m.params.size(); ++i) {
          if (m.params[i] == e->name && m.params[i] != "_")
            fail_at(src_, m.offset, "parameter shadows self name " + e->name);
          for (std::size_t j = 0; j < i; ++j) {
            if (m.params[i] == m.params[j])
              fail_at(src_, m.offset, "duplicate parameter " + m.params[i]);
          }
        }
        expect_sym("=>");
        m.body = expr();
        if (is_sym(",") || is_sym(";")) next();
        e->methods.push_back(std::move(m));
      }
      next();
      return e;
    }
    if (is_sym("(")) {
      next();
      auto inner = expr();
      if (is_sym(":")) {
        next();
        e->kind = Expr::Kind::Ascribe;
        e->type = sectype();
        e->children.push_back(inner);
        expect_sym(")");
        return e;
      }
      expect_sym(")");
      return inner;
    }
    if (t.kind == Tok::Id && !is_keyword(t.text)) {
      e->kind = Expr::Kind::Var;
      e->name = next().text;
      return e;
    }
    fail("expected expression");
  }

  std::string_view src() const { return src_; }

 private:
  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, std::size_t> arities_;
};

// ---------------------------------------------------------------------------
// Resolution: aliases, scoping, recursive references

class Resolver {
 public:
  Resolver(const AliasTable& aliases, std::set<std::string> tvars, std::string_view src)
      : aliases_(aliases), tvars_(std::move(tvars)), src_(src) {}

  TypePtr type(const RawType& raw) {
    switch (raw.kind) {
      case RawType::Kind::Top:
        return top_type();
      case RawType::Kind::Prim:
        return make_prim(raw.prim);
      case RawType::Kind::Obj:
        return obj(raw, nullptr);
      case RawType::Kind::Named:
        return named(raw);
    }
    return top_type();
  }

  SecType sec(const RawSec& raw) {
    if (raw.star) return SecType::star(raw.star_kind);
    TypePtr safety = type(*raw.safety);
    if (raw.decl_top) return SecType::faceted(safety, top_type());
    if (!raw.decl) return SecType::faceted(safety, safety);
    return SecType::faceted(safety, type(*raw.decl));
  }

  MethodSig sig(const RawSig& raw) {
    if (!raw.params.empty() && raw.params.front().star) {
      std::vector<PrimKind> ps;
      for (const auto& p : raw.params) ps.push_back(p.star_kind);
      return MethodSig::prim(std::move(ps), raw.ret.star_kind);
    }
    std::set<std::string> captured = alias_arg_type_vars();
    std::vector<TypeParam> tps;
    std::size_t pushed = 0;
    std::set<std::string> names;
    for (const auto& tp : raw.tparams) {
      if (!names.insert(tp.name).second)
        fail_at(src_, raw.offset, "duplicate type parameter " + tp.name);
      TypeParam out;
      out.lower = tp.lower ? type(*tp.lower) : top_type();
      out.upper = tp.upper ? type(*tp.upper) : top_type();
      out.name = captured.count(tp.name) ? fresh_name(tp.name, captured) : tp.name;
      scope_.push_back({Entry::Kind::TParam, tp.name, make_type_var(out.name)});
      ++pushed;
      tps.push_back(std::move(out));
    }
    std::vector<SecType> params;
    for (const auto& p : raw.params) params.push_back(sec(p));
    SecType ret = sec(raw.ret);
    scope_.resize(scope_.size() - pushed);
    return MethodSig::generic(std::move(tps), std::move(params), std::move(ret));
  }

  ExprPtr expr(const RawExpr& raw) {
    switch (raw.kind) {
      case Expr::Kind::Var:
        return make_var(raw.name, raw.offset);
      case Expr::Kind::Lit:
        return make_lit(raw.lit, raw.offset);
      case Expr::Kind::Ascribe:
        return make_ascribe(expr(*raw.children[0]), sec(raw.type), raw.offset);
      case Expr::Kind::If:
        return make_if(expr(*raw.children[0]), expr(*raw.children[1]),
                       expr(*raw.children[2]), raw.offset);
      case Expr::Kind::Let:
        return make_let(raw.name, expr(*raw.children[0]), expr(*raw.children[1]),
                        raw.offset);
      case Expr::Kind::Invoke: {
        std::vector<TypePtr> targs;
        for (const auto& t : raw.targs) targs.push_back(type(*t));
        ExprPtr recv = expr(*raw.children[0]);
        std::vector<ExprPtr> args;
        for (std::size_t i = 1; i < raw.children.size(); ++i)
          args.push_back(expr(*raw.children[i]));
        return make_invoke(recv, raw.name, std::move(targs), std::move(args), raw.offset);
      }
      case Expr::Kind::Obj: {
        SecType s = sec(raw.type);
        std::vector<MethodDef> defs;
        for (const auto& m : raw.methods) {
          std::size_t pushed = 0;
          if (s.safety->is_obj()) {
            if (const MethodEntry* e = s.safety->find_method(m.name)) {
              for (const auto& tp : e->sig.type_params) {
                scope_.push_back({Entry::Kind::TParam, tp.name, make_type_var(tp.name)});
                ++pushed;
              }
            }
          }
          defs.push_back({m.name, m.params, expr(*m.body)});
          scope_.resize(scope_.size() - pushed);
        }
        return make_object(raw.name, std::move(s), std::move(defs), raw.offset);
      }
    }
    return nullptr;
  }

 private:
  struct Entry {
    enum class Kind { Self, TParam, AliasArg } kind;
    std::string name;
    TypePtr value;
  };

  struct Expansion {
    std::string alias;
    std::vector<std::string> keys;
    std::string binder;  // empty until the body's object binder is chosen
  };

  std::set<std::string> alias_arg_type_vars() const {
    std::set<std::string> out;
    for (const auto& e : scope_) {
      if (e.kind != Entry::Kind::AliasArg) continue;
      auto fv = free_type_vars(e.value);
      out.insert(fv.begin(), fv.end());
    }
    return out;
  }

  TypePtr obj(const RawType& raw, Expansion* root) {
    std::set<std::string> avoid;
    for (const auto& e : scope_) {
      if (e.kind == Entry::Kind::Self) avoid.insert(e.value->name);
      if (e.kind == Entry::Kind::AliasArg) {
        auto fv = free_self_vars(e.value);
        avoid.insert(fv.begin(), fv.end());
      }
    }
    for (const auto& x : expanding_) {
      if (!x.binder.empty()) avoid.insert(x.binder);
    }
    std::string binder = avoid.count(raw.name) ? fresh_name(raw.name, avoid) : raw.name;
    if (root) root->binder = binder;
    scope_.push_back({Entry::Kind::Self, raw.name, make_self_var(binder)});
    std::vector<MethodEntry> methods;
    std::set<std::string> names;
    for (const auto& s : raw.sigs) {
      if (!names.insert(s.name).second)
        fail_at(src_, s.offset, "duplicate method " + s.name + " in record");
      methods.push_back({s.name, sig(s)});
    }
    scope_.pop_back();
    return make_obj(binder, std::move(methods));
  }

  TypePtr named(const RawType& raw) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->name != raw.name) continue;
      if (!raw.args.empty())
        fail_at(src_, raw.offset, raw.name + " does not take type arguments");
      return it->value;
    }
    if (tvars_.count(raw.name)) {
      if (!raw.args.empty())
        fail_at(src_, raw.offset, raw.name + " does not take type arguments");
      return make_type_var(raw.name);
    }
    const RawAlias* alias = aliases_.find(raw.name);
    if (!alias) fail_at(src_, raw.offset, "unresolved type name " + raw.name);
    if (alias->params.size() != raw.args.size()) {
      fail_at(src_, raw.offset,
              "alias " + raw.name + " expects " + std::to_string(alias->params.size()) +
                  " type argument(s), got " + std::to_string(raw.args.size()));
    }
    std::vector<TypePtr> args;
    std::vector<std::string> keys;
    for (const auto& a : raw.args) {
      args.push_back(type(*a));
      keys.push_back(canonical(args.back()));
    }
    for (const auto& x : expanding_) {
      if (x.alias != raw.name) continue;
      if (x.keys != keys)
        fail_at(src_, raw.offset, "non-regular recursive use of alias " + raw.name);
      if (x.binder.empty())
        fail_at(src_, raw.offset, "recursive alias " + raw.name + " must be an object type");
      return make_self_var(x.binder);
    }
    std::vector<Entry> saved = std::move(scope_);
    scope_.clear();
    for (std::size_t i = 0; i < args.size(); ++i)
      scope_.push_back({Entry::Kind::AliasArg, alias->params[i].name, args[i]});
    expanding_.push_back({raw.name, keys, ""});
    TypePtr out;
    if (alias->body->kind == RawType::Kind::Obj) {
      Expansion* root = &expanding_.back();
      out = obj(*alias->body, root);
    } else {
      out = type(*alias->body);
    }
    expanding_.pop_back();
    scope_ = std::move(saved);
    return out;
  }

  const AliasTable& aliases_;
  std::set<std::string> tvars_;
  std::string_view src_;
  std::vector<Entry> scope_;
  std::vector<Expansion> expanding_;
};

}  // namespace

SourceProgram parse_program(std::string_view text) {
  auto table = std::make_shared<AliasTable>();
  table->source = std::string(text);
  std::string_view src = table->source;
  auto toks = lex(src);
  Parser p(src, Parser::scan_arities(toks));

  struct RawTvar {
    std::string name;
    RawTypeP lower, upper;
    std::size_t offset;
  };
  struct RawVar {
    std::string name;
    RawSec type;
    std::size_t offset;
  };
  std::vector<RawTvar> tvars;
  std::vector<RawVar> vars;
  SourceProgram prog;

  while (true) {
    if (p.is_word("type")) {
      p.next();
      RawAlias a;
      a.offset = p.peek().offset;
      a.name = p.ident("alias name");
      if (table->find(a.name)) fail_at(src, a.offset, "duplicate alias " + a.name);
      a.params = p.tparams(false);
      p.expect_sym("=");
      a.body = p.type();
      table->aliases.push_back(std::move(a));
    } else if (p.is_word("tvar")) {
      p.next();
      RawTvar t;
      t.offset = p.peek().offset;
      t.name = p.ident("type variable");
      p.expect_sym(":");
      t.lower = p.type();
      p.expect_sym("..");
      t.upper = p.type();
      tvars.push_back(std::move(t));
    } else if (p.is_word("var")) {
      p.next();
      RawVar v;
      v.offset = p.peek().offset;
      v.name = p.ident("variable");
      p.expect_sym(":");
      v.type = p.sectype();
      vars.push_back(std::move(v));
    } else if (p.is_word("expect")) {
      p.next();
      std::string what = p.ident("expectation");
      if (what == "secure") prog.expect = Expectation::Secure;
      else if (what == "insecure") prog.expect = Expectation::Insecure;
      else if (what == "illtyped") prog.expect = Expectation::IllTyped;
      else fail_at(src, p.peek().offset, "unknown expectation " + what);
    } else {
      break;
    }
  }
  RawExprP body = p.expr();
  if (!p.at_end()) p.fail("unexpected trailing input");

  std::set<std::string> tvar_names;
  for (const auto& t : tvars) tvar_names.insert(t.name);
  Resolver r(*table, tvar_names, src);
  std::vector<TypeVarBound> bounds;
  for (const auto& t : tvars)
    bounds.push_back({t.name, r.type(*t.lower), r.type(*t.upper)});
  prog.tvars = TypeVarEnv(std::move(bounds));
  std::vector<std::pair<std::string, SecType>> gamma;
  for (const auto& v : vars) gamma.emplace_back(v.name, r.sec(v.type));
  prog.vars = TermEnv(std::move(gamma));
  prog.body = r.expr(*body);
  for (const auto& a : table->aliases) {
    if (!a.params.empty()) continue;
    RawType ref;
    ref.kind = RawType::Kind::Named;
    ref.name = a.name;
    ref.offset = a.offset;
    prog.named_types.emplace_back(a.name, r.type(ref));
  }
  prog.aliases = table;
  return prog;
}

namespace {

template <typename F>
auto parse_fragment(std::string_view text, const SourceProgram& context, F&& f) {
  static const AliasTable kEmpty;
  const AliasTable& table = context.aliases ? *context.aliases : kEmpty;
  std::map<std::string, std::size_t> arities;
  for (const auto& a : table.aliases) arities[a.name] = a.params.size();
  Parser p(text, arities);
  std::set<std::string> tvars;
  for (const auto& e : context.tvars.entries()) tvars.insert(e.name);
  Resolver r(table, tvars, text);
  auto out = f(p, r);
  if (!p.at_end()) p.fail("unexpected trailing input");
  return out;
}

}  // namespace

SecType parse_sectype(std::string_view text, const SourceProgram& context) {
  return parse_fragment(text, context,
                        [](Parser& p, Resolver& r) { return r.sec(p.sectype()); });
}

TypePtr parse_type(std::string_view text, const SourceProgram& context) {
  return parse_fragment(text, context,
                        [](Parser& p, Resolver& r) { return r.type(*p.type()); });
}

ExprPtr parse_expr(std::string_view text, const SourceProgram& context) {
  return parse_fragment(text, context,
                        [](Parser& p, Resolver& r) { return r.expr(*p.expr()); });
}

}  // namespace gobsec
