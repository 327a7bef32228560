#include "gobsec/eval.hpp"

#include <cstring>

namespace gobsec {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

bool continuation_byte(unsigned char c) { return (c & 0xC0) == 0x80; }

std::int64_t to_signed(std::uint64_t v) {
  std::int64_t out;
  std::memcpy(&out, &v, sizeof out);
  return out;
}

}  // namespace

std::int64_t utf8_length(std::string_view s) {
  std::int64_t n = 0;
  for (unsigned char c : s) {
    if (!continuation_byte(c)) ++n;
  }
  return n;
}

std::string utf8_first(std::string_view s) {
  if (s.empty()) return "";
  std::size_t end = 1;
  while (end < s.size() && continuation_byte(static_cast<unsigned char>(s[end]))) ++end;
  return std::string(s.substr(0, end));
}

std::optional<Literal> theta(std::string_view m, const Literal& r,
                             const std::vector<Literal>& args) {
  if (args.size() != 1) return std::nullopt;
  const Literal& a = args[0];
  switch (r.kind) {
    case PrimKind::Int: {
      if (a.kind != PrimKind::Int) return std::nullopt;
      auto x = static_cast<std::uint64_t>(r.int_value);
      auto y = static_cast<std::uint64_t>(a.int_value);
      if (m == "+") return Literal::of_int(to_signed(x + y));
      if (m == "-") return Literal::of_int(to_signed(x - y));
      if (m == "*") return Literal::of_int(to_signed(x * y));
      if (m == "eq") return Literal::of_bool(r.int_value == a.int_value);
      if (m == "lt") return Literal::of_bool(r.int_value < a.int_value);
      if (m == "gt") return Literal::of_bool(r.int_value > a.int_value);
      return std::nullopt;
    }
    case PrimKind::String:
      if (a.kind == PrimKind::String) {
        if (m == "concat") return Literal::of_string(r.string_value + a.string_value);
        if (m == "eq") return Literal::of_bool(r.string_value == a.string_value);
      } else if (a.kind == PrimKind::Unit) {
        if (m == "first") return Literal::of_string(utf8_first(r.string_value));
        if (m == "length") return Literal::of_int(utf8_length(r.string_value));
        if (m == "hash") return Literal::of_int(to_signed(fnv1a64(r.string_value)));
      }
      return std::nullopt;
    case PrimKind::Bool:
      if (a.kind == PrimKind::Bool) {
        if (m == "and") return Literal::of_bool(r.bool_value && a.bool_value);
        if (m == "or") return Literal::of_bool(r.bool_value || a.bool_value);
        if (m == "eq") return Literal::of_bool(r.bool_value == a.bool_value);
      } else if (a.kind == PrimKind::Unit && m == "not") {
        return Literal::of_bool(!r.bool_value);
      }
      return std::nullopt;
    case PrimKind::Unit:
      if (a.kind == PrimKind::Unit && m == "eq") return Literal::of_bool(true);
      return std::nullopt;
  }
  return std::nullopt;
}

ExprPtr erase(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var:
    case Expr::Kind::Lit:
      return e;
    case Expr::Kind::Ascribe:
      return erase(e->children[0]);
    case Expr::Kind::Obj: {
      std::vector<MethodDef> defs;
      bool changed = false;
      for (const auto& m : e->methods) {
        ExprPtr b = erase(m.body);
        changed = changed || b != m.body;
        defs.push_back({m.name, m.params, b});
      }
      if (!changed) return e;
      return make_object(e->name, e->type, std::move(defs), e->offset);
    }
    case Expr::Kind::Invoke: {
      std::vector<ExprPtr> args;
      bool changed = !e->type_args.empty();
      ExprPtr recv = erase(e->children[0]);
      changed = changed || recv != e->children[0];
      for (std::size_t i = 1; i < e->children.size(); ++i) {
        args.push_back(erase(e->children[i]));
        changed = changed || args.back() != e->children[i];
      }
      if (!changed) return e;
      return make_invoke(recv, e->name, {}, std::move(args), e->offset);
    }
    case Expr::Kind::If: {
      ExprPtr c = erase(e->children[0]);
      ExprPtr t = erase(e->children[1]);
      ExprPtr f = erase(e->children[2]);
      if (c == e->children[0] && t == e->children[1] && f == e->children[2]) return e;
      return make_if(c, t, f, e->offset);
    }
    case Expr::Kind::Let: {
      ExprPtr b = erase(e->children[0]);
      ExprPtr body = erase(e->children[1]);
      if (b == e->children[0] && body == e->children[1]) return e;
      return make_let(e->name, b, body, e->offset);
    }
  }
  return e;
}

namespace {

struct Contraction {
  ExprPtr result;  // null when stuck
  std::string reason;
};

/// The redex `recv.m(args)` with all parts values.
Contraction contract_invoke(const ExprPtr& recv, const std::string& m,
                            const std::vector<ExprPtr>& args) {
  if (recv->kind == Expr::Kind::Lit) {
    std::vector<Literal> lits;
    for (const auto& a : args) {
      if (a->kind != Expr::Kind::Lit) return {nullptr, "primitive method " + m + " applied to an object"};
      lits.push_back(a->lit);
    }
    auto r = theta(m, recv->lit, lits);
    if (!r) return {nullptr, "primitive operation " + m + " undefined on these arguments"};
    return {make_lit(*r), {}};
  }
  const MethodDef* def = recv->find_method(m);
  if (!def) return {nullptr, "object has no method " + m};
  if (def->params.size() != args.size())
    return {nullptr, "arity mismatch invoking " + m};
  std::vector<std::pair<std::string, ExprPtr>> bindings;
  bindings.emplace_back(recv->name, recv);
  for (std::size_t i = 0; i < args.size(); ++i) bindings.emplace_back(def->params[i], args[i]);
  return {subst_term(def->body, bindings), {}};
}

Contraction contract_if(const ExprPtr& cond, const ExprPtr& then_branch,
                        const ExprPtr& else_branch) {
  if (cond->kind != Expr::Kind::Lit || cond->lit.kind != PrimKind::Bool)
    return {nullptr, "condition is not a boolean"};
  return {cond->lit.bool_value ? then_branch : else_branch, {}};
}

Contraction contract_let(const std::string& x, const ExprPtr& v, const ExprPtr& body) {
  return {subst_term(body, {{x, v}}), {}};
}

}  // namespace

StepResult step(const ExprPtr& e) {
  using K = StepResult::Kind;
  auto stepped = [](ExprPtr next) { return StepResult{K::Stepped, std::move(next), nullptr, {}}; };
  auto finish = [&](Contraction c, const ExprPtr& redex) {
    if (!c.result) return StepResult{K::Stuck, nullptr, redex, c.reason};
    return stepped(c.result);
  };
  switch (e->kind) {
    case Expr::Kind::Lit:
    case Expr::Kind::Obj:
      return {K::Value, nullptr, nullptr, {}};
    case Expr::Kind::Var:
      return {K::Stuck, nullptr, e, "free variable " + e->name};
    case Expr::Kind::Ascribe:
      return stepped(e->children[0]);
    case Expr::Kind::Invoke: {
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        if (e->children[i]->is_value()) continue;
        StepResult r = step(e->children[i]);
        if (r.kind != K::Stepped) return r;
        std::vector<ExprPtr> args(e->children.begin() + 1, e->children.end());
        ExprPtr recv = e->children[0];
        if (i == 0) {
          recv = r.next;
        } else {
          args[i - 1] = r.next;
        }
        return stepped(make_invoke(recv, e->name, e->type_args, std::move(args), e->offset));
      }
      std::vector<ExprPtr> args(e->children.begin() + 1, e->children.end());
      return finish(contract_invoke(e->children[0], e->name, args), e);
    }
    case Expr::Kind::If: {
      if (!e->children[0]->is_value()) {
        StepResult r = step(e->children[0]);
        if (r.kind != K::Stepped) return r;
        return stepped(make_if(r.next, e->children[1], e->children[2], e->offset));
      }
      return finish(contract_if(e->children[0], e->children[1], e->children[2]), e);
    }
    case Expr::Kind::Let: {
      if (!e->children[0]->is_value()) {
        StepResult r = step(e->children[0]);
        if (r.kind != K::Stepped) return r;
        return stepped(make_let(e->name, r.next, e->children[1], e->offset));
      }
      return finish(contract_let(e->name, e->children[0], e->children[1]), e);
    }
  }
  return {K::Stuck, nullptr, e, "unknown term"};
}

Outcome eval_by_steps(const ExprPtr& input, std::size_t fuel) {
  ExprPtr e = erase(input);
  Outcome out;
  while (true) {
    StepResult r = step(e);
    if (r.kind == StepResult::Kind::Value) {
      out.kind = Outcome::Kind::Value;
      out.value = e;
      return out;
    }
    if (r.kind == StepResult::Kind::Stuck) {
      out.kind = Outcome::Kind::Stuck;
      out.redex = r.redex;
      out.reason = r.reason;
      return out;
    }
    if (out.steps == fuel) {
      out.kind = Outcome::Kind::Timeout;
      return out;
    }
    ++out.steps;
    e = r.next;
  }
}

namespace {

struct Frame {
  enum class Kind { Invoke, If, Let } kind;
  ExprPtr term;
  std::vector<ExprPtr> values;  // Invoke: receiver then evaluated args
};

}  // namespace

Outcome eval(const ExprPtr& input, std::size_t fuel) {
  Outcome out;
  std::vector<Frame> stack;
  ExprPtr control = erase(input);
  ExprPtr value;

  auto stuck = [&](ExprPtr redex, std::string reason) {
    out.kind = Outcome::Kind::Stuck;
    out.redex = std::move(redex);
    out.reason = std::move(reason);
    return out;
  };

  while (true) {
    if (control) {
      const ExprPtr e = control;
      control = nullptr;
      switch (e->kind) {
        case Expr::Kind::Lit:
        case Expr::Kind::Obj:
          value = e;
          break;
        case Expr::Kind::Var:
          return stuck(e, "free variable " + e->name);
        case Expr::Kind::Ascribe:
          control = e->children[0];
          continue;
        case Expr::Kind::Invoke:
          stack.push_back({Frame::Kind::Invoke, e, {}});
          control = e->children[0];
          continue;
        case Expr::Kind::If:
          stack.push_back({Frame::Kind::If, e, {}});
          control = e->children[0];
          continue;
        case Expr::Kind::Let:
          stack.push_back({Frame::Kind::Let, e, {}});
          control = e->children[0];
          continue;
      }
    }

    if (stack.empty()) {
      out.kind = Outcome::Kind::Value;
      out.value = value;
      return out;
    }
    Frame& top = stack.back();
    Contraction c;
    ExprPtr redex;
    switch (top.kind) {
      case Frame::Kind::Invoke: {
        top.values.push_back(value);
        if (top.values.size() < top.term->children.size()) {
          control = top.term->children[top.values.size()];
          continue;
        }
        std::vector<ExprPtr> args(top.values.begin() + 1, top.values.end());
        c = contract_invoke(top.values[0], top.term->name, args);
        if (!c.result)
          redex = make_invoke(top.values[0], top.term->name, {}, std::move(args),
                              top.term->offset);
        break;
      }
      case Frame::Kind::If:
        c = contract_if(value, top.term->children[1], top.term->children[2]);
        if (!c.result)
          redex = make_if(value, top.term->children[1], top.term->children[2],
                          top.term->offset);
        break;
      case Frame::Kind::Let:
        c = contract_let(top.term->name, value, top.term->children[1]);
        break;
    }
    if (!c.result) return stuck(redex, c.reason);
    if (out.steps == fuel) {
      out.kind = Outcome::Kind::Timeout;
      return out;
    }
    ++out.steps;
    stack.pop_back();
    control = c.result;
  }
}

std::string_view outcome_name(Outcome::Kind k) {
  switch (k) {
    case Outcome::Kind::Value:
      return "value";
    case Outcome::Kind::Timeout:
      return "timeout";
    case Outcome::Kind::Stuck:
      return "stuck";
  }
  return "stuck";
}

}  // namespace gobsec
