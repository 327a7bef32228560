#include "gobsec/printer.hpp"

#include <sstream>

namespace gobsec {

namespace {

std::string escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

void print_type(std::ostream& os, const TypePtr& t);
void print_sec(std::ostream& os, const SecType& s);

void print_sig(std::ostream& os, const std::string& name, const MethodSig& input) {
  os << name;
  if (input.is_prim()) {
    os << " : ";
    for (std::size_t i = 0; i < input.prim_params.size(); ++i) {
      if (i) os << " * ";
      os << prim_name(input.prim_params[i]) << "<*>";
    }
    os << " -> " << prim_name(input.prim_ret) << "<*>";
    return;
  }
  // A type parameter must not capture a free self variable of the same name.
  MethodSig sig = input;
  for (std::size_t i = 0; i < sig.type_params.size(); ++i) {
    std::set<std::string> avoid;
    for (const auto& p : sig.params) {
      auto fv = free_self_vars(p);
      avoid.insert(fv.begin(), fv.end());
    }
    auto fr = free_self_vars(sig.ret);
    avoid.insert(fr.begin(), fr.end());
    for (const auto& tp : sig.type_params) {
      auto a = free_self_vars(tp.lower);
      auto b = free_self_vars(tp.upper);
      avoid.insert(a.begin(), a.end());
      avoid.insert(b.begin(), b.end());
    }
    if (avoid.count(sig.type_params[i].name)) {
      for (const auto& tp : sig.type_params) avoid.insert(tp.name);
      sig = rename_type_param(sig, i, fresh_name(sig.type_params[i].name, avoid));
    }
  }
  if (!sig.type_params.empty()) {
    os << "<";
    for (std::size_t i = 0; i < sig.type_params.size(); ++i) {
      const auto& tp = sig.type_params[i];
      if (i) os << ", ";
      os << tp.name << ": ";
      print_type(os, tp.lower);
      os << " .. ";
      print_type(os, tp.upper);
    }
    os << ">";
  }
  os << " : ";
  for (std::size_t i = 0; i < sig.params.size(); ++i) {
    if (i) os << " * ";
    print_sec(os, sig.params[i]);
  }
  os << " -> ";
  print_sec(os, sig.ret);
}

void print_type(std::ostream& os, const TypePtr& input) {
  switch (input->kind) {
    case Type::Kind::Prim:
      os << prim_name(input->prim);
      return;
    case Type::Kind::SelfVar:
    case Type::Kind::TypeVar:
      os << input->name;
      return;
    case Type::Kind::Obj:
      break;
  }
  if (input->is_top()) {
    os << "Top";
    return;
  }
  TypePtr t = input;
  auto captured = free_type_vars(t);
  if (captured.count(t->name)) {
    auto avoid = captured;
    auto selves = free_self_vars(t);
    avoid.insert(selves.begin(), selves.end());
    std::string fresh = fresh_name(t->name, avoid);
    std::vector<MethodEntry> ms;
    auto self = make_self_var(fresh);
    for (const auto& m : t->methods)
      ms.push_back({m.name, subst_self_var(m.sig, self, t->name)});
    t = make_obj(fresh, std::move(ms));
  }
  os << "Obj(" << t->name << ")[";
  for (std::size_t i = 0; i < t->methods.size(); ++i) {
    os << (i ? ", " : " ");
    print_sig(os, t->methods[i].name, t->methods[i].sig);
  }
  os << " ]";
}

void print_sec(std::ostream& os, const SecType& s) {
  if (s.is_star()) {
    os << prim_name(s.star_kind) << "<*>";
    return;
  }
  print_type(os, s.safety);
  if (alpha_equal(s.safety, s.decl)) {
    os << "!";
  } else if (s.decl->is_top()) {
    os << "?";
  } else {
    os << "<";
    print_type(os, s.decl);
    os << ">";
  }
}

void print_expr(std::ostream& os, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var:
      os << e->name;
      return;
    case Expr::Kind::Lit:
      os << pretty_print(e->lit);
      return;
    case Expr::Kind::Ascribe:
      os << "(";
      print_expr(os, e->children[0]);
      os << " : ";
      print_sec(os, e->type);
      os << ")";
      return;
    case Expr::Kind::If:
      os << "if ";
      print_expr(os, e->children[0]);
      os << " then ";
      print_expr(os, e->children[1]);
      os << " else ";
      print_expr(os, e->children[2]);
      return;
    case Expr::Kind::Let:
      os << "let " << e->name << " = ";
      print_expr(os, e->children[0]);
      os << " in ";
      print_expr(os, e->children[1]);
      return;
    case Expr::Kind::Obj:
      os << "new { " << e->name << " : ";
      print_sec(os, e->type);
      for (std::size_t i = 0; i < e->methods.size(); ++i) {
        const auto& m = e->methods[i];
        os << (i ? ", " : " ") << m.name << "(";
        if (!(m.params.size() == 1 && m.params[0] == "_")) {
          for (std::size_t j = 0; j < m.params.size(); ++j) {
            if (j) os << ", ";
            os << m.params[j];
          }
        }
        os << ") => ";
        print_expr(os, m.body);
      }
      os << " }";
      return;
    case Expr::Kind::Invoke: {
      const ExprPtr& recv = e->children[0];
      bool wrap = recv->kind == Expr::Kind::If || recv->kind == Expr::Kind::Let;
      if (wrap) os << "(";
      print_expr(os, recv);
      if (wrap) os << ")";
      os << "." << e->name;
      if (!e->type_args.empty()) {
        os << "<";
        for (std::size_t i = 0; i < e->type_args.size(); ++i) {
          if (i) os << ", ";
          print_type(os, e->type_args[i]);
        }
        os << ">";
      }
      os << "(";
      bool unit_only = e->children.size() == 2 &&
                       e->children[1]->kind == Expr::Kind::Lit &&
                       e->children[1]->lit.kind == PrimKind::Unit;
      if (!unit_only) {
        for (std::size_t i = 1; i < e->children.size(); ++i) {
          if (i > 1) os << ", ";
          print_expr(os, e->children[i]);
        }
      }
      os << ")";
      return;
    }
  }
}

}  // namespace

std::string pretty_print(const Literal& lit) {
  switch (lit.kind) {
    case PrimKind::Int:
      return std::to_string(lit.int_value);
    case PrimKind::Bool:
      return lit.bool_value ? "true" : "false";
    case PrimKind::String:
      return escape(lit.string_value);
    case PrimKind::Unit:
      break;
  }
  return "unit";
}

std::string pretty_print(const TypePtr& t) {
  std::ostringstream os;
  print_type(os, t);
  return os.str();
}

std::string pretty_print(const SecType& s) {
  std::ostringstream os;
  print_sec(os, s);
  return os.str();
}

std::string pretty_print(const std::string& method, const MethodSig& sig) {
  std::ostringstream os;
  print_sig(os, method, sig);
  return os.str();
}

std::string pretty_print(const ExprPtr& e) {
  std::ostringstream os;
  print_expr(os, e);
  return os.str();
}

std::string print_program(const SourceProgram& program) {
  std::ostringstream os;
  if (program.expect != Expectation::None)
    os << "expect " << expectation_name(program.expect) << "\n";
  for (const auto& b : program.tvars.entries()) {
    os << "tvar " << b.name << " : ";
    print_type(os, b.lower);
    os << " .. ";
    print_type(os, b.upper);
    os << "\n";
  }
  for (const auto& [name, type] : program.vars.entries()) {
    os << "var " << name << " : ";
    print_sec(os, type);
    os << "\n";
  }
  print_expr(os, program.body);
  os << "\n";
  return os.str();
}

}  // namespace gobsec
