#include "approxcc/expr.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace approxcc {

int arity(Op op) {
  switch (op) {
    case Op::Const:
    case Op::Var:
      return 0;
    case Op::Neg:
    case Op::Sqrt:
    case Op::Sin:
    case Op::Cos:
    case Op::Tan:
    case Op::Exp:
    case Op::Log:
      return 1;
    default:
      return 2;
  }
}

bool isElementary(Op op) {
  switch (op) {
    case Op::Sin:
    case Op::Cos:
    case Op::Tan:
    case Op::Exp:
    case Op::Log:
      return true;
    default:
      return false;
  }
}

bool isArithmetic(Op op) {
  switch (op) {
    case Op::Neg:
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Sqrt:
      return true;
    default:
      return false;
  }
}

const char* opName(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Neg: return "neg";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Sqrt: return "sqrt";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
  }
  return "?";
}

namespace build {

ExprPtr cst(const std::string& literal) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Const;
  e->sym = literal;
  char* end = nullptr;
  e->value = std::strtod(literal.c_str(), &end);
  if (end == literal.c_str() || *end != '\0')
    throw Error(ErrCode::Syntax, "bad numeric literal '" + literal + "'");
  return e;
}

ExprPtr cstd(double v) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Const;
  e->value = v;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  e->sym = buf;
  return e;
}

ExprPtr var(const std::string& name) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Var;
  e->sym = name;
  return e;
}

ExprPtr unary(Op op, ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->a = std::move(x);
  return e;
}

ExprPtr binary(Op op, ExprPtr x, ExprPtr y) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->a = std::move(x);
  e->b = std::move(y);
  return e;
}

ExprPtr neg(ExprPtr e) { return unary(Op::Neg, std::move(e)); }
ExprPtr add(ExprPtr a, ExprPtr b) { return binary(Op::Add, std::move(a), std::move(b)); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return binary(Op::Sub, std::move(a), std::move(b)); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return binary(Op::Mul, std::move(a), std::move(b)); }
ExprPtr div(ExprPtr a, ExprPtr b) { return binary(Op::Div, std::move(a), std::move(b)); }
ExprPtr sqrt(ExprPtr e) { return unary(Op::Sqrt, std::move(e)); }
ExprPtr sin(ExprPtr e) { return unary(Op::Sin, std::move(e)); }
ExprPtr cos(ExprPtr e) { return unary(Op::Cos, std::move(e)); }
ExprPtr tan(ExprPtr e) { return unary(Op::Tan, std::move(e)); }
ExprPtr exp(ExprPtr e) { return unary(Op::Exp, std::move(e)); }
ExprPtr log(ExprPtr e) { return unary(Op::Log, std::move(e)); }

}  // namespace build

bool structurallyEqual(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::Const:
      return a->sym == b->sym;
    case Op::Var:
      return a->sym == b->sym;
    default:
      break;
  }
  if (arity(a->op) == 1) return structurallyEqual(a->a, b->a);
  return structurallyEqual(a->a, b->a) && structurallyEqual(a->b, b->b);
}

size_t exprHash(const ExprPtr& e) {
  if (!e) return 0;
  size_t h = std::hash<int>()(static_cast<int>(e->op));
  auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  if (e->op == Op::Const || e->op == Op::Var) {
    mix(std::hash<std::string>()(e->sym));
    return h;
  }
  if (e->a) mix(exprHash(e->a));
  if (e->b) mix(exprHash(e->b));
  return h;
}

int height(const ExprPtr& e) {
  if (!e || arity(e->op) == 0) return 0;
  int h = height(e->a);
  if (e->b) h = std::max(h, height(e->b));
  return 1 + h;
}

size_t nodeCount(const ExprPtr& e) {
  if (!e) return 0;
  return 1 + nodeCount(e->a) + nodeCount(e->b);
}

void collectFreeVars(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->op == Op::Var) {
    out.insert(e->sym);
    return;
  }
  collectFreeVars(e->a, out);
  collectFreeVars(e->b, out);
}

std::set<std::string> freeVars(const ExprPtr& e) {
  std::set<std::string> out;
  collectFreeVars(e, out);
  return out;
}

bool containsOp(const ExprPtr& e, Op op) {
  if (!e) return false;
  if (e->op == op) return true;
  return containsOp(e->a, op) || containsOp(e->b, op);
}

bool containsElementary(const ExprPtr& e) {
  if (!e) return false;
  if (isElementary(e->op)) return true;
  return containsElementary(e->a) || containsElementary(e->b);
}

ExprPtr substitute(const ExprPtr& e, const std::string& name, const ExprPtr& replacement) {
  if (!e) return e;
  if (e->op == Op::Var) return e->sym == name ? replacement : e;
  if (arity(e->op) == 0) return e;
  ExprPtr na = substitute(e->a, name, replacement);
  ExprPtr nb = e->b ? substitute(e->b, name, replacement) : nullptr;
  if (na.get() == e->a.get() && nb.get() == e->b.get()) return e;
  if (arity(e->op) == 1) return build::unary(e->op, na);
  return build::binary(e->op, na, nb);
}

namespace {

// Precedence: additive 1, multiplicative 2, prefix minus 3, atoms 4.
int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    default:
      return 4;
  }
}

void render(const ExprPtr& e, int parentPrec, bool rightChild, std::ostream& os) {
  int prec = precedence(e->op);
  bool parens = prec < parentPrec || (prec == parentPrec && rightChild && prec <= 2);
  if (parens) os << '(';
  switch (e->op) {
    case Op::Const:
      os << e->sym;
      break;
    case Op::Var:
      os << e->sym;
      break;
    case Op::Neg:
      os << '-';
      render(e->a, 3, false, os);
      break;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      render(e->a, prec, false, os);
      os << ' ' << opName(e->op) << ' ';
      render(e->b, prec, true, os);
      break;
    default:
      os << opName(e->op) << '(';
      render(e->a, 0, false, os);
      os << ')';
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string exprToString(const ExprPtr& e) {
  std::ostringstream os;
  render(e, 0, false, os);
  return os.str();
}

}  // namespace approxcc
