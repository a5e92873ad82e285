#include "approxcc/derivative.hpp"

namespace approxcc {

namespace {

using namespace build;

bool isConstValue(const ExprPtr& e, double v) { return e->op == Op::Const && e->value == v; }

}  // namespace

ExprPtr simplify(const ExprPtr& e) {
  if (!e || arity(e->op) == 0) return e;
  ExprPtr a = simplify(e->a);
  ExprPtr b = e->b ? simplify(e->b) : nullptr;
  switch (e->op) {
    case Op::Neg:
      if (isConstValue(a, 0.0)) return a;
      if (a->op == Op::Neg) return a->a;
      break;
    case Op::Add:
      if (isConstValue(a, 0.0)) return b;
      if (isConstValue(b, 0.0)) return a;
      break;
    case Op::Sub:
      if (isConstValue(b, 0.0)) return a;
      if (isConstValue(a, 0.0)) return simplify(neg(b));
      break;
    case Op::Mul:
      if (isConstValue(a, 0.0) || isConstValue(b, 0.0)) return cstd(0.0);
      if (isConstValue(a, 1.0)) return b;
      if (isConstValue(b, 1.0)) return a;
      break;
    case Op::Div:
      if (isConstValue(a, 0.0)) return a;
      if (isConstValue(b, 1.0)) return a;
      break;
    default:
      break;
  }
  if (a.get() == e->a.get() && b.get() == e->b.get()) return e;
  return arity(e->op) == 1 ? unary(e->op, a) : binary(e->op, a, b);
}

ExprPtr differentiate(const ExprPtr& e, const std::string& v) {
  switch (e->op) {
    case Op::Const:
      return cstd(0.0);
    case Op::Var:
      return cstd(e->sym == v ? 1.0 : 0.0);
    case Op::Neg:
      return simplify(neg(differentiate(e->a, v)));
    case Op::Add:
      return simplify(add(differentiate(e->a, v), differentiate(e->b, v)));
    case Op::Sub:
      return simplify(sub(differentiate(e->a, v), differentiate(e->b, v)));
    case Op::Mul:
      return simplify(add(mul(differentiate(e->a, v), e->b), mul(e->a, differentiate(e->b, v))));
    case Op::Div:
      return simplify(div(sub(mul(differentiate(e->a, v), e->b), mul(e->a, differentiate(e->b, v))),
                          mul(e->b, e->b)));
    case Op::Sqrt:
      return simplify(div(differentiate(e->a, v), mul(cstd(2.0), sqrt(e->a))));
    case Op::Sin:
      return simplify(mul(differentiate(e->a, v), cos(e->a)));
    case Op::Cos:
      return simplify(neg(mul(differentiate(e->a, v), sin(e->a))));
    case Op::Tan:
      return simplify(mul(differentiate(e->a, v), add(cstd(1.0), mul(tan(e->a), tan(e->a)))));
    case Op::Exp:
      return simplify(mul(differentiate(e->a, v), exp(e->a)));
    case Op::Log:
      return simplify(div(differentiate(e->a, v), e->a));
  }
  throw Error(ErrCode::Unsupported, "bad op");
}

}  // namespace approxcc
