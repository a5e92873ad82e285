#include "approxcc/strict_eval.hpp"

#include <cmath>

#include "approxcc/bigreal.hpp"

namespace approxcc {

namespace {

template <typename T>
T checkFinite(T v, const char* what) {
  if (std::isinf(v)) throw Error(ErrCode::Overflow, std::string("overflow to infinity in ") + what);
  return v;
}

}  // namespace

double evalF64(const ExprPtr& e, const PointEnv& env) {
  switch (e->op) {
    case Op::Const:
      return e->value;
    case Op::Var: {
      auto it = env.find(e->sym);
      if (it == env.end()) throw Error(ErrCode::Domain, "unbound variable " + e->sym);
      return it->second;
    }
    case Op::Neg:
      return -evalF64(e->a, env);
    case Op::Add:
      return checkFinite(evalF64(e->a, env) + evalF64(e->b, env), "+");
    case Op::Sub:
      return checkFinite(evalF64(e->a, env) - evalF64(e->b, env), "-");
    case Op::Mul:
      return checkFinite(evalF64(e->a, env) * evalF64(e->b, env), "*");
    case Op::Div: {
      double d = evalF64(e->b, env);
      if (d == 0.0) throw Error(ErrCode::Domain, "division by zero");
      return checkFinite(evalF64(e->a, env) / d, "/");
    }
    case Op::Sqrt: {
      double x = evalF64(e->a, env);
      if (x < 0.0) throw Error(ErrCode::Domain, "sqrt of negative value");
      return std::sqrt(x);
    }
    case Op::Sin:
      return std::sin(evalF64(e->a, env));
    case Op::Cos:
      return std::cos(evalF64(e->a, env));
    case Op::Tan:
      return std::tan(evalF64(e->a, env));
    case Op::Exp:
      return checkFinite(std::exp(evalF64(e->a, env)), "exp");
    case Op::Log: {
      double x = evalF64(e->a, env);
      if (x <= 0.0) throw Error(ErrCode::Domain, "log of non-positive value");
      return std::log(x);
    }
  }
  throw Error(ErrCode::Unsupported, "bad op");
}

float evalF32(const ExprPtr& e, const PointEnv& env) {
  switch (e->op) {
    case Op::Const:
      return literalToFloat(e->sym);
    case Op::Var: {
      auto it = env.find(e->sym);
      if (it == env.end()) throw Error(ErrCode::Domain, "unbound variable " + e->sym);
      return static_cast<float>(it->second);
    }
    case Op::Neg:
      return -evalF32(e->a, env);
    case Op::Add:
      return checkFinite(evalF32(e->a, env) + evalF32(e->b, env), "+");
    case Op::Sub:
      return checkFinite(evalF32(e->a, env) - evalF32(e->b, env), "-");
    case Op::Mul:
      return checkFinite(evalF32(e->a, env) * evalF32(e->b, env), "*");
    case Op::Div: {
      float d = evalF32(e->b, env);
      if (d == 0.0f) throw Error(ErrCode::Domain, "division by zero");
      return checkFinite(evalF32(e->a, env) / d, "/");
    }
    case Op::Sqrt: {
      float x = evalF32(e->a, env);
      if (x < 0.0f) throw Error(ErrCode::Domain, "sqrt of negative value");
      return std::sqrt(x);
    }
    case Op::Sin:
      return std::sin(evalF32(e->a, env));
    case Op::Cos:
      return std::cos(evalF32(e->a, env));
    case Op::Tan:
      return std::tan(evalF32(e->a, env));
    case Op::Exp:
      return checkFinite(std::exp(evalF32(e->a, env)), "exp");
    case Op::Log: {
      float x = evalF32(e->a, env);
      if (x <= 0.0f) throw Error(ErrCode::Domain, "log of non-positive value");
      return std::log(x);
    }
  }
  throw Error(ErrCode::Unsupported, "bad op");
}

}  // namespace approxcc
