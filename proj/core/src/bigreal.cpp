#include "approxcc/bigreal.hpp"

#include <mpfr.h>

#include <cmath>

namespace approxcc {

BigReal bigPi() {
  BigReal r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

BigReal bigLn2() {
  BigReal r;
  mpfr_const_log2(r.backend().data(), MPFR_RNDN);
  return r;
}

double toDoubleDown(const BigReal& x) { return mpfr_get_d(x.backend().data(), MPFR_RNDD); }
double toDoubleUp(const BigReal& x) { return mpfr_get_d(x.backend().data(), MPFR_RNDU); }
double toDoubleNearest(const BigReal& x) { return mpfr_get_d(x.backend().data(), MPFR_RNDN); }

static BigReal parseDirected(const std::string& text, mpfr_rnd_t rnd) {
  BigReal r;
  int bad = mpfr_set_str(r.backend().data(), text.c_str(), 0, rnd);
  if (bad != 0) throw Error(ErrCode::Syntax, "bad numeric literal '" + text + "'");
  return r;
}

BigReal parseLiteralDown(const std::string& text) { return parseDirected(text, MPFR_RNDD); }
BigReal parseLiteralUp(const std::string& text) { return parseDirected(text, MPFR_RNDU); }

float literalToFloat(const std::string& text) {
  mpfr_t t;
  mpfr_init2(t, 24);
  int bad = mpfr_set_str(t, text.c_str(), 0, MPFR_RNDN);
  float v = mpfr_get_flt(t, MPFR_RNDN);
  mpfr_clear(t);
  if (bad != 0) throw Error(ErrCode::Syntax, "bad numeric literal '" + text + "'");
  return v;
}

double literalReprError64(const std::string& text) {
  BigReal lo = parseLiteralDown(text);
  BigReal hi = parseLiteralUp(text);
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  BigReal e1 = abs(lo - BigReal(v));
  BigReal e2 = abs(hi - BigReal(v));
  return toDoubleUp(e1 > e2 ? e1 : e2);
}

double literalReprError32(const std::string& text) {
  BigReal lo = parseLiteralDown(text);
  BigReal hi = parseLiteralUp(text);
  BigReal v = BigReal(literalToFloat(text));
  BigReal e1 = abs(lo - v);
  BigReal e2 = abs(hi - v);
  return toDoubleUp(e1 > e2 ? e1 : e2);
}

BigReal referenceEval(const ExprPtr& e, const std::map<std::string, BigReal>& point) {
  switch (e->op) {
    case Op::Const: {
      // Nearest BigReal of the literal; at 240 bits this is exact for every
      // literal short enough to appear in a source program or a certificate.
      BigReal r;
      mpfr_set_str(r.backend().data(), e->sym.c_str(), 0, MPFR_RNDN);
      return r;
    }
    case Op::Var: {
      auto it = point.find(e->sym);
      if (it == point.end()) throw Error(ErrCode::Domain, "unbound variable " + e->sym);
      return it->second;
    }
    case Op::Neg:
      return -referenceEval(e->a, point);
    case Op::Add:
      return referenceEval(e->a, point) + referenceEval(e->b, point);
    case Op::Sub:
      return referenceEval(e->a, point) - referenceEval(e->b, point);
    case Op::Mul:
      return referenceEval(e->a, point) * referenceEval(e->b, point);
    case Op::Div: {
      BigReal d = referenceEval(e->b, point);
      if (d == 0) throw Error(ErrCode::Domain, "division by zero");
      return referenceEval(e->a, point) / d;
    }
    case Op::Sqrt: {
      BigReal x = referenceEval(e->a, point);
      if (x < 0) throw Error(ErrCode::Domain, "sqrt of negative value");
      return sqrt(x);
    }
    case Op::Sin:
      return sin(referenceEval(e->a, point));
    case Op::Cos:
      return cos(referenceEval(e->a, point));
    case Op::Tan:
      return tan(referenceEval(e->a, point));
    case Op::Exp:
      return exp(referenceEval(e->a, point));
    case Op::Log: {
      BigReal x = referenceEval(e->a, point);
      if (x <= 0) throw Error(ErrCode::Domain, "log of non-positive value");
      return log(x);
    }
  }
  throw Error(ErrCode::Unsupported, "bad op");
}

static double fnDirected(Op op, double x, mpfr_rnd_t rnd) {
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set_d(t, x, MPFR_RNDN);  // doubles are exact at 53 bits
  switch (op) {
    case Op::Sin: mpfr_sin(t, t, rnd); break;
    case Op::Cos: mpfr_cos(t, t, rnd); break;
    case Op::Tan: mpfr_tan(t, t, rnd); break;
    case Op::Exp: mpfr_exp(t, t, rnd); break;
    case Op::Log: mpfr_log(t, t, rnd); break;
    case Op::Sqrt: mpfr_sqrt(t, t, rnd); break;
    default:
      mpfr_clear(t);
      throw Error(ErrCode::Unsupported, "fnDirected: not a function op");
  }
  double r = mpfr_get_d(t, rnd);
  mpfr_clear(t);
  return r;
}

double fnDown(Op op, double x) { return fnDirected(op, x, MPFR_RNDD); }
double fnUp(Op op, double x) { return fnDirected(op, x, MPFR_RNDU); }

}  // namespace approxcc
