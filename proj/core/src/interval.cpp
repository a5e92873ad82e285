#include "approxcc/interval.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>

#include "approxcc/bigreal.hpp"

namespace approxcc {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void blowup(const char* what) {
  throw Error(ErrCode::RangeBlowup, std::string("non-finite range in ") + what);
}

double stepDown(double v) { return std::nextafter(v, -kInf); }
double stepUp(double v) { return std::nextafter(v, kInf); }

// Error-free transforms tell us when a rounded result is exact, so exact
// endpoint arithmetic stays exact and everything else moves one ulp outward.
bool addExact(double a, double b, double s) {
  if (!std::isfinite(s)) return false;
  double bv = s - a;
  double av = s - bv;
  return (a - av) == 0.0 && (b - bv) == 0.0;
}

bool mulExact(double a, double b, double p) {
  if (!std::isfinite(p)) return false;
  return std::fma(a, b, -p) == 0.0;
}

bool divExact(double a, double b, double q) {
  if (!std::isfinite(q)) return false;
  return std::fma(q, b, -a) == 0.0;
}

}  // namespace

double addDown(double a, double b) {
  double s = a + b;
  return addExact(a, b, s) ? s : stepDown(s);
}
double addUp(double a, double b) {
  double s = a + b;
  return addExact(a, b, s) ? s : stepUp(s);
}
double subDown(double a, double b) { return addDown(a, -b); }
double subUp(double a, double b) { return addUp(a, -b); }
double mulDown(double a, double b) {
  double p = a * b;
  return mulExact(a, b, p) ? p : stepDown(p);
}
double mulUp(double a, double b) {
  double p = a * b;
  return mulExact(a, b, p) ? p : stepUp(p);
}
double divDown(double a, double b) {
  double q = a / b;
  return divExact(a, b, q) ? q : stepDown(q);
}
double divUp(double a, double b) {
  double q = a / b;
  return divExact(a, b, q) ? q : stepUp(q);
}

Interval::Interval(double l, double h) : lo(l), hi(h) {
  if (!(lo <= hi)) throw Error(ErrCode::RangeBlowup, "inverted interval");
  if (!std::isfinite(lo) || !std::isfinite(hi)) blowup("interval bounds");
}

double Interval::mid() const {
  double m = 0.5 * (lo + hi);
  if (!std::isfinite(m)) m = 0.5 * lo + 0.5 * hi;
  if (m < lo) m = lo;
  if (m > hi) m = hi;
  return m;
}

double Interval::rad() const {
  double m = mid();
  return std::max(subUp(hi, m), subUp(m, lo));
}

double Interval::maxAbs() const { return std::max(std::fabs(lo), std::fabs(hi)); }

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(addDown(a.lo, b.lo), addUp(a.hi, b.hi));
}

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(subDown(a.lo, b.hi), subUp(a.hi, b.lo));
}

Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

Interval operator*(const Interval& a, const Interval& b) {
  double cands[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  double lo = kInf, hi = -kInf;
  const double as[2] = {a.lo, a.hi};
  const double bs[2] = {b.lo, b.hi};
  int k = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j, ++k) {
      double p = cands[k];
      if (!std::isfinite(p)) blowup("interval mul");
      lo = std::min(lo, mulExact(as[i], bs[j], p) ? p : stepDown(p));
      hi = std::max(hi, mulExact(as[i], bs[j], p) ? p : stepUp(p));
    }
  return Interval(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.containsZero()) throw Error(ErrCode::Domain, "division by interval containing zero");
  double lo = kInf, hi = -kInf;
  const double as[2] = {a.lo, a.hi};
  const double bs[2] = {b.lo, b.hi};
  for (double x : as)
    for (double y : bs) {
      double q = x / y;
      if (!std::isfinite(q)) blowup("interval div");
      lo = std::min(lo, divExact(x, y, q) ? q : stepDown(q));
      hi = std::max(hi, divExact(x, y, q) ? q : stepUp(q));
    }
  return Interval(lo, hi);
}

Interval scaleI(const Interval& a, double s) { return a * Interval::point(s); }

Interval addScalarUp(const Interval& a, double s) { return a + Interval::point(s); }

Interval hullI(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

Interval intersectI(const Interval& a, const Interval& b) {
  double lo = std::max(a.lo, b.lo);
  double hi = std::min(a.hi, b.hi);
  if (lo > hi) throw Error(ErrCode::RangeBlowup, "empty interval intersection");
  return Interval(lo, hi);
}

Interval widenI(const Interval& a, double delta) {
  if (delta == 0.0) return a;
  return Interval(subDown(a.lo, delta), addUp(a.hi, delta));
}

Interval absI(const Interval& a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return -a;
  return Interval(0.0, a.maxAbs());
}

Interval sqrtI(const Interval& a) {
  if (a.lo < 0.0) throw Error(ErrCode::Domain, "sqrt of interval with negative part");
  // IEEE sqrt is correctly rounded; step one ulp outward unless exact.
  double lo = std::sqrt(a.lo);
  double hi = std::sqrt(a.hi);
  if (std::fma(lo, lo, -a.lo) != 0.0) lo = stepDown(lo);
  if (std::fma(hi, hi, -a.hi) != 0.0) hi = stepUp(hi);
  if (lo < 0.0) lo = 0.0;
  return Interval(lo, hi);
}

Interval expI(const Interval& a) {
  double lo = fnDown(Op::Exp, a.lo);
  double hi = fnUp(Op::Exp, a.hi);
  if (!std::isfinite(hi)) blowup("exp");
  return Interval(lo, hi);
}

Interval logI(const Interval& a) {
  if (a.lo <= 0.0) throw Error(ErrCode::Domain, "log of interval with non-positive part");
  return Interval(fnDown(Op::Log, a.lo), fnUp(Op::Log, a.hi));
}

namespace {

// Does offset + k*period fall inside [lo, hi] for some integer k?
// Evaluated at 160 bits with directed rounding.
bool containsShiftedMultiple(double lo, double hi, const BigReal& offset, const BigReal& period) {
  mpfr_t t, klo, khi;
  mpfr_init2(t, 160);
  mpfr_init2(klo, 160);
  mpfr_init2(khi, 160);

  mpfr_set_d(t, lo, MPFR_RNDN);
  mpfr_sub(t, t, offset.backend().data(), MPFR_RNDD);
  mpfr_div(t, t, period.backend().data(), MPFR_RNDD);
  mpfr_ceil(klo, t);

  mpfr_set_d(t, hi, MPFR_RNDN);
  mpfr_sub(t, t, offset.backend().data(), MPFR_RNDU);
  mpfr_div(t, t, period.backend().data(), MPFR_RNDU);
  mpfr_floor(khi, t);

  bool found = mpfr_cmp(klo, khi) <= 0;
  mpfr_clear(t);
  mpfr_clear(klo);
  mpfr_clear(khi);
  return found;
}

}  // namespace

Interval sinI(const Interval& a) {
  BigReal pi = bigPi();
  BigReal twoPi = 2 * pi;
  BigReal half = pi / 2;
  if (a.width() >= toDoubleUp(twoPi)) return Interval(-1.0, 1.0);
  bool hasMax = containsShiftedMultiple(a.lo, a.hi, half, twoPi);
  bool hasMin = containsShiftedMultiple(a.lo, a.hi, -half, twoPi);
  double v1lo = fnDown(Op::Sin, a.lo), v1hi = fnUp(Op::Sin, a.lo);
  double v2lo = fnDown(Op::Sin, a.hi), v2hi = fnUp(Op::Sin, a.hi);
  double lo = hasMin ? -1.0 : std::min(v1lo, v2lo);
  double hi = hasMax ? 1.0 : std::max(v1hi, v2hi);
  return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

Interval cosI(const Interval& a) {
  BigReal pi = bigPi();
  BigReal twoPi = 2 * pi;
  if (a.width() >= toDoubleUp(twoPi)) return Interval(-1.0, 1.0);
  bool hasMax = containsShiftedMultiple(a.lo, a.hi, BigReal(0), twoPi);
  bool hasMin = containsShiftedMultiple(a.lo, a.hi, pi, twoPi);
  double v1lo = fnDown(Op::Cos, a.lo), v1hi = fnUp(Op::Cos, a.lo);
  double v2lo = fnDown(Op::Cos, a.hi), v2hi = fnUp(Op::Cos, a.hi);
  double lo = hasMin ? -1.0 : std::min(v1lo, v2lo);
  double hi = hasMax ? 1.0 : std::max(v1hi, v2hi);
  return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

Interval tanI(const Interval& a) {
  BigReal pi = bigPi();
  if (a.width() >= toDoubleDown(pi) ||
      containsShiftedMultiple(a.lo, a.hi, pi / 2, pi))
    throw Error(ErrCode::Domain, "tan over interval containing a pole");
  // monotone increasing between poles
  return Interval(fnDown(Op::Tan, a.lo), fnUp(Op::Tan, a.hi));
}

Interval fnI(Op op, const Interval& a) {
  switch (op) {
    case Op::Sqrt: return sqrtI(a);
    case Op::Sin: return sinI(a);
    case Op::Cos: return cosI(a);
    case Op::Tan: return tanI(a);
    case Op::Exp: return expI(a);
    case Op::Log: return logI(a);
    default: throw Error(ErrCode::Unsupported, "fnI: not a function op");
  }
}

Interval intervalEval(const ExprPtr& e, const IntervalEnv& env) {
  switch (e->op) {
    case Op::Const: {
      double lo = toDoubleDown(parseLiteralDown(e->sym));
      double hi = toDoubleUp(parseLiteralUp(e->sym));
      return Interval(lo, hi);
    }
    case Op::Var: {
      auto it = env.find(e->sym);
      if (it == env.end()) throw Error(ErrCode::Domain, "unbound variable " + e->sym);
      return it->second;
    }
    case Op::Neg:
      return -intervalEval(e->a, env);
    case Op::Add:
      return intervalEval(e->a, env) + intervalEval(e->b, env);
    case Op::Sub:
      return intervalEval(e->a, env) - intervalEval(e->b, env);
    case Op::Mul:
      return intervalEval(e->a, env) * intervalEval(e->b, env);
    case Op::Div:
      return intervalEval(e->a, env) / intervalEval(e->b, env);
    default:
      return fnI(e->op, intervalEval(e->a, env));
  }
}

}  // namespace approxcc
