#include "approxcc/affine.hpp"

#include <cmath>

#include "approxcc/bigreal.hpp"

namespace approxcc {

namespace {

// 2Sum: exact rounding error of a+b.
double twoSumErr(double a, double b, double s) {
  double bv = s - a;
  double av = s - bv;
  return (a - av) + (b - bv);
}

double slackAcc(double slack, double err) { return addUp(slack, std::fabs(err)); }

}  // namespace

AffineForm AffineForm::fromInterval(const Interval& iv, AffineContext& ctx) {
  AffineForm f;
  f.center_ = iv.mid();
  double r = iv.rad();
  if (r > 0.0) f.terms_.emplace_back(ctx.fresh(), r);
  return f;
}

double AffineForm::radiusUp() const {
  double r = slack_;
  for (const auto& [id, c] : terms_) r = addUp(r, std::fabs(c));
  return r;
}

Interval AffineForm::hull() const {
  double r = radiusUp();
  return Interval(subDown(center_, r), addUp(center_, r));
}

AffineForm AffineForm::negated() const {
  AffineForm f = *this;
  f.center_ = -f.center_;
  for (auto& [id, c] : f.terms_) c = -c;
  return f;
}

AffineForm AffineForm::withFresh(double magnitude, AffineContext& ctx) const {
  AffineForm f = *this;
  if (magnitude > 0.0) f.terms_.emplace_back(ctx.fresh(), magnitude);
  return f;
}

AffineForm addAF(const AffineForm& a, const AffineForm& b) {
  AffineForm z;
  z.center_ = a.center_ + b.center_;
  double slack = addUp(a.slack_, b.slack_);
  slack = slackAcc(slack, twoSumErr(a.center_, b.center_, z.center_));
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  while (ia != a.terms_.end() || ib != b.terms_.end()) {
    if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
      z.terms_.push_back(*ia++);
    } else if (ia == a.terms_.end() || ib->first < ia->first) {
      z.terms_.push_back(*ib++);
    } else {
      double c = ia->second + ib->second;
      slack = slackAcc(slack, twoSumErr(ia->second, ib->second, c));
      if (c != 0.0) z.terms_.emplace_back(ia->first, c);
      ++ia;
      ++ib;
    }
  }
  z.slack_ = slack;
  return z;
}

AffineForm subAF(const AffineForm& a, const AffineForm& b) { return addAF(a, b.negated()); }

AffineForm scaleAF(const AffineForm& a, double s) {
  AffineForm z;
  z.center_ = a.center_ * s;
  double slack = slackAcc(mulUp(a.slack_, std::fabs(s)), std::fma(a.center_, s, -z.center_));
  for (const auto& [id, c] : a.terms_) {
    double p = c * s;
    slack = slackAcc(slack, std::fma(c, s, -p));
    if (p != 0.0) z.terms_.emplace_back(id, p);
  }
  z.slack_ = slack;
  return z;
}

AffineForm mulAF(const AffineForm& a, const AffineForm& b, AffineContext& ctx) {
  AffineForm z;
  z.center_ = a.center_ * b.center_;
  double slack = slackAcc(0.0, std::fma(a.center_, b.center_, -z.center_));
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  while (ia != a.terms_.end() || ib != b.terms_.end()) {
    if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
      double p = ia->second * b.center_;
      slack = slackAcc(slack, std::fma(ia->second, b.center_, -p));
      if (p != 0.0) z.terms_.emplace_back(ia->first, p);
      ++ia;
    } else if (ia == a.terms_.end() || ib->first < ia->first) {
      double p = ib->second * a.center_;
      slack = slackAcc(slack, std::fma(ib->second, a.center_, -p));
      if (p != 0.0) z.terms_.emplace_back(ib->first, p);
      ++ib;
    } else {
      double p1 = ia->second * b.center_;
      double p2 = ib->second * a.center_;
      slack = slackAcc(slack, std::fma(ia->second, b.center_, -p1));
      slack = slackAcc(slack, std::fma(ib->second, a.center_, -p2));
      double c = p1 + p2;
      slack = slackAcc(slack, twoSumErr(p1, p2, c));
      if (c != 0.0) z.terms_.emplace_back(ia->first, c);
      ++ia;
      ++ib;
    }
  }
  // Quadratic remainder: |D_a * D_b| <= rad(a) * rad(b), as a fresh symbol.
  double rem = mulUp(a.radiusUp(), b.radiusUp());
  if (rem > 0.0) z.terms_.emplace_back(ctx.fresh(), rem);
  z.slack_ = slack;
  return z;
}

namespace {

// Mean-value linearization of f over the value range of x: for x0 = mid and
// any slope alpha, f(t) is contained in alpha*t + [f(x0) - alpha*x0 + (D -
// alpha)(I - x0)] with D an enclosure of f' on I. Falls back to plain boxing
// when that is tighter or when the derivative enclosure is unavailable.
AffineForm linearizeGeneric(const AffineForm& x, const Interval& I, const Interval& fRange,
                            bool haveDeriv, const Interval& deriv, const Interval& fAtMid,
                            AffineContext& ctx) {
  AffineForm boxed;
  {
    AffineForm f(fRange.mid());
    boxed = f.withFresh(fRange.rad(), ctx);
  }
  if (!haveDeriv) return boxed;

  double alpha = deriv.mid();
  double x0 = I.mid();
  Interval G;
  try {
    G = fAtMid + (deriv - Interval::point(alpha)) * (I - Interval::point(x0)) -
        scaleI(Interval::point(x0), alpha);
  } catch (const Error&) {
    return boxed;
  }
  AffineForm lin = scaleAF(x, alpha);
  AffineForm linC(G.mid());
  lin = addAF(lin, linC).withFresh(G.rad(), ctx);
  // Keep whichever enclosure is narrower.
  if (lin.radiusUp() < boxed.radiusUp()) return lin;
  return boxed;
}

Interval derivEnclosure(Op op, const Interval& I, bool& ok) {
  ok = true;
  try {
    switch (op) {
      case Op::Sin: return cosI(I);
      case Op::Cos: return -sinI(I);
      case Op::Tan: {
        Interval t = tanI(I);
        return Interval(1.0, 1.0) + t * t;
      }
      case Op::Exp: return expI(I);
      case Op::Log: return Interval(1.0, 1.0) / I;
      case Op::Sqrt: {
        if (I.lo <= 0.0) break;
        return Interval(1.0, 1.0) / (scaleI(sqrtI(I), 2.0));
      }
      default: break;
    }
  } catch (const Error&) {
  }
  ok = false;
  return Interval(0.0, 0.0);
}

}  // namespace

AffineForm linearizeOnRange(const AffineForm& x, const Interval& xRange, Op op,
                            AffineContext& ctx) {
  Interval F = fnI(op, xRange);  // validates the domain
  bool ok = false;
  Interval D = derivEnclosure(op, xRange, ok);
  Interval F0 = ok ? fnI(op, Interval::point(xRange.mid())) : Interval(0.0, 0.0);
  return linearizeGeneric(x, xRange, F, ok, D, F0, ctx);
}

AffineForm linearizeAF(const AffineForm& x, Op op, AffineContext& ctx) {
  return linearizeOnRange(x, x.hull(), op, ctx);
}

AffineForm inverseOnRange(const AffineForm& x, const Interval& xRange, AffineContext& ctx) {
  if (xRange.containsZero())
    throw Error(ErrCode::Domain, "division by a range straddling zero");
  Interval one(1.0, 1.0);
  Interval F = one / xRange;
  Interval D = -(one / (xRange * xRange));
  Interval F0 = one / Interval::point(xRange.mid());
  return linearizeGeneric(x, xRange, F, true, D, F0, ctx);
}

AffineForm divAF(const AffineForm& a, const AffineForm& b, AffineContext& ctx) {
  return mulAF(a, inverseOnRange(b, b.hull(), ctx), ctx);
}

AffineForm mulIntervalAF(const AffineForm& a, const Interval& s, AffineContext& ctx) {
  AffineForm z = scaleAF(a, s.mid());
  double extra = mulUp(a.maxAbsUp(), s.rad());
  return z.withFresh(extra, ctx);
}

namespace {

// Shared subtrees must map to identical forms (same noise symbols), both for
// cancellation (x - x) and for deterministic symbol allocation, so the
// evaluation is memoized per node.
AffineForm affineEvalRec(const ExprPtr& e, const AffineEnv& env, AffineContext& ctx,
                         std::map<const Expr*, AffineForm>& cache) {
  auto hit = cache.find(e.get());
  if (hit != cache.end()) return hit->second;
  AffineForm r;
  switch (e->op) {
    case Op::Const: {
      double lo = toDoubleDown(parseLiteralDown(e->sym));
      double hi = toDoubleUp(parseLiteralUp(e->sym));
      AffineForm f(e->value);
      double dev = std::max(subUp(hi, e->value), subUp(e->value, lo));
      r = f.withFresh(std::max(dev, 0.0), ctx);
      break;
    }
    case Op::Var: {
      auto it = env.find(e->sym);
      if (it == env.end()) throw Error(ErrCode::Domain, "unbound variable " + e->sym);
      r = it->second;
      break;
    }
    case Op::Neg:
      r = affineEvalRec(e->a, env, ctx, cache).negated();
      break;
    case Op::Add:
      r = addAF(affineEvalRec(e->a, env, ctx, cache), affineEvalRec(e->b, env, ctx, cache));
      break;
    case Op::Sub:
      r = subAF(affineEvalRec(e->a, env, ctx, cache), affineEvalRec(e->b, env, ctx, cache));
      break;
    case Op::Mul:
      r = mulAF(affineEvalRec(e->a, env, ctx, cache), affineEvalRec(e->b, env, ctx, cache), ctx);
      break;
    case Op::Div:
      r = divAF(affineEvalRec(e->a, env, ctx, cache), affineEvalRec(e->b, env, ctx, cache), ctx);
      break;
    default:
      r = linearizeAF(affineEvalRec(e->a, env, ctx, cache), e->op, ctx);
      break;
  }
  cache.emplace(e.get(), r);
  return r;
}

}  // namespace

AffineForm affineEval(const ExprPtr& e, const AffineEnv& env, AffineContext& ctx) {
  std::map<const Expr*, AffineForm> cache;
  return affineEvalRec(e, env, ctx, cache);
}

}  // namespace approxcc
