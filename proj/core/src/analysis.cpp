#include "approxcc/analysis.hpp"

#include <cmath>

#include "approxcc/bigreal.hpp"
#include "approxcc/derivative.hpp"

namespace approxcc {

const FloatFormat& FloatFormat::binary64() {
  // The model's subnormal bound is 2^-1075; the smallest double dominating
  // it is 2^-1074.
  static const FloatFormat f{"binary64", 0x1p-53, 0x1p-1074};
  return f;
}

const FloatFormat& FloatFormat::binary32() {
  static const FloatFormat f{"binary32", 0x1p-24, 0x1p-150};
  return f;
}

double FnErrorModel::relFactor(Op op) const {
  auto it = perFnRelFactor.find(op);
  return it == perFnRelFactor.end() ? defaultRelFactor : it->second;
}

FnErrorModel FnErrorModel::libm() { return FnErrorModel{}; }

const TargetSite* AnalysisResult::site(const std::string& local) const {
  for (const auto& s : sites)
    if (s.local == local) return &s;
  return nullptr;
}

namespace {

struct NodeState {
  Interval range = Interval(0.0, 0.0);  // real value range
  AffineForm val;                        // affine form of the real value
  AffineForm err;                        // affine form of (computed - real)
};

class Analyzer {
 public:
  Analyzer(const FloatFormat& fmt, const FnErrorModel& fem, bool f32Consts)
      : fmt_(fmt), fem_(fem), f32Consts_(f32Consts) {}

  using Scope = std::map<std::string, NodeState>;
  using Memo = std::map<const Expr*, NodeState>;

  NodeState walk(const ExprPtr& e, const Scope& scope, Memo& memo) {
    auto hit = memo.find(e.get());
    if (hit != memo.end()) return hit->second;
    NodeState s = compute(e, scope, memo);
    if (!std::isfinite(s.range.lo) || !std::isfinite(s.range.hi))
      throw Error(ErrCode::RangeBlowup, "non-finite range");
    memo.emplace(e.get(), s);
    return s;
  }

  // Applies one elementary call / certified approximation to an argument.
  NodeState applyCall(Op op, const NodeState& arg) {
    NodeState z;
    z.range = fnI(op, arg.range);
    z.val = linearizeOnRange(arg.val, arg.range, op, ctx_);
    z.range = refine(z.range, z.val);
    Interval fpArg = fpRange(arg);
    Interval slope = callSlope(op, fpArg);
    AffineForm prop = mulIntervalAF(arg.err, slope, ctx_);
    double mag = fnI(op, fpArg).maxAbs();
    double local = addUp(mulUp(mulUp(fem_.relFactor(op), fmt_.eps), mag), fmt_.delta);
    z.err = prop.withFresh(local, ctx_);
    return z;
  }

  NodeState applyCert(const Target& t, const NodeState& arg, const FnErrorModel::Cert& cert) {
    NodeState z;
    Scope bodyScope{{t.formal, realOnly(arg)}};
    Memo bodyMemo;
    NodeState real = walk(t.body, bodyScope, bodyMemo);
    z.range = real.range;
    z.val = real.val;
    Interval fpArg = fpRange(arg);
    if (!cert.domain.contains(fpArg))
      throw Error(ErrCode::UnmappedTarget,
                  "certified domain of " + t.local + " does not cover the argument range");
    ExprPtr d = differentiate(t.body, t.formal);
    Interval slope = intervalEval(d, {{t.formal, fpArg}});
    AffineForm prop = mulIntervalAF(arg.err, slope, ctx_);
    z.err = prop.withFresh(cert.absError, ctx_);
    if (f32Consts_) {
      // binary32 program arithmetic: the binary64 kernel result is cast once.
      double mag = addUp(z.range.maxAbs(), z.err.maxAbsUp());
      z.err = z.err.withFresh(addUp(mulUp(fmt_.eps, mag), fmt_.delta), ctx_);
    }
    return z;
  }

  NodeState paramState(const Interval& domain) {
    NodeState s;
    s.range = domain;
    s.val = AffineForm::fromInterval(domain, ctx_);
    s.err = AffineForm(0.0);
    return s;
  }

  Interval fpRange(const NodeState& s) const {
    Interval eh = s.err.hull();
    return Interval(addDown(s.range.lo, eh.lo), addUp(s.range.hi, eh.hi));
  }

  AffineContext& ctx() { return ctx_; }

 private:
  static NodeState realOnly(const NodeState& s) {
    // For computing the real range/value of a target body, drop the error.
    NodeState r = s;
    r.err = AffineForm(0.0);
    return r;
  }

  static Interval refine(const Interval& byInterval, const AffineForm& val) {
    Interval h = val.hull();
    double lo = std::max(byInterval.lo, h.lo);
    double hi = std::min(byInterval.hi, h.hi);
    if (lo > hi) return byInterval;  // disjoint only through rounding; keep interval
    return Interval(lo, hi);
  }

  Interval callSlope(Op op, const Interval& I) {
    switch (op) {
      case Op::Sin: return cosI(I);
      case Op::Cos: return -sinI(I);
      case Op::Tan: {
        Interval t = tanI(I);
        return Interval(1.0, 1.0) + t * t;
      }
      case Op::Exp: return expI(I);
      case Op::Log: return Interval(1.0, 1.0) / I;
      default: throw Error(ErrCode::Unsupported, "callSlope");
    }
  }

  double newRounding(const Interval& computedRange) const {
    return addUp(mulUp(fmt_.eps, computedRange.maxAbs()), fmt_.delta);
  }

  NodeState compute(const ExprPtr& e, const Scope& scope, Memo& memo) {
    NodeState z;
    switch (e->op) {
      case Op::Const: {
        double lo = toDoubleDown(parseLiteralDown(e->sym));
        double hi = toDoubleUp(parseLiteralUp(e->sym));
        z.range = Interval(lo, hi);
        z.val = AffineForm(e->value).withFresh(std::max(subUp(hi, e->value), subUp(e->value, lo)),
                                               ctx_);
        double repr = f32Consts_ ? literalReprError32(e->sym) : literalReprError64(e->sym);
        z.err = AffineForm(0.0).withFresh(repr, ctx_);
        return z;
      }
      case Op::Var: {
        auto it = scope.find(e->sym);
        if (it == scope.end()) throw Error(ErrCode::Domain, "unbound variable " + e->sym);
        return it->second;
      }
      case Op::Neg: {
        NodeState a = walk(e->a, scope, memo);
        z.range = -a.range;
        z.val = a.val.negated();
        z.err = a.err.negated();  // unary minus introduces no roundoff
        return z;
      }
      case Op::Add:
      case Op::Sub: {
        NodeState a = walk(e->a, scope, memo);
        NodeState b = walk(e->b, scope, memo);
        bool isAdd = e->op == Op::Add;
        z.range = isAdd ? a.range + b.range : a.range - b.range;
        z.val = isAdd ? addAF(a.val, b.val) : subAF(a.val, b.val);
        z.range = refine(z.range, z.val);
        AffineForm pre = isAdd ? addAF(a.err, b.err) : subAF(a.err, b.err);
        Interval computed = z.range + pre.hull();
        z.err = pre.withFresh(newRounding(computed), ctx_);
        return z;
      }
      case Op::Mul: {
        NodeState a = walk(e->a, scope, memo);
        NodeState b = walk(e->b, scope, memo);
        z.range = a.range * b.range;
        z.val = mulAF(a.val, b.val, ctx_);
        z.range = refine(z.range, z.val);
        // x~*y~ - x*y = x*ey + y*ex + ex*ey
        AffineForm pre = addAF(mulIntervalAF(b.err, a.range, ctx_),
                               mulIntervalAF(a.err, b.range, ctx_));
        double cross = mulUp(a.err.maxAbsUp(), b.err.maxAbsUp());
        pre = pre.withFresh(cross, ctx_);
        Interval computed = z.range + pre.hull();
        z.err = pre.withFresh(newRounding(computed), ctx_);
        return z;
      }
      case Op::Div: {
        NodeState a = walk(e->a, scope, memo);
        NodeState b = walk(e->b, scope, memo);
        Interval fpB = fpRange(b);
        if (fpB.containsZero())
          throw Error(ErrCode::Domain, "divisor range cannot exclude zero");
        z.range = a.range / b.range;
        z.val = mulAF(a.val, inverseOnRange(b.val, b.range, ctx_), ctx_);
        z.range = refine(z.range, z.val);
        // x~/y~ - x/y = ex/y~ - x*ey/(y*y~)
        Interval one(1.0, 1.0);
        AffineForm pre = subAF(mulIntervalAF(a.err, one / fpB, ctx_),
                               mulIntervalAF(b.err, a.range / (b.range * fpB), ctx_));
        Interval computed = z.range + pre.hull();
        z.err = pre.withFresh(newRounding(computed), ctx_);
        return z;
      }
      case Op::Sqrt: {
        NodeState a = walk(e->a, scope, memo);
        Interval fpA = fpRange(a);
        if (fpA.lo < 0.0)
          throw Error(ErrCode::Domain, "sqrt argument range cannot exclude negatives");
        z.range = sqrtI(a.range);
        z.val = linearizeOnRange(a.val, a.range, Op::Sqrt, ctx_);
        z.range = refine(z.range, z.val);
        // sqrt(x~) - sqrt(x) = ex / (sqrt(x~) + sqrt(x))
        Interval denom = sqrtI(fpA) + z.range;
        AffineForm pre;
        if (denom.lo > 0.0) {
          pre = mulIntervalAF(a.err, Interval(1.0, 1.0) / denom, ctx_);
        } else {
          // argument range touches zero: |sqrt(x~) - sqrt(x)| <= sqrt(|ex|)
          pre = AffineForm(0.0).withFresh(fnUp(Op::Sqrt, a.err.maxAbsUp()), ctx_);
        }
        Interval computed = sqrtI(fpA) + pre.hull();
        z.err = pre.withFresh(newRounding(computed), ctx_);
        return z;
      }
      default: {  // elementary call outside a target binding: libm model
        NodeState a = walk(e->a, scope, memo);
        return applyCall(e->op, a);
      }
    }
  }

  const FloatFormat& fmt_;
  const FnErrorModel& fem_;
  bool f32Consts_;
  AffineContext ctx_;
};

}  // namespace

AnalysisResult analyzeRoundoff(const DecomposedProgram& dp, const FloatFormat& fmt,
                               const FnErrorModel& fem) {
  Analyzer an(fmt, fem, fmt.name == "binary32");
  Analyzer::Scope scope;
  for (const auto& p : dp.program.params) scope.emplace(p.name, an.paramState(p.domain));

  AnalysisResult res;
  Analyzer::Memo memo;
  for (const auto& let : dp.program.lets) {
    const Target* t = dp.findTarget(let.name);
    NodeState out;
    if (t) {
      NodeState arg = an.walk(t->arg, scope, memo);
      TargetSite site;
      site.local = t->local;
      site.argRange = arg.range;
      site.argError = arg.err.maxAbsUp();
      site.argFpRange = an.fpRange(arg);
      auto cert = fem.certs.find(t->local);
      if (cert != fem.certs.end()) {
        out = an.applyCert(*t, arg, cert->second);
      } else if (isElementary(t->body->op) && t->body->a->op == Op::Var &&
                 t->body->a->sym == t->formal) {
        out = an.applyCall(t->body->op, arg);
      } else {
        Analyzer::Scope bodyScope{{t->formal, arg}};
        Analyzer::Memo bodyMemo;
        out = an.walk(t->body, bodyScope, bodyMemo);
      }
      site.outRange = out.range;
      site.outError = out.err.maxAbsUp();
      res.sites.push_back(site);
    } else {
      out = an.walk(let.expr, scope, memo);
    }
    res.lets.push_back({let.name, out.range, out.err.maxAbsUp()});
    scope.emplace(let.name, out);
  }

  NodeState final = an.walk(dp.program.result, scope, memo);
  res.total = final.err.maxAbsUp();
  res.resultRange = final.range;
  return res;
}

AnalysisResult analyzeRoundoff(const Program& p, const FloatFormat& fmt, const FnErrorModel& fem) {
  DecomposedProgram dp;
  dp.program = p;
  dp.program.lets.clear();
  dp.program.result = inlineLets(p);
  return analyzeRoundoff(dp, fmt, fem);
}

}  // namespace approxcc
