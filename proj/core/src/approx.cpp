#include "approxcc/approx.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "approxcc/bound.hpp"
#include "approxcc/derivative.hpp"

namespace approxcc {

namespace {

constexpr double kEps64 = 0x1p-53;
constexpr double kDelta64 = 0x1p-1074;
constexpr double kSqrtHalf = 0x1.6a09e667f3bcdp-1;  // nearest double to sqrt(1/2)

double roundToBits(const BigReal& v, int bits) {
  mpfr_t t;
  mpfr_init2(t, bits);
  mpfr_set(t, v.backend().data(), MPFR_RNDN);
  double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

Interval widenRelEps(const Interval& I, double relEps, double delta) {
  return widenI(I, addUp(mulUp(I.maxAbs(), relEps), delta));
}

BigReal evalBody(const ExprPtr& body, const std::string& formal, const BigReal& x) {
  return referenceEval(body, {{formal, x}});
}

}  // namespace

const char* Reduction::name() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::OddFold: return "odd-fold";
    case Kind::EvenFold: return "even-fold";
    case Kind::PeriodicFold: return "periodic-fold";
    case Kind::ExpScale: return "exp-scale";
    case Kind::LogDecompose: return "log-decompose";
    case Kind::SqrtScale: return "sqrt-scale";
  }
  return "?";
}

std::vector<int> degreeCandidates(const ExprPtr& body) {
  if (containsOp(body, Op::Sin) || containsOp(body, Op::Cos)) return {12, 16, 20, 24};
  return {4, 8, 12, 16};
}

namespace {

struct FoldOut {
  bool ok = false;
  Interval reduced = Interval(0.0, 0.0);  // hull of the computed r values
  double argErr = 0.0;                    // max |computed r - exact reduced arg|
  long kMin = 0, kMax = 0;
};

// Range and error analysis of the two-term Cody-Waite reduction
// r = (x - k*c1) - k*c2 with k = nearbyint(x * invStep), over x in D.
FoldOut analyzeFold(const Interval& D, const BigReal& stepBig, double invStep, double c1,
                    double c2) {
  FoldOut out;
  Interval T = widenRelEps(scaleI(D, invStep), 2 * kEps64, kDelta64);
  long kLo = static_cast<long>(std::floor(T.lo + 0.5)) - 1;
  long kHi = static_cast<long>(std::floor(T.hi + 0.5)) + 1;
  if (kHi - kLo > 4096 || std::fabs(static_cast<double>(kLo)) > 0x1p20 ||
      std::fabs(static_cast<double>(kHi)) > 0x1p20)
    return out;
  double dStep = toDoubleUp(abs(stepBig - BigReal(c1) - BigReal(c2)));

  bool any = false;
  Interval hull(0.0, 0.0);
  double argErr = 0.0;
  long usedMin = 0, usedMax = 0;
  for (long k = kLo; k <= kHi; ++k) {
    Interval band(static_cast<double>(k) - 0.5, static_cast<double>(k) + 0.5);
    Interval pre = widenRelEps(band / Interval::point(invStep), 4 * kEps64, kDelta64);
    double lo = std::max(D.lo, pre.lo);
    double hi = std::min(D.hi, pre.hi);
    if (lo > hi) continue;
    Interval Xk(lo, hi);
    double kd = static_cast<double>(k);
    Interval KC1 = Interval::point(kd) * Interval::point(c1);
    Interval T1 = Xk - KC1;
    // Sterbenz: the first subtraction is exact when |k*c1|/2 <= |x| <= 2|k*c1|
    // with matching signs.
    bool exact1 = (k == 0);
    if (!exact1 && KC1.lo == KC1.hi && KC1.lo != 0.0) {
      double m = std::fabs(KC1.lo);
      bool sameSign = KC1.lo > 0.0 ? Xk.lo > 0.0 : Xk.hi < 0.0;
      double alo = std::min(std::fabs(Xk.lo), std::fabs(Xk.hi));
      double ahi = std::max(std::fabs(Xk.lo), std::fabs(Xk.hi));
      exact1 = sameSign && alo >= 0.5 * m * (1 + 1e-9) && ahi <= 2.0 * m * (1 - 1e-9);
    }
    double e1 = 0.0;
    Interval T1f = T1;
    if (!exact1) {
      e1 = addUp(mulUp(kEps64, T1.maxAbs()), kDelta64);
      T1f = widenRelEps(T1, kEps64, kDelta64);
    }
    Interval KC2 = Interval::point(kd) * Interval::point(c2);
    double e2a = subUp(KC2.hi, KC2.lo);  // rounding of the k*c2 product
    Interval T2 = T1f - KC2;
    double e2b = addUp(mulUp(kEps64, T2.maxAbs()), kDelta64);
    Interval Rk = widenRelEps(T2, kEps64, kDelta64);
    double err = addUp(addUp(e1, addUp(e2a, e2b)), mulUp(std::fabs(kd), dStep));
    if (!any) {
      hull = Rk;
      usedMin = usedMax = k;
      any = true;
    } else {
      hull = hullI(hull, Rk);
      usedMin = std::min(usedMin, k);
      usedMax = std::max(usedMax, k);
    }
    argErr = std::max(argErr, err);
  }
  if (!any) return out;
  out.ok = true;
  out.reduced = hull;
  out.argErr = argErr;
  out.kMin = usedMin;
  out.kMax = usedMax;
  return out;
}

// frexp-based mantissa with the range normalized to [sqrt(1/2), sqrt(2)).
double logMantissa(double x, int& eAdj) {
  int e = 0;
  double m = std::frexp(x, &e);
  if (m < kSqrtHalf) {
    m = m * 2.0;
    e -= 1;
  }
  eAdj = e;
  return m;
}

// frexp-based mantissa with the exponent made even (m in [0.5, 2)).
double sqrtMantissa(double x, int& eAdj) {
  int e = 0;
  double m = std::frexp(x, &e);
  if (e & 1) {
    m = m * 2.0;
    e -= 1;
  }
  eAdj = e;
  return m;
}

double derivMaxOn(const ExprPtr& body, const std::string& formal, const Interval& dom) {
  ExprPtr d = differentiate(body, formal);
  return boundAbs(d, {{formal, dom}}, 256);
}

}  // namespace

ReducedProblem reduceArgument(const ApproxSpec& spec) {
  ReducedProblem out;
  out.fitDomain = spec.domain;
  const ExprPtr& b = spec.body;
  bool bareHead = arity(b->op) == 1 && b->a && b->a->op == Op::Var && b->a->sym == spec.formal;
  if (!bareHead) return out;  // compounds never match the exact head identities
  const Interval& D = spec.domain;

  auto finish = [&](Reduction red, Interval fitDom, bool chargeDeriv) {
    if (!(fitDom.width() < D.width())) return;  // must strictly shrink
    out.red = red;
    out.fitDomain = fitDom;
    if (chargeDeriv) {
      Interval derivDom =
          red.parityOdd || red.parityEven ? Interval(-fitDom.hi, fitDom.hi) : fitDom;
      out.derivMax = derivMaxOn(b, spec.formal, widenI(derivDom, red.argErrorBound));
    }
  };

  switch (b->op) {
    case Op::Sin:
    case Op::Cos:
    case Op::Tan: {
      BigReal period = b->op == Op::Tan ? bigPi() : 2 * bigPi();
      double halfPeriod = toDoubleDown(period / 2);
      bool odd = b->op != Op::Cos;
      if (D.lo >= -halfPeriod && D.hi <= halfPeriod) {
        // within one period already; a parity fold applies when the domain
        // straddles zero
        if (D.lo < 0.0 && D.hi > 0.0) {
          Reduction red;
          red.kind = odd ? Reduction::Kind::OddFold : Reduction::Kind::EvenFold;
          finish(red, Interval(0.0, D.maxAbs()), false);
        }
        return out;
      }
      double invStep = toDoubleNearest(1 / period);
      double c1 = roundToBits(period, 30);
      double c2 = toDoubleNearest(period - BigReal(c1));
      FoldOut fo = analyzeFold(D, period, invStep, c1, c2);
      if (!fo.ok) return out;
      Reduction red;
      red.kind = Reduction::Kind::PeriodicFold;
      red.invStep = invStep;
      red.c1 = c1;
      red.c2 = c2;
      red.kMin = fo.kMin;
      red.kMax = fo.kMax;
      red.argErrorBound = fo.argErr;
      red.parityOdd = odd && fo.reduced.lo < 0.0 && fo.reduced.hi > 0.0;
      red.parityEven = !odd && fo.reduced.lo < 0.0 && fo.reduced.hi > 0.0;
      Interval fitDom = (red.parityOdd || red.parityEven) ? Interval(0.0, fo.reduced.maxAbs())
                                                          : fo.reduced;
      finish(red, fitDom, true);
      return out;
    }
    case Op::Exp: {
      Interval range = expI(D);
      if (range.lo < 1e-280) return out;  // keep the 2^k scaling away from subnormals
      BigReal step = bigLn2();
      double invStep = toDoubleNearest(1 / step);
      double c1 = roundToBits(step, 30);
      double c2 = toDoubleNearest(step - BigReal(c1));
      FoldOut fo = analyzeFold(D, step, invStep, c1, c2);
      if (!fo.ok) return out;
      Reduction red;
      red.kind = Reduction::Kind::ExpScale;
      red.invStep = invStep;
      red.c1 = c1;
      red.c2 = c2;
      red.kMin = fo.kMin;
      red.kMax = fo.kMax;
      red.argErrorBound = fo.argErr;
      red.scaleMax = std::ldexp(1.0, static_cast<int>(fo.kMax));
      finish(red, fo.reduced, true);
      return out;
    }
    case Op::Log: {
      if (D.lo <= 0.0) return out;
      int eLo = 0, eHi = 0;
      double mLo = logMantissa(D.lo, eLo);
      double mHi = logMantissa(D.hi, eHi);
      Interval fitDom = eLo == eHi ? Interval(std::min(mLo, mHi), std::max(mLo, mHi))
                                   : Interval(kSqrtHalf, 2.0 * kSqrtHalf);
      Reduction red;
      red.kind = Reduction::Kind::LogDecompose;
      BigReal ln2 = bigLn2();
      red.c1 = roundToBits(ln2, 30);
      red.c2 = toDoubleNearest(ln2 - BigReal(red.c1));
      red.kMin = eLo;
      red.kMax = eHi;
      // reconstruction y = k*c1 + (k*c2 + p(m)); k*c1 is exact through the
      // trailing-zero split, everything else is charged here
      double dLn2 = toDoubleUp(abs(ln2 - BigReal(red.c1) - BigReal(red.c2)));
      Interval K(static_cast<double>(eLo), static_cast<double>(eHi));
      Interval KL2 = K * Interval::point(red.c2);
      double eKL2 = mulUp(kEps64, KL2.maxAbs());
      Interval Y = widenI(logI(fitDom), addUp(spec.targetEps, 1e-12));
      Interval S1 = KL2 + Y;
      double eS1 = addUp(mulUp(kEps64, S1.maxAbs()), kDelta64);
      Interval S2 = K * Interval::point(red.c1) + S1;
      double eS2 = addUp(mulUp(kEps64, S2.maxAbs()), kDelta64);
      red.reconError = addUp(addUp(eKL2, addUp(eS1, eS2)), mulUp(K.maxAbs(), dLn2));
      finish(red, fitDom, false);
      return out;
    }
    case Op::Sqrt: {
      if (D.lo < 0.0 || D.hi <= 0.0) return out;
      double posLo = D.lo > 0.0 ? D.lo : std::min(D.hi, 0x1p-1074);
      int eLo = 0, eHi = 0;
      double mLo = sqrtMantissa(posLo, eLo);
      double mHi = sqrtMantissa(D.hi, eHi);
      Interval fitDom;
      if (D.lo == 0.0 || eLo != eHi)
        fitDom = Interval(0.5, 2.0);
      else
        fitDom = Interval(std::min(mLo, mHi), std::max(mLo, mHi));
      Reduction red;
      red.kind = Reduction::Kind::SqrtScale;
      red.kMin = eLo / 2;
      red.kMax = eHi / 2;
      red.scaleMax = std::ldexp(1.0, eHi / 2);
      finish(red, fitDom, false);
      return out;
    }
    default:
      return out;
  }
}

namespace {

Interval hornerInterval(const std::vector<Interval>& coeffs, const Interval& t) {
  if (coeffs.empty()) return Interval(0.0, 0.0);
  Interval acc = coeffs.back();
  for (size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * t + coeffs[i];
  return acc;
}

std::vector<Interval> pointCoeffs(const std::vector<double>& c) {
  std::vector<Interval> out;
  out.reserve(c.size());
  for (double v : c) out.push_back(Interval::point(v));
  return out;
}

std::vector<Interval> derivCoeffs(const std::vector<double>& c) {
  std::vector<Interval> out;
  for (size_t i = 1; i < c.size(); ++i) {
    double k = static_cast<double>(i);
    out.push_back(Interval(mulDown(k, c[i]), mulUp(k, c[i])));
  }
  return out;
}

// Horner evaluation expression for the roundoff analysis; mirrors
// evalApproxImpl and the emitted C exactly (shared (x - center) node, then
// acc = acc*u + c_i).
ExprPtr hornerExpr(const PolyPiece& piece) {
  using namespace build;
  ExprPtr x = var("x");
  ExprPtr u = piece.center == 0.0 ? x : sub(x, cstd(piece.center));
  ExprPtr acc = cstd(piece.coeffs.back());
  for (size_t i = piece.coeffs.size() - 1; i-- > 0;)
    acc = add(mul(acc, u), cstd(piece.coeffs[i]));
  return acc;
}

double hornerRoundoffBound(const PolyPiece& piece) {
  if (piece.coeffs.empty()) return 0.0;
  if (piece.coeffs.size() == 1 && piece.center == 0.0) return 0.0;  // a bare constant
  Program p;
  p.name = "horner";
  p.params.push_back({"x", piece.dom, "", ""});
  p.result = hornerExpr(piece);
  return analyzeRoundoff(p, FloatFormat::binary64(), FnErrorModel::libm()).total;
}

}  // namespace

CertifyResult certifyError(const ExprPtr& body, const std::string& formal, const PolyPiece& piece,
                           int budget, double targetHint) {
  BigReal bigCenter(piece.center);
  // Exact derivative ladders of the polynomial (small-integer times double
  // is exact in BigReal) and symbolic derivatives of the body. The box bound
  // is a degree-4 Taylor form around the box midpoint: the first terms use
  // exact extended-precision midpoint values of e^(k) = f^(k) - p^(k), which
  // are tiny because p tracks f; only the remainder uses interval
  // enclosures, so its looseness is scaled by rad^4.
  std::vector<std::vector<BigReal>> pk(5);
  pk[0].reserve(piece.coeffs.size());
  for (double c : piece.coeffs) pk[0].emplace_back(c);
  for (int k = 1; k <= 4; ++k) {
    const auto& prev = pk[k - 1];
    if (prev.size() <= 1) break;
    pk[k].resize(prev.size() - 1);
    for (size_t i = 0; i + 1 < prev.size(); ++i)
      pk[k][i] = prev[i + 1] * BigReal(static_cast<double>(i + 1));
  }
  std::vector<ExprPtr> fk(5);
  fk[0] = body;
  for (int k = 1; k <= 4; ++k) fk[k] = differentiate(fk[k - 1], formal);

  auto toIntervalCoeffs = [](const std::vector<BigReal>& c) {
    std::vector<Interval> out;
    out.reserve(c.size());
    for (const auto& v : c) out.emplace_back(toDoubleDown(v), toDoubleUp(v));
    return out;
  };
  std::vector<Interval> pc = pointCoeffs(piece.coeffs);
  std::vector<Interval> dc1 = toIntervalCoeffs(pk[1]);
  std::vector<Interval> dc4 = toIntervalCoeffs(pk[4]);

  const BigReal refSlackRel = pow(BigReal(2), -150);
  double sampledMax = 0.0;
  auto errAtMid = [&](double m, int k) {
    BigReal fm = referenceEval(fk[k], {{formal, BigReal(m)}});
    BigReal pm = polyEvalBig(pk[k], BigReal(m) - bigCenter);
    BigReal scale = std::max(BigReal(abs(fm)), BigReal(1));
    double v = toDoubleUp(abs(fm - pm) + scale * refSlackRel);
    if (k == 0) sampledMax = std::max(sampledMax, v);
    return v;
  };

  auto boundBox = [&](const Interval& X) {
    double em = errAtMid(X.mid(), 0);
    double r = X.rad();
    if (r == 0.0) return em;
    double ub = std::numeric_limits<double>::infinity();
    Interval t = X - Interval::point(piece.center);
    try {  // first-order mean value: effective on wide boxes
      Interval d1 = intervalEval(fk[1], {{formal, X}}) - hornerInterval(dc1, t);
      ub = addUp(em, mulUp(d1.maxAbs(), r));
    } catch (const Error&) {
    }
    try {  // direct enclosure
      Interval direct = intervalEval(body, {{formal, X}}) - hornerInterval(pc, t);
      ub = std::min(ub, direct.maxAbs());
    } catch (const Error&) {
    }
    try {  // fourth-order Taylor form with exact midpoint derivatives
      double acc = em;
      double rk = 1.0;
      const double fact[5] = {1.0, 1.0, 2.0, 6.0, 24.0};
      for (int k = 1; k <= 3; ++k) {
        rk = mulUp(rk, r);
        acc = addUp(acc, divUp(mulUp(errAtMid(X.mid(), k), rk), fact[k]));
      }
      Interval d4 = intervalEval(fk[4], {{formal, X}}) - hornerInterval(dc4, t);
      rk = mulUp(rk, r);
      acc = addUp(acc, divUp(mulUp(d4.maxAbs(), rk), fact[4]));
      ub = std::min(ub, acc);
    } catch (const Error&) {
    }
    return ub;
  };

  struct Node {
    double ub;
    int64_t seq;
    Interval box;
  };
  auto less = [](const Node& a, const Node& b) {
    if (a.ub != b.ub) return a.ub < b.ub;
    return a.seq > b.seq;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(less)> open(less);
  int64_t seq = 0;
  open.push({boundBox(piece.dom), seq++, piece.dom});
  double settled = 0.0;
  int used = 1;
  bool haveHint = targetHint > 0.0;
  while (!open.empty()) {
    double current = std::max(open.top().ub, settled);
    if (haveHint && current <= targetHint * 0.99) break;
    if (haveHint && sampledMax > targetHint) break;  // provably infeasible
    if (current <= mulUp(sampledMax, 1.25)) break;
    if (used >= budget) break;
    Node n = open.top();
    open.pop();
    double m = n.box.mid();
    if (!(m > n.box.lo) || !(m < n.box.hi)) {
      settled = std::max(settled, n.ub);
      continue;
    }
    Interval left(n.box.lo, m), right(m, n.box.hi);
    open.push({boundBox(left), seq++, left});
    open.push({boundBox(right), seq++, right});
    used += 2;
  }
  double method = settled;
  while (!open.empty()) {
    method = std::max(method, open.top().ub);
    open.pop();
  }
  if (!std::isfinite(method))
    throw Error(ErrCode::CertificationTooWide, "no finite method-error enclosure");
  if (used >= budget && (!haveHint || method > targetHint) && method > 2.0 * sampledMax)
    throw Error(ErrCode::CertificationTooWide, "method bound stuck above 2x sampled error");

  double total = addUp(method, hornerRoundoffBound(piece));
  return {total, sampledMax};
}

namespace {

using Clock = std::chrono::steady_clock;

void fitPieces(const ApproxSpec& spec, const Interval& dom, int degree, double pieceEps,
               double minWidth, Clock::time_point deadline, std::vector<PolyPiece>& out) {
  if (Clock::now() > deadline)
    throw Error(ErrCode::ExecutionFailure, "timeout while fitting " + spec.name);
  if (static_cast<int>(out.size()) >= spec.maxSplits)
    throw Error(ErrCode::SplitLimitExceeded,
                spec.name + ": more than " + std::to_string(spec.maxSplits) + " pieces");

  RealFn f = [&](const BigReal& x) { return evalBody(spec.body, spec.formal, x); };
  PolyPiece piece;
  piece.dom = dom;
  piece.center = dom.mid();
  MinimaxFit fit = fitMinimax(f, degree, dom, piece.center);
  piece.coeffs = roundCoeffs(fit.coeffs);

  bool feasible = false;
  try {
    CertifyResult cr = certifyError(spec.body, spec.formal, piece, spec.certifyBudget, pieceEps);
    if (cr.bound <= pieceEps) {
      piece.certifiedError = cr.bound;
      feasible = true;
    }
  } catch (const Error& e) {
    if (e.code != ErrCode::CertificationTooWide) throw;
  }
  if (feasible) {
    out.push_back(std::move(piece));
    return;
  }
  double m = dom.mid();
  if (dom.width() <= minWidth || !(m > dom.lo) || !(m < dom.hi))
    throw Error(ErrCode::CertificationTooWide,
                spec.name + ": minimum piece width reached without a certified fit");
  fitPieces(spec, Interval(dom.lo, m), degree, pieceEps, minWidth, deadline, out);
  fitPieces(spec, Interval(m, dom.hi), degree, pieceEps, minWidth, deadline, out);
}

}  // namespace

ApproxImpl buildImpl(const ApproxSpec& spec, int degree, Clock::time_point deadline) {
  if (!(spec.targetEps > 0.0))
    throw Error(ErrCode::NoFeasibleApprox, spec.name + ": non-positive local budget");
  ReducedProblem rp = reduceArgument(spec);
  const Reduction& red = rp.red;

  double base = spec.targetEps * 0.995;
  double pieceEps = base;
  switch (red.kind) {
    case Reduction::Kind::PeriodicFold:
      pieceEps = base - mulUp(rp.derivMax, red.argErrorBound);
      break;
    case Reduction::Kind::ExpScale:
      pieceEps = base / red.scaleMax - mulUp(rp.derivMax, red.argErrorBound);
      break;
    case Reduction::Kind::LogDecompose:
      pieceEps = base - red.reconError;
      break;
    case Reduction::Kind::SqrtScale:
      pieceEps = base / red.scaleMax;
      break;
    default:
      break;
  }
  if (!(pieceEps > 0.0))
    throw Error(ErrCode::NoFeasibleApprox,
                spec.name + ": reduction overhead exceeds the local budget");

  ApproxImpl impl;
  impl.name = spec.name;
  impl.reduction = red;
  impl.degree = degree;
  impl.certifiedDomain = spec.domain;
  double minWidth = rp.fitDomain.width() * 0x1p-20;
  fitPieces(spec, rp.fitDomain, degree, pieceEps, minWidth, deadline, impl.pieces);

  double pmax = 0.0;
  for (const auto& p : impl.pieces) pmax = std::max(pmax, p.certifiedError);
  double total = pmax;
  switch (red.kind) {
    case Reduction::Kind::PeriodicFold:
      total = addUp(pmax, mulUp(rp.derivMax, red.argErrorBound));
      break;
    case Reduction::Kind::ExpScale:
      total = mulUp(red.scaleMax, addUp(pmax, mulUp(rp.derivMax, red.argErrorBound)));
      break;
    case Reduction::Kind::LogDecompose:
      total = addUp(pmax, red.reconError);
      break;
    case Reduction::Kind::SqrtScale:
      total = mulUp(red.scaleMax, pmax);
      break;
    default:
      break;
  }
  if (total > spec.targetEps)
    throw Error(ErrCode::CertificationTooWide, spec.name + ": assembled certificate exceeds eps");
  impl.certifiedError = total;
  impl.costEstimate = costEstimate(impl);
  return impl;
}

ApproxImpl searchDegree(const ApproxSpec& spec) {
  std::vector<int> degrees = spec.degrees.empty() ? degreeCandidates(spec.body) : spec.degrees;
  std::optional<ApproxImpl> best;
  std::string lastReason = "no candidate degrees";
  for (int d : degrees) {
    auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(spec.timeoutPerDegree));
    try {
      ApproxImpl impl = buildImpl(spec, d, deadline);
      if (!best || impl.costEstimate < best->costEstimate) {
        best = std::move(impl);
      } else if (impl.costEstimate > 1.5 * best->costEstimate) {
        break;  // significantly more expensive than the best so far
      }
    } catch (const Error& e) {
      lastReason = e.what();
      if (e.code == ErrCode::ExecutionFailure) break;  // timeout stops the search
    }
  }
  if (!best) throw Error(ErrCode::NoFeasibleApprox, spec.name + ": " + lastReason);
  return *best;
}

double costEstimate(const ApproxImpl& impl) {
  const Reduction& r = impl.reduction;
  double ops = 0.0, tests = 0.0;
  switch (r.kind) {
    case Reduction::Kind::None:
      break;
    case Reduction::Kind::OddFold:
      ops += 2;  // fabs + negate
      tests += 1;
      break;
    case Reduction::Kind::EvenFold:
      ops += 1;
      break;
    case Reduction::Kind::PeriodicFold:
      ops += 6;  // mul, nearbyint, 2x (mul, sub)
      if (r.parityOdd) {
        ops += 2;
        tests += 1;
      } else if (r.parityEven) {
        ops += 1;
      }
      break;
    case Reduction::Kind::ExpScale:
      ops += 7;  // mul, nearbyint, 2x (mul, sub), ldexp
      break;
    case Reduction::Kind::LogDecompose:
      ops += 6;  // frexp, adjust, 2 mul, 2 add
      tests += 1;
      break;
    case Reduction::Kind::SqrtScale:
      ops += 4;  // frexp, adjust, ldexp
      tests += 2;
      break;
  }
  double worstPiece = 0.0;
  for (const auto& p : impl.pieces) {
    double d = p.coeffs.empty() ? 0.0 : static_cast<double>(p.coeffs.size() - 1);
    worstPiece = std::max(worstPiece, 2.0 * d + (p.center != 0.0 ? 1.0 : 0.0));
  }
  if (!impl.pieces.empty()) tests += static_cast<double>(impl.pieces.size() - 1);
  return ops + worstPiece + 4.0 * tests;
}

namespace {

double evalPieces(const ApproxImpl& impl, double t) {
  const auto& ps = impl.pieces;
  size_t idx = ps.size() - 1;
  for (size_t i = 0; i + 1 < ps.size(); ++i) {
    if (t <= ps[i].dom.hi) {
      idx = i;
      break;
    }
  }
  const PolyPiece& p = ps[idx];
  double u = p.center == 0.0 ? t : t - p.center;
  return polyEvalHorner(p.coeffs, u);
}

}  // namespace

double evalApproxImpl(const ApproxImpl& impl, double x) {
  const Reduction& r = impl.reduction;
  switch (r.kind) {
    case Reduction::Kind::None:
      return evalPieces(impl, x);
    case Reduction::Kind::OddFold: {
      double y = evalPieces(impl, std::fabs(x));
      return x < 0.0 ? -y : y;
    }
    case Reduction::Kind::EvenFold:
      return evalPieces(impl, std::fabs(x));
    case Reduction::Kind::PeriodicFold: {
      double kd = std::nearbyint(x * r.invStep);
      double t = (x - kd * r.c1) - kd * r.c2;
      if (r.parityOdd) {
        double y = evalPieces(impl, std::fabs(t));
        return t < 0.0 ? -y : y;
      }
      if (r.parityEven) return evalPieces(impl, std::fabs(t));
      return evalPieces(impl, t);
    }
    case Reduction::Kind::ExpScale: {
      double kd = std::nearbyint(x * r.invStep);
      double t = (x - kd * r.c1) - kd * r.c2;
      double y = evalPieces(impl, t);
      return std::ldexp(y, static_cast<int>(kd));
    }
    case Reduction::Kind::LogDecompose: {
      int e = 0;
      double m = std::frexp(x, &e);
      if (m < kSqrtHalf) {
        m = m * 2.0;
        e -= 1;
      }
      double kd = static_cast<double>(e);
      double y = evalPieces(impl, m);
      return kd * r.c1 + (kd * r.c2 + y);
    }
    case Reduction::Kind::SqrtScale: {
      if (x == 0.0) return 0.0;
      int e = 0;
      double m = std::frexp(x, &e);
      if (e & 1) {
        m = m * 2.0;
        e -= 1;
      }
      double y = evalPieces(impl, m);
      return std::ldexp(y, e / 2);
    }
  }
  throw Error(ErrCode::Unsupported, "bad reduction kind");
}

}  // namespace approxcc
