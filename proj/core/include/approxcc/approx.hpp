#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "approxcc/analysis.hpp"
#include "approxcc/remez.hpp"

namespace approxcc {

// One approximation job: a univariate function body over an argument range
// (already widened by the argument's incoming error) and a local absolute
// error budget.
struct ApproxSpec {
  std::string name;  // kernel naming / diagnostics
  ExprPtr body;      // univariate in `formal`
  std::string formal;
  Interval domain = Interval(0.0, 0.0);
  double targetEps = 0.0;
  std::vector<int> degrees;           // ascending candidate list
  double timeoutPerDegree = 180.0;    // seconds
  int maxSplits = 64;
  int certifyBudget = 4096;           // boxes per piece certification
};

// Degree candidates: {12,16,20,24} when the target contains sin or cos
// anywhere, {4,8,12,16} for the monotone heads.
std::vector<int> degreeCandidates(const ExprPtr& body);

struct PolyPiece {
  Interval dom = Interval(0.0, 0.0);
  double center = 0.0;
  std::vector<double> coeffs;   // ascending powers of (t - center), Horner
  double certifiedError = 0.0;  // method + evaluation roundoff on this piece
};

// Argument reduction descriptor. The evaluation semantics (exactly mirrored
// by the generated C) are:
//   None:         y = P(x)
//   OddFold:      y = P(|x|), negated for x < 0
//   EvenFold:     y = P(|x|)
//   PeriodicFold: k = nearbyint(x*invStep); r = (x - k*c1) - k*c2;
//                 y = P(r) (optionally parity-folded first)
//   ExpScale:     k as above with step ln2; y = ldexp(P(r), k)
//   LogDecompose: m,e from frexp (normalized into [sqrt(1/2), sqrt(2)));
//                 y = e*c1 + (e*c2 + P(m))
//   SqrtScale:    m,e from frexp with e made even (m in [0.5, 2));
//                 y = ldexp(P(m), e/2), with sqrt(0) = 0 special-cased
struct Reduction {
  enum class Kind { None, OddFold, EvenFold, PeriodicFold, ExpScale, LogDecompose, SqrtScale };
  Kind kind = Kind::None;
  double invStep = 0.0;
  double c1 = 0.0, c2 = 0.0;
  bool parityOdd = false;
  bool parityEven = false;
  long kMin = 0, kMax = 0;
  double scaleMax = 1.0;       // max |2^k| applied at reconstruction
  double argErrorBound = 0.0;  // |computed r - exact reduced argument|
  double reconError = 0.0;     // reconstruction arithmetic + constant error
  const char* name() const;
};

struct ApproxImpl {
  std::string name;
  Reduction reduction;
  std::vector<PolyPiece> pieces;  // ascending partition of the reduced domain
  int degree = 0;
  double certifiedError = 0.0;  // total absolute bound over certifiedDomain
  double costEstimate = 0.0;
  Interval certifiedDomain = Interval(0.0, 0.0);
};

struct ReducedProblem {
  Reduction red;
  Interval fitDomain = Interval(0.0, 0.0);
  double derivMax = 0.0;  // max |body'| used to charge argErrorBound
};

// Detects an applicable exact identity of the (symbolically known) head and
// returns the reduced fitting problem. Reductions fire only when they
// strictly shrink the fitting domain; everything else passes through as
// Kind::None.
ReducedProblem reduceArgument(const ApproxSpec& spec);

struct CertifyResult {
  double bound = 0.0;       // rigorous: >= sup |f - HornerFloat| on the piece
  double sampledMax = 0.0;  // max |f - p| over the midpoints visited
};

// Certified piece bound: verified method error (branch-and-bound with
// mean-value enclosures, midpoints evaluated in extended precision) plus the
// Horner evaluation roundoff from the Eq.-style analysis of the evaluation
// expression. Throws CertificationTooWide when the budget cannot bring the
// bound below twice the sampled error while it matters.
CertifyResult certifyError(const ExprPtr& body, const std::string& formal, const PolyPiece& piece,
                           int budget, double targetHint);

// Builds a full implementation at one fixed degree: reduce, fit piecewise
// with recursive bisection (only when a single certified fit misses the
// budget), certify, assemble the total certificate.
ApproxImpl buildImpl(const ApproxSpec& spec, int degree,
                     std::chrono::steady_clock::time_point deadline);

// Ascending degree search keeping the cheapest feasible implementation;
// stops early when a candidate costs more than 1.5x the best so far or the
// per-degree timeout fires. Throws NoFeasibleApprox when nothing fits.
ApproxImpl searchDegree(const ApproxSpec& spec);

// Weighted operation count: adds+muls on the worst-case path, 4 per branch
// test, plus the reduction/reconstruction operations.
double costEstimate(const ApproxImpl& impl);

// Strict binary64 evaluation of the implementation, bit-equivalent to the
// emitted C under round-to-nearest without contraction.
double evalApproxImpl(const ApproxImpl& impl, double x);

}  // namespace approxcc
