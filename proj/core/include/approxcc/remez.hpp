#pragma once

#include <functional>
#include <vector>

#include "approxcc/bigreal.hpp"
#include "approxcc/interval.hpp"

namespace approxcc {

using RealFn = std::function<BigReal(const BigReal&)>;

struct MinimaxFit {
  std::vector<BigReal> coeffs;  // ascending powers of t = x - center
  double center = 0.0;
  double supError = 0.0;    // dense-grid estimate of sup |f - p| on the domain
  double lowerBound = 0.0;  // de la Vallee Poussin bound: true minimax >= this
  bool converged = false;
  int iterations = 0;
};

// Remez exchange in extended precision: Chebyshev-basis solves on Chebyshev
// initial nodes, multi-point exchange on a dense grid, equioscillation
// tolerance 1e-3 relative, at most 64 iterations. The returned coefficients
// are exact BigReal values; rounding to binary64 is the caller's step, after
// which certification runs against the rounded polynomial.
MinimaxFit fitMinimax(const RealFn& f, int degree, const Interval& dom, double center);

BigReal polyEvalBig(const std::vector<BigReal>& coeffs, const BigReal& t);

// Strict binary64 Horner on t (round-to-nearest per operation), matching the
// generated code bit for bit.
double polyEvalHorner(const std::vector<double>& coeffs, double t);

std::vector<double> roundCoeffs(const std::vector<BigReal>& coeffs);

}  // namespace approxcc
