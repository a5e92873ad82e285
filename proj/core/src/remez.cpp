#include "approxcc/remez.hpp"

#include <algorithm>
#include <cmath>

namespace approxcc {

BigReal polyEvalBig(const std::vector<BigReal>& coeffs, const BigReal& t) {
  if (coeffs.empty()) return BigReal(0);
  BigReal acc = coeffs.back();
  for (size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * t + coeffs[i];
  return acc;
}

double polyEvalHorner(const std::vector<double>& coeffs, double t) {
  if (coeffs.empty()) return 0.0;
  double acc = coeffs.back();
  for (size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * t + coeffs[i];
  return acc;
}

std::vector<double> roundCoeffs(const std::vector<BigReal>& coeffs) {
  std::vector<double> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) out.push_back(toDoubleNearest(c));
  return out;
}

namespace {

// Clenshaw evaluation of sum c_i T_i(s).
BigReal chebEval(const std::vector<BigReal>& c, const BigReal& s) {
  BigReal b1 = 0, b2 = 0;
  BigReal twoS = 2 * s;
  for (size_t i = c.size(); i-- > 1;) {
    BigReal b0 = c[i] + twoS * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c.empty() ? BigReal(0) : c[0] + s * b1 - b2;
}

// Gaussian elimination with partial pivoting; A is row-major n x n.
std::vector<BigReal> solveDense(std::vector<BigReal> A, std::vector<BigReal> b) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    BigReal best = abs(A[col * n + col]);
    for (size_t r = col + 1; r < n; ++r) {
      BigReal v = abs(A[r * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0) throw Error(ErrCode::ConvergenceFailure, "singular exchange system");
    if (piv != col) {
      for (size_t k = col; k < n; ++k) std::swap(A[piv * n + k], A[col * n + k]);
      std::swap(b[piv], b[col]);
    }
    for (size_t r = col + 1; r < n; ++r) {
      BigReal factor = A[r * n + col] / A[col * n + col];
      if (factor == 0) continue;
      for (size_t k = col; k < n; ++k) A[r * n + k] -= factor * A[col * n + k];
      b[r] -= factor * b[col];
    }
  }
  std::vector<BigReal> x(n);
  for (size_t r = n; r-- > 0;) {
    BigReal acc = b[r];
    for (size_t k = r + 1; k < n; ++k) acc -= A[r * n + k] * x[k];
    x[r] = acc / A[r * n + r];
  }
  return x;
}

// Chebyshev-basis coefficients -> monomial in s, then substitute
// s = alpha*u + beta to get monomial coefficients in u.
std::vector<BigReal> chebToMonomialInU(const std::vector<BigReal>& c, const BigReal& alpha,
                                       const BigReal& beta) {
  const size_t n = c.size();
  // T_i as monomial coefficient rows, built by the recurrence.
  std::vector<std::vector<BigReal>> T(n);
  if (n > 0) T[0] = {BigReal(1)};
  if (n > 1) T[1] = {BigReal(0), BigReal(1)};
  for (size_t i = 2; i < n; ++i) {
    T[i].assign(i + 1, BigReal(0));
    for (size_t k = 0; k < T[i - 1].size(); ++k) T[i][k + 1] += 2 * T[i - 1][k];
    for (size_t k = 0; k < T[i - 2].size(); ++k) T[i][k] -= T[i - 2][k];
  }
  std::vector<BigReal> monoS(n, BigReal(0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < T[i].size(); ++k) monoS[k] += c[i] * T[i][k];
  // Horner-compose p(alpha*u + beta).
  std::vector<BigReal> out{monoS.empty() ? BigReal(0) : monoS.back()};
  for (size_t i = monoS.size() - 1; i-- > 0;) {
    // out = out * (alpha*u + beta) + monoS[i]
    std::vector<BigReal> next(out.size() + 1, BigReal(0));
    for (size_t k = 0; k < out.size(); ++k) {
      next[k] += out[k] * beta;
      next[k + 1] += out[k] * alpha;
    }
    next[0] += monoS[i];
    out = std::move(next);
  }
  return out;
}

}  // namespace

MinimaxFit fitMinimax(const RealFn& f, int degree, const Interval& dom, double center) {
  MinimaxFit fit;
  fit.center = center;
  const int n = degree + 2;

  BigReal mid = (BigReal(dom.lo) + BigReal(dom.hi)) / 2;
  BigReal rad = (BigReal(dom.hi) - BigReal(dom.lo)) / 2;
  if (rad == 0) {
    fit.coeffs.assign(1, f(BigReal(dom.lo)));
    fit.converged = true;
    return fit;
  }

  const BigReal piB = bigPi();
  const int gridN = std::max(257, 16 * n + 1);
  std::vector<BigReal> gs(gridN), gx(gridN), gf(gridN);
  for (int k = 0; k < gridN; ++k) {
    gs[k] = cos(piB * k / (gridN - 1));  // descending 1 .. -1
    gx[k] = mid + rad * gs[k];
    gf[k] = f(gx[k]);
  }
  BigReal fScale = 0;
  for (const auto& v : gf) fScale = std::max(fScale, BigReal(abs(v)));
  const BigReal tinyRel = pow(BigReal(2), -180);

  // Chebyshev extrema of T_{n-1} as initial reference.
  std::vector<BigReal> nodes(n);
  for (int j = 0; j < n; ++j) nodes[j] = cos(piB * j / (n - 1));

  std::vector<BigReal> coeffC;  // Chebyshev coefficients of the fit
  std::vector<BigReal> gridErr(gridN);
  BigReal maxGrid = 0, minNode = 0;

  for (fit.iterations = 1; fit.iterations <= 64; ++fit.iterations) {
    // Solve for c_0..c_degree and the levelled error E.
    std::vector<BigReal> A(n * n), b(n);
    for (int j = 0; j < n; ++j) {
      BigReal t0 = 1, t1 = nodes[j];
      for (int i = 0; i <= degree; ++i) {
        BigReal ti = i == 0 ? t0 : (i == 1 ? t1 : BigReal(0));
        if (i >= 2) {
          ti = 2 * nodes[j] * t1 - t0;
          t0 = t1;
          t1 = ti;
        }
        A[j * n + i] = ti;
      }
      A[j * n + degree + 1] = (j % 2 == 0) ? BigReal(1) : BigReal(-1);
      b[j] = f(mid + rad * nodes[j]);
    }
    std::vector<BigReal> sol = solveDense(std::move(A), std::move(b));
    coeffC.assign(sol.begin(), sol.begin() + degree + 1);

    maxGrid = 0;
    for (int k = 0; k < gridN; ++k) {
      gridErr[k] = gf[k] - chebEval(coeffC, gs[k]);
      maxGrid = std::max(maxGrid, BigReal(abs(gridErr[k])));
    }
    if (maxGrid <= tinyRel * std::max(fScale, BigReal(1))) {
      fit.converged = true;
      minNode = maxGrid;
      break;
    }

    // Multi-point exchange: best point of each sign run.
    std::vector<int> cand;
    int runStart = 0;
    int runSign = gridErr[0] >= 0 ? 1 : -1;
    auto flushRun = [&](int endExcl) {
      int best = runStart;
      for (int k = runStart; k < endExcl; ++k)
        if (abs(gridErr[k]) > abs(gridErr[best])) best = k;
      cand.push_back(best);
    };
    for (int k = 1; k < gridN; ++k) {
      int s = gridErr[k] >= 0 ? 1 : -1;
      if (s != runSign) {
        flushRun(k);
        runStart = k;
        runSign = s;
      }
    }
    flushRun(gridN);

    if (static_cast<int>(cand.size()) < n) {
      // Cannot form a full alternating reference; keep the current fit.
      break;
    }
    while (static_cast<int>(cand.size()) > n) {
      if (abs(gridErr[cand.front()]) <= abs(gridErr[cand.back()]))
        cand.erase(cand.begin());
      else
        cand.pop_back();
    }

    minNode = abs(gridErr[cand[0]]);
    for (int idx : cand) minNode = std::min(minNode, BigReal(abs(gridErr[idx])));
    for (int j = 0; j < n; ++j) nodes[j] = gs[cand[j]];

    if (maxGrid - minNode <= maxGrid / 1000) {
      fit.converged = true;
      break;
    }
  }

  if (!(maxGrid == maxGrid))
    throw Error(ErrCode::ConvergenceFailure, "non-finite exchange error");
  fit.supError = toDoubleUp(maxGrid);
  fit.lowerBound = toDoubleDown(minNode);
  // s = (x - mid)/rad = (u + center - mid)/rad with u = x - center
  BigReal alpha = 1 / rad;
  BigReal beta = (BigReal(center) - mid) / rad;
  fit.coeffs = chebToMonomialInU(coeffC, alpha, beta);
  return fit;
}

}  // namespace approxcc
