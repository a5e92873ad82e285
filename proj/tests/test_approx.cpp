#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "approxcc/approx.hpp"
#include "approxcc/parser.hpp"
#include "support/test_util.hpp"

using namespace approxcc;
using namespace approxcc::build;

namespace {

ApproxSpec mkSpec(ExprPtr body, Interval dom, double eps, std::vector<int> degrees = {}) {
  ApproxSpec s;
  s.name = "t";
  s.body = std::move(body);
  s.formal = "x";
  s.domain = dom;
  s.targetEps = eps;
  s.degrees = std::move(degrees);
  return s;
}

double sampleImplError(const ApproxImpl& impl, const ExprPtr& body, const Interval& dom, int n,
                       uint64_t seed) {
  testutil::Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = i == 0 ? dom.lo : (i == 1 ? dom.hi : rng.uniform(dom.lo, dom.hi));
    double got = evalApproxImpl(impl, x);
    BigReal ref = referenceEval(body, {{"x", BigReal(x)}});
    worst = std::max(worst, toDoubleUp(abs(ref - BigReal(got))));
  }
  return worst;
}

}  // namespace

TEST_CASE("reduce: sin on [-3.14, 3.14] odd-folds to [0, 3.14]") {
  ApproxSpec s = mkSpec(sin(var("x")), Interval(-3.14, 3.14), 1e-12);
  ReducedProblem rp = reduceArgument(s);
  CHECK(rp.red.kind == Reduction::Kind::OddFold);
  CHECK(rp.fitDomain.lo == 0.0);
  CHECK(rp.fitDomain.hi == 3.14);
}

TEST_CASE("reduce: exp on [0, 10] scales by 2^k with r near [-ln2/2, ln2/2]") {
  ApproxSpec s = mkSpec(exp(var("x")), Interval(0.0, 10.0), 1e-9);
  ReducedProblem rp = reduceArgument(s);
  CHECK(rp.red.kind == Reduction::Kind::ExpScale);
  CHECK(rp.fitDomain.lo >= -0.3476);
  CHECK(rp.fitDomain.hi <= 0.3476);
  CHECK(rp.red.kMax == 14);  // exp(10) = 2^14.42...
  CHECK(rp.red.argErrorBound < 1e-15);
}

TEST_CASE("reduce: the integStoutemyer compound admits no reduction") {
  // log((exp(x) + 2*sqrt(x) + 1) / 2)
  ExprPtr body = log(div(add(add(exp(var("x")), mul(cstd(2.0), sqrt(var("x")))), cstd(1.0)),
                         cstd(2.0)));
  ApproxSpec s = mkSpec(body, Interval(0.1, 1.0), 1e-12);
  ReducedProblem rp = reduceArgument(s);
  CHECK(rp.red.kind == Reduction::Kind::None);
  CHECK(rp.fitDomain.lo == 0.1);
  CHECK(rp.fitDomain.hi == 1.0);
}

TEST_CASE("reduce: narrow far-from-zero sine domain stays direct") {
  // the periodic fold would not shrink the width, so no reduction fires
  ApproxSpec s = mkSpec(sin(var("x")), Interval(17.0, 18.0), 1e-12);
  ReducedProblem rp = reduceArgument(s);
  CHECK(rp.red.kind == Reduction::Kind::None);
}

TEST_CASE("fit: exp degree 4 on [0,1] lands under the Chebyshev remainder bound") {
  RealFn f = [](const BigReal& x) { return exp(x); };
  MinimaxFit fit = fitMinimax(f, 4, Interval(0.0, 1.0), 0.5);
  CHECK(fit.supError <= 5e-5);
  CHECK(fit.converged);
  // de la Vallee Poussin: the true minimax error lies in [lowerBound,
  // supError]; equioscillation quality keeps the bracket tight.
  CHECK(fit.supError <= 1.1 * fit.lowerBound);
  // dense-grid oracle confirms the sampled sup norm
  double worst = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    double x = i / 20000.0;
    BigReal e = f(BigReal(x)) - polyEvalBig(fit.coeffs, BigReal(x) - BigReal(0.5));
    worst = std::max(worst, toDoubleUp(abs(e)));
  }
  CHECK(worst <= fit.supError * 1.001);
  CHECK(fit.supError <= worst * 1.1);
}

TEST_CASE("fit: point domain gives the exact constant") {
  RealFn f = [](const BigReal& x) { return sin(x); };
  MinimaxFit fit = fitMinimax(f, 1, Interval(0.0, 0.0), 0.0);
  REQUIRE(fit.coeffs.size() == 1);
  CHECK(fit.coeffs[0] == 0);
  CHECK(fit.supError == 0.0);
}

TEST_CASE("fit: degree 0 for sin on [-pi, pi] is an adequate constant") {
  RealFn f = [](const BigReal& x) { return sin(x); };
  double pi = 3.14159265358979323846;
  MinimaxFit fit = fitMinimax(f, 0, Interval(-pi, pi), 0.0);
  CHECK(fit.supError <= 1.01);
  CHECK(std::fabs(toDoubleNearest(fit.coeffs[0])) < 0.02);
}

TEST_CASE("certify: zero polynomial for sin at a point is (numerically) zero") {
  PolyPiece piece;
  piece.dom = Interval(0.0, 0.0);
  piece.center = 0.0;
  piece.coeffs = {0.0};
  CertifyResult cr = certifyError(sin(var("x")), "x", piece, 256, 1.0);
  CHECK(cr.bound <= 0x1p-140);  // only the oracle-accuracy slack remains
}

TEST_CASE("certify: bound dominates a dense grid of strict Horner errors") {
  RealFn f = [](const BigReal& x) { return exp(x); };
  for (int degree : {4, 8, 12}) {
    MinimaxFit fit = fitMinimax(f, degree, Interval(0.0, 1.0), 0.5);
    PolyPiece piece;
    piece.dom = Interval(0.0, 1.0);
    piece.center = 0.5;
    piece.coeffs = roundCoeffs(fit.coeffs);
    CertifyResult cr = certifyError(exp(var("x")), "x", piece, 4096, 0.0);
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
      double x = i / 10000.0;
      double got = polyEvalHorner(piece.coeffs, x - piece.center);
      worst = std::max(worst, toDoubleUp(abs(exp(BigReal(x)) - BigReal(got))));
    }
    CHECK_MESSAGE(cr.bound >= worst, "degree ", degree);
    if (degree == 12) CHECK(cr.bound <= 1e-13);
  }
}

TEST_CASE("split: feasible specs stay in one piece") {
  ApproxSpec s = mkSpec(exp(var("x")), Interval(0.0, 0.5), 1e-10, {12});
  ApproxImpl impl = searchDegree(s);
  CHECK(impl.pieces.size() == 1);
}

TEST_CASE("split: sin at dmax 4 under 1e-10 needs several pieces") {
  ApproxSpec s = mkSpec(sin(var("x")), Interval(0.0, 3.14), 1e-10, {4});
  ApproxImpl impl = searchDegree(s);
  CHECK(impl.pieces.size() >= 2);
  // partition: adjacent endpoints bit-identical
  for (size_t i = 0; i + 1 < impl.pieces.size(); ++i)
    CHECK(impl.pieces[i].dom.hi == impl.pieces[i + 1].dom.lo);
}

TEST_CASE("split: tightening the budget never reduces the piece count") {
  size_t prev = 0;
  for (double eps : {1e-6, 1e-9, 1e-12}) {
    ApproxSpec s = mkSpec(sin(var("x")), Interval(0.0, 3.14), eps, {8});
    ApproxImpl impl = searchDegree(s);
    CHECK(impl.pieces.size() >= prev);
    prev = impl.pieces.size();
  }
}

TEST_CASE("degree candidate sets follow the head classification") {
  CHECK(degreeCandidates(exp(var("x"))) == std::vector<int>{4, 8, 12, 16});
  CHECK(degreeCandidates(log(var("x"))) == std::vector<int>{4, 8, 12, 16});
  CHECK(degreeCandidates(tan(var("x"))) == std::vector<int>{4, 8, 12, 16});
  CHECK(degreeCandidates(sin(var("x"))) == std::vector<int>{12, 16, 20, 24});
  CHECK(degreeCandidates(mul(exp(var("x")), cos(var("x")))) ==
        std::vector<int>{12, 16, 20, 24});
}

TEST_CASE("search picks a candidate degree and meets the budget") {
  ApproxSpec s = mkSpec(sin(var("x")), Interval(-3.14, 3.14), 4.8e-14);
  ApproxImpl impl = searchDegree(s);
  CHECK((impl.degree == 12 || impl.degree == 16 || impl.degree == 20 || impl.degree == 24));
  CHECK(impl.certifiedError <= 4.8e-14);
  double sampled = sampleImplError(impl, s.body, s.domain, 4000, 77);
  CHECK(sampled <= impl.certifiedError);
}

TEST_CASE("search reports NoFeasibleApprox when nothing fits") {
  // an absolute budget below the evaluation-roundoff floor cannot be met
  ApproxSpec s = mkSpec(sin(var("x")), Interval(-3.14, 3.14), 1e-19, {12, 16});
  s.timeoutPerDegree = 60.0;
  s.maxSplits = 8;
  try {
    searchDegree(s);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code == ErrCode::NoFeasibleApprox);
  }
}

TEST_CASE("end-to-end certificates across heads and reductions") {
  struct Case {
    const char* label;
    ExprPtr body;
    Interval dom;
    double eps;
  };
  const Case cases[] = {
      {"sin odd-fold", sin(var("x")), Interval(-3.14, 3.14), 1e-13},
      {"sin periodic", sin(var("x")), Interval(0.0, 7.0), 1e-12},
      {"cos periodic", cos(var("x")), Interval(-20.0, -12.0), 1e-11},
      {"sin direct", sin(var("x")), Interval(17.0, 18.0), 1e-13},
      {"exp scale", exp(var("x")), Interval(-14.0, 0.0), 1e-12},
      {"exp up", exp(var("x")), Interval(0.0, 5.0), 1e-11},
      {"log decompose", log(var("x")), Interval(1.37, 2.86), 1e-13},
      {"log wide", log(var("x")), Interval(0.05, 120.0), 1e-12},
      {"sqrt scale", sqrt(var("x")), Interval(0.001, 9.0), 1e-13},
      {"tan odd", tan(var("x")), Interval(-1.1, 0.9), 1e-12},
      {"compound stoutemyer",
       log(div(add(add(exp(var("x")), mul(cstd(2.0), sqrt(var("x")))), cstd(1.0)), cstd(2.0))),
       Interval(0.1, 1.0), 1e-13},
      {"compound decaying", exp(mul(cstd(-2.0), var("x"))), Interval(0.0, 7.0), 1e-13},
  };
  for (const auto& c : cases) {
    ApproxSpec s = mkSpec(c.body, c.dom, c.eps);
    ApproxImpl impl = searchDegree(s);
    CHECK_MESSAGE(impl.certifiedError <= c.eps, c.label);
    double sampled = sampleImplError(impl, c.body, c.dom, 3000, 1234);
    CHECK_MESSAGE(sampled <= impl.certifiedError, c.label, ": sampled ", sampled,
                  " certified ", impl.certifiedError);
  }
}

TEST_CASE("determinism: identical specs give identical implementations") {
  ApproxSpec s = mkSpec(exp(var("x")), Interval(-2.0, 1.5), 1e-12);
  ApproxImpl a = searchDegree(s);
  ApproxImpl b = searchDegree(s);
  REQUIRE(a.pieces.size() == b.pieces.size());
  CHECK(a.certifiedError == b.certifiedError);
  for (size_t i = 0; i < a.pieces.size(); ++i) {
    REQUIRE(a.pieces[i].coeffs.size() == b.pieces[i].coeffs.size());
    for (size_t k = 0; k < a.pieces[i].coeffs.size(); ++k)
      CHECK(std::memcmp(&a.pieces[i].coeffs[k], &b.pieces[i].coeffs[k], sizeof(double)) == 0);
  }
}

TEST_CASE("cost model: Horner count, branch weight, reconstruction overhead") {
  ApproxImpl single;
  single.pieces.push_back({Interval(0.0, 1.0), 0.0, std::vector<double>(13, 1.0), 0.0});
  CHECK(costEstimate(single) == 24.0);  // degree 12, center 0: 2d

  ApproxImpl split = single;
  split.pieces.push_back({Interval(1.0, 2.0), 0.0, std::vector<double>(13, 1.0), 0.0});
  CHECK(costEstimate(split) >= costEstimate(single) + 4.0);

  ApproxImpl expImpl = single;
  expImpl.reduction.kind = Reduction::Kind::ExpScale;
  CHECK(costEstimate(expImpl) >= costEstimate(single) + 3.0);
}

TEST_CASE("cost model ranks split-free lower at equal degree") {
  for (int d : {4, 8, 12}) {
    ApproxImpl one;
    one.pieces.push_back({Interval(0.0, 1.0), 0.5, std::vector<double>(d + 1, 1.0), 0.0});
    for (size_t extra : {1u, 3u, 7u}) {
      ApproxImpl more = one;
      for (size_t i = 0; i < extra; ++i)
        more.pieces.push_back({Interval(0.0, 1.0), 0.5, std::vector<double>(d + 1, 1.0), 0.0});
      CHECK(costEstimate(one) < costEstimate(more));
    }
  }
}
