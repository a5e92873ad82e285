#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "approxcc/analysis.hpp"
#include "approxcc/bound.hpp"
#include "approxcc/derivative.hpp"
#include "approxcc/parser.hpp"
#include "approxcc/strict_eval.hpp"
#include "support/test_util.hpp"

using namespace approxcc;
using namespace approxcc::build;

namespace {

Program parseCorpus(const std::string& name) {
  return parseProgramFile(testutil::corpusPath(name));
}

}  // namespace

TEST_CASE("x*x over [1,2]: one multiplication at magnitude 4") {
  Program p = parseProgram("def sq(x: Real): Real = { require(1<=x && x<=2) x * x }");
  AnalysisResult r = analyzeRoundoff(p, FloatFormat::binary64(), FnErrorModel::libm());
  CHECK(r.total >= 4 * 0x1p-53);
  CHECK(r.total <= 1e-15);
}

TEST_CASE("unary minus adds no roundoff") {
  Program a = parseProgram("def f(x: Real): Real = { require(1<=x && x<=2) x * x }");
  Program b = parseProgram("def g(x: Real): Real = { require(1<=x && x<=2) -(x * x) }");
  double ta = analyzeRoundoff(a, FloatFormat::binary64(), FnErrorModel::libm()).total;
  double tb = analyzeRoundoff(b, FloatFormat::binary64(), FnErrorModel::libm()).total;
  CHECK(ta == tb);
}

TEST_CASE("forwardk2jY libm-mode bound lands near the reference value") {
  AnalysisResult r =
      analyzeRoundoff(parseCorpus("forwardk2jY"), FloatFormat::binary64(), FnErrorModel::libm());
  CHECK(r.total >= 3.44e-16);
  CHECK(r.total <= 3.44e-14);
}

TEST_CASE("libm-mode fidelity for the reference benchmarks") {
  struct Row {
    const char* name;
    double published;
  };
  const Row rows[] = {{"forwardk2jY", 3.44e-15},
                      {"xu1", 6.86e-15},
                      {"pendulum1", 4.61e-16},
                      {"sinxx10", 2.56e-13}};
  for (const auto& row : rows) {
    AnalysisResult r =
        analyzeRoundoff(parseCorpus(row.name), FloatFormat::binary64(), FnErrorModel::libm());
    CHECK_MESSAGE(r.total >= row.published / 10.0, row.name, " bound ", r.total);
    CHECK_MESSAGE(r.total <= row.published * 10.0, row.name, " bound ", r.total);
  }
}

TEST_CASE("analysis bound is sound against sampled roundoff on the corpus") {
  testutil::Rng rng(31);
  for (const auto& name : testutil::corpusNames()) {
    Program p = parseCorpus(name);
    ExprPtr body = inlineLets(p);
    AnalysisResult r = analyzeRoundoff(p, FloatFormat::binary64(), FnErrorModel::libm());
    for (int i = 0; i < 500; ++i) {
      auto pt = testutil::randomPoint(p, rng);
      double fl = evalF64(body, pt);
      BigReal ref = referenceEval(body, testutil::toBigPoint(pt));
      double err = toDoubleUp(abs(ref - BigReal(fl)));
      CHECK_MESSAGE(err <= r.total, name, ": sampled ", err, " > bound ", r.total);
    }
  }
}

TEST_CASE("binary32 analysis is sound and wider than binary64") {
  testutil::Rng rng(33);
  for (const auto& name : {"forwardk2jY", "axisRotationX", "ex2_1"}) {
    Program p = parseCorpus(name);
    ExprPtr body = inlineLets(p);
    AnalysisResult r64 = analyzeRoundoff(p, FloatFormat::binary64(), FnErrorModel::libm());
    AnalysisResult r32 = analyzeRoundoff(p, FloatFormat::binary32(), FnErrorModel::libm());
    CHECK(r32.total > r64.total);
    for (int i = 0; i < 300; ++i) {
      auto pt = testutil::randomPoint(p, rng);
      // binary32 inputs: round the sample point to float first
      for (auto& [k, v] : pt) v = static_cast<float>(v);
      double fl = evalF32(body, pt);
      BigReal ref = referenceEval(body, testutil::toBigPoint(pt));
      double err = toDoubleUp(abs(ref - BigReal(fl)));
      CHECK_MESSAGE(err <= r32.total, name, ": sampled f32 ", err, " > bound ", r32.total);
    }
  }
}

TEST_CASE("monotonicity: enlarging a domain never shrinks the bound") {
  Program small = parseProgram(
      "def f(x: Real): Real = { require(0<=x && x<=1) exp(x) * sin(x) + x }");
  Program large = parseProgram(
      "def f(x: Real): Real = { require(0<=x && x<=2) exp(x) * sin(x) + x }");
  double ts = analyzeRoundoff(small, FloatFormat::binary64(), FnErrorModel::libm()).total;
  double tl = analyzeRoundoff(large, FloatFormat::binary64(), FnErrorModel::libm()).total;
  CHECK(tl >= ts);
}

TEST_CASE("analysis reports domain errors near singularities") {
  Program p = parseProgram("def f(x: Real): Real = { require(-1<=x && x<=1) 1 / x }");
  CHECK_THROWS_AS(analyzeRoundoff(p, FloatFormat::binary64(), FnErrorModel::libm()), Error);
}

TEST_CASE("differentiate: linear and elementary rules") {
  // d/dv2 of 0.5*v1 + 2.5*v2 = 2.5
  ExprPtr e = add(mul(cst("0.5"), var("v1")), mul(cst("2.5"), var("v2")));
  ExprPtr d = differentiate(e, "v2");
  CHECK(toDoubleNearest(referenceEval(d, {{"v1", BigReal(7)}, {"v2", BigReal(-3)}})) == 2.5);
  ExprPtr ds = differentiate(sin(var("x")), "x");
  CHECK(exprToString(ds) == "cos(x)");
}

TEST_CASE("differentiate ex2_5 body against finite differences") {
  // (v1 + 2*v2) / (v2 + 2*v1)
  ExprPtr e = div(add(var("v1"), mul(cstd(2.0), var("v2"))),
                  add(var("v2"), mul(cstd(2.0), var("v1"))));
  ExprPtr d = differentiate(e, "v1");
  testutil::Rng rng(4);
  BigReal h = pow(BigReal(2), -40);
  for (int i = 0; i < 100; ++i) {
    std::map<std::string, BigReal> pt{{"v1", BigReal(rng.uniform(0.5, 2.0))},
                                      {"v2", BigReal(rng.uniform(0.5, 2.0))}};
    BigReal sym = referenceEval(d, pt);
    BigReal fd = testutil::centralDiff(e, pt, "v1", h);
    CHECK(abs(sym - fd) <= BigReal(1e-6) * std::max(BigReal(abs(sym)), BigReal(1e-30)));
  }
}

TEST_CASE("differentiate corpus bodies against finite differences") {
  testutil::Rng rng(17);
  BigReal h = pow(BigReal(2), -40);
  for (const auto& name : testutil::corpusNames()) {
    Program p = parseCorpus(name);
    ExprPtr body = inlineLets(p);
    for (const auto& q : p.params) {
      ExprPtr d = differentiate(body, q.name);
      for (int i = 0; i < 20; ++i) {
        auto pt = testutil::randomPoint(p, rng);
        // keep points in the interior so the difference stencil stays valid
        for (auto& [k, v] : pt) {
          const Param* pp = p.findParam(k);
          double w = pp->domain.width();
          v = std::min(std::max(v, pp->domain.lo + 0.01 * w), pp->domain.hi - 0.01 * w);
        }
        auto bp = testutil::toBigPoint(pt);
        BigReal sym = referenceEval(d, bp);
        BigReal fd = testutil::centralDiff(body, bp, q.name, h);
        BigReal scale = std::max(BigReal(abs(sym)), BigReal(1e-20));
        CHECK_MESSAGE(abs(sym - fd) <= BigReal(1e-6) * scale, name, "/", q.name);
      }
    }
  }
}

TEST_CASE("boundAbs constants and cos maximum") {
  CHECK(boundAbs(cst("2.5"), {}) == 2.5);
  Box box{{"x", Interval(-3.14, 3.14)}};
  double m = boundAbs(cos(var("x")), box, 1024);
  CHECK(m >= 1.0);
  CHECK(m <= 1.0 + 1e-9);
}

TEST_CASE("boundAbs forwardk2jY derivative factor") {
  // d/dtheta1 = 0.5*cos(t1) + 2.5*cos(t1 + t2), max 3.0 at the origin
  ExprPtr e = add(mul(cst("0.5"), cos(var("t1"))),
                  mul(cst("2.5"), cos(add(var("t1"), var("t2")))));
  Box box{{"t1", Interval(-3.14, 3.14)}, {"t2", Interval(-3.14, 3.14)}};
  double m = boundAbs(e, box, 1024);
  CHECK(m >= 3.0);
  CHECK(m <= 3.3);
}

TEST_CASE("boundAbs shrinks with budget and dominates sampling") {
  ExprPtr e = mul(exp(var("x")), sin(mul(cstd(3.0), var("x"))));
  Box box{{"x", Interval(0.0, 2.0)}};
  double b16 = boundAbs(e, box, 16);
  double b256 = boundAbs(e, box, 256);
  double b4096 = boundAbs(e, box, 4096);
  CHECK(b256 <= b16);
  CHECK(b4096 <= b256);
  testutil::Rng rng(12);
  double sampled = 0;
  for (int i = 0; i < 20000; ++i) {
    double x = rng.uniform(0, 2);
    sampled = std::max(sampled, std::fabs(std::exp(x) * std::sin(3 * x)));
  }
  CHECK(b4096 >= sampled);
  CHECK(b4096 <= sampled * 1.05);
}
