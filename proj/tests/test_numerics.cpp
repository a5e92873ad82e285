#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "approxcc/affine.hpp"
#include "approxcc/interval.hpp"
#include "approxcc/parser.hpp"
#include "approxcc/strict_eval.hpp"
#include "support/test_util.hpp"

using namespace approxcc;
using namespace approxcc::build;

TEST_CASE("interval endpoint arithmetic is exact when exact") {
  Interval x(1, 2), y(3, 4);
  Interval s = x + y;
  CHECK(s.lo == 4.0);
  CHECK(s.hi == 6.0);
  Interval p = x * y;
  CHECK(p.lo == 3.0);
  CHECK(p.hi == 8.0);
}

TEST_CASE("interval sin over a full period is [-1,1]") {
  Interval s = sinI(Interval(-3.14, 3.14));
  CHECK(s.lo == -1.0);
  CHECK(s.hi == 1.0);
  // [-3.14, 3.14] contains +-pi/2 but not the min of cos
  Interval c = cosI(Interval(-3.14, 3.14));
  CHECK(c.hi == 1.0);
  CHECK(c.lo < -0.99999);
  CHECK(c.lo >= -1.0);
}

TEST_CASE("monotone composition exp(cos(x)) on [0, 3.14]") {
  auto e = exp(cos(var("x")));
  Interval r = intervalEval(e, {{"x", Interval(0.0, 3.14)}});
  // encloses [e^cos(3.14), e] and stays within the stated outward bounds
  CHECK(r.lo <= 0.36788);
  CHECK(r.hi >= 2.71828);
  CHECK(r.lo >= 0.3678);
  CHECK(r.hi <= 2.7183);
}

TEST_CASE("interval domain errors") {
  CHECK_THROWS_AS(Interval(1, 1) / Interval(-1, 1), Error);
  CHECK_THROWS_AS(logI(Interval(0.0, 1.0)), Error);
  CHECK_THROWS_AS(sqrtI(Interval(-0.1, 1.0)), Error);
  CHECK_THROWS_AS(tanI(Interval(1.0, 2.0)), Error);  // pole at pi/2
  CHECK_NOTHROW(tanI(Interval(-1.1, 0.9)));
}

TEST_CASE("interval soundness against the oracle on the corpus") {
  testutil::Rng rng(7);
  for (const auto& name : testutil::corpusNames()) {
    Program p = parseProgramFile(testutil::corpusPath(name));
    ExprPtr body = inlineLets(p);
    Interval range = intervalEval(body, p.domainEnv());
    for (int i = 0; i < 300; ++i) {
      auto pt = testutil::randomPoint(p, rng);
      double ref = toDoubleNearest(referenceEval(body, testutil::toBigPoint(pt)));
      CHECK_MESSAGE(range.contains(ref), name, " point outside interval range");
    }
  }
}

TEST_CASE("affine cancellation: x - x has zero deviation") {
  AffineContext ctx;
  AffineForm x = AffineForm::fromInterval(Interval(-1, 1), ctx);
  AffineForm z = subAF(x, x);
  CHECK(z.center() == 0.0);
  CHECK(z.terms().empty());
  CHECK(z.slack() == 0.0);
}

TEST_CASE("affine e - e width bounded by twice the result slack") {
  for (const auto& name : {"xu1", "integrate18257", "ex2_5", "pendulum2"}) {
    Program p = parseProgramFile(testutil::corpusPath(name));
    ExprPtr body = inlineLets(p);
    ExprPtr diff = sub(body, body);  // shared subtree
    AffineContext ctx;
    AffineEnv env;
    for (const auto& q : p.params) env.emplace(q.name, AffineForm::fromInterval(q.domain, ctx));
    AffineForm z = affineEval(diff, env, ctx);
    CHECK(z.hull().width() <= 2.0 * z.slack());
  }
}

TEST_CASE("affine x*x containment") {
  AffineContext ctx;
  AffineForm x = AffineForm::fromInterval(Interval(-1, 1), ctx);
  Interval h = mulAF(x, x, ctx).hull();
  CHECK(h.lo <= 0.0);
  CHECK(h.hi >= 1.0);
  CHECK(h.lo >= -1.0000001);
  CHECK(h.hi <= 1.0000001);
}

TEST_CASE("affine hull of the xu1 fragment contains the true range") {
  Program p = parseProgram(
      "def frag(x: Real): Real = { require(-3.14 <= x && x <= 3.14) 2*sin(x) + 0.8*cos(2*x) }");
  ExprPtr body = inlineLets(p);
  AffineContext ctx;
  AffineEnv env{{"x", AffineForm::fromInterval(Interval(-3.14, 3.14), ctx)}};
  Interval hull = affineEval(body, env, ctx).hull();
  CHECK(hull.lo <= -2.8);
  CHECK(hull.hi >= 2.8);
  // dense-grid oracle for the true range
  double lo = 1e9, hi = -1e9;
  for (int i = 0; i <= 100000; ++i) {
    double x = -3.14 + 6.28 * i / 100000.0;
    double v = 2 * std::sin(x) + 0.8 * std::cos(2 * x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hull.lo <= lo);
  CHECK(hull.hi >= hi);
}

TEST_CASE("affine containment of reference values on the corpus") {
  testutil::Rng rng(11);
  for (const auto& name : testutil::corpusNames()) {
    Program p = parseProgramFile(testutil::corpusPath(name));
    ExprPtr body = inlineLets(p);
    AffineContext ctx;
    AffineEnv env;
    for (const auto& q : p.params) env.emplace(q.name, AffineForm::fromInterval(q.domain, ctx));
    Interval hull = affineEval(body, env, ctx).hull();
    for (int i = 0; i < 200; ++i) {
      auto pt = testutil::randomPoint(p, rng);
      double ref = toDoubleNearest(referenceEval(body, testutil::toBigPoint(pt)));
      CHECK_MESSAGE(hull.contains(ref), name, " point outside affine hull");
    }
  }
}

TEST_CASE("strict evaluation basics") {
  CHECK(evalF64(cst("0.5"), {}) == 0.5);
  CHECK(evalF64(add(cst("0.1"), cst("0.2")), {}) == 0.30000000000000004);
}

TEST_CASE("strict Horner tree equals step-by-step rounding") {
  const double c[5] = {1.25, -0.5, 0.375, 1.0 / 3.0, -0.7};
  // c0 + x*(c1 + x*(c2 + x*(c3 + x*c4)))
  ExprPtr x = var("x");
  ExprPtr horner = cstd(c[4]);
  for (int i = 3; i >= 0; --i) horner = add(cstd(c[i]), mul(x, horner));
  testutil::Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    double xv = rng.uniform(-2, 2);
    double acc = c[4];
    for (int k = 3; k >= 0; --k) acc = c[k] + xv * acc;
    CHECK(evalF64(horner, {{"x", xv}}) == acc);
  }
}

TEST_CASE("strict evaluation determinism") {
  Program p = parseProgramFile(testutil::corpusPath("xu2"));
  ExprPtr body = inlineLets(p);
  testutil::Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto pt = testutil::randomPoint(p, rng);
    double a = evalF64(body, pt);
    double b = evalF64(body, pt);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  }
}

TEST_CASE("strict evaluation reports overflow") {
  CHECK_THROWS_AS(evalF64(exp(cst("1000")), {}), Error);
  CHECK_THROWS_AS(evalF32(exp(cst("100")), {}), Error);
}

TEST_CASE("reference evaluation oracle values") {
  CHECK(referenceEval(sin(cstd(0.0)), {}) == 0);
  // e to >= 100 bits
  BigReal e1 = referenceEval(exp(cstd(1.0)), {});
  BigReal eRef = parseLiteralDown(
      "2.71828182845904523536028747135266249775724709369995957496696762772407663035354760");
  CHECK(abs(e1 - eRef) <= pow(BigReal(2), -100));
  // forwardk2jY(1,1) against the closed form, two independent evaluations
  Program p = parseProgramFile(testutil::corpusPath("forwardk2jY"));
  ExprPtr body = inlineLets(p);
  BigReal got = referenceEval(body, {{"theta1", BigReal(1)}, {"theta2", BigReal(1)}});
  BigReal want = BigReal("0.5") * sin(BigReal(1)) + BigReal("2.5") * sin(BigReal(2));
  CHECK(abs(got - want) <= pow(BigReal(2), -180));
}

TEST_CASE("reference evaluation domain errors") {
  CHECK_THROWS_AS(referenceEval(log(cstd(0.0)), {}), Error);
  CHECK_THROWS_AS(referenceEval(sqrt(cstd(-1.0)), {}), Error);
  CHECK_THROWS_AS(referenceEval(div(cstd(1.0), cstd(0.0)), {}), Error);
}

TEST_CASE("literal representation error bounds") {
  CHECK(literalReprError64("0.5") == 0.0);
  CHECK(literalReprError64("2.5") == 0.0);
  double r = literalReprError64("0.1");
  CHECK(r > 0.0);
  CHECK(r <= 0x1p-53 * 0.2);  // well below one ulp of 0.1
  CHECK(literalReprError32("0.1") > r);
}
