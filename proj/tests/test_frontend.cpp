#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "approxcc/decompose.hpp"
#include "approxcc/parser.hpp"
#include "support/test_util.hpp"

using namespace approxcc;

TEST_CASE("forwardk2jY parses to the expected shape") {
  Program p = parseProgramFile(testutil::corpusPath("forwardk2jY"));
  CHECK(p.name == "forwardk2jY");
  REQUIRE(p.params.size() == 2);
  CHECK(p.params[0].name == "theta1");
  CHECK(p.params[0].domain.lo == -3.14);
  CHECK(p.params[0].domain.hi == 3.14);
  CHECK(p.params[1].name == "theta2");
  REQUIRE(p.lets.size() == 2);
  CHECK(p.lets[0].name == "l1");
  CHECK(p.lets[0].expr->value == 0.5);
  CHECK(p.lets[1].expr->value == 2.5);
  REQUIRE(p.targetError.has_value());
  CHECK(*p.targetError == 1e-13);
  CHECK(exprToString(p.result) == "l1 * sin(theta1) + l2 * sin(theta1 + theta2)");
}

TEST_CASE("identity program") {
  Program p = parseProgram("def id(x: Real): Real = { require(0<=x && x<=1) x }");
  CHECK(p.params.size() == 1);
  CHECK(p.lets.empty());
  CHECK(p.result->op == Op::Var);
  CHECK(p.result->sym == "x");
  CHECK(!p.targetError.has_value());
}

TEST_CASE("pendulum1 parses with domains and target") {
  Program p = parseProgramFile(testutil::corpusPath("pendulum1"));
  REQUIRE(p.params.size() == 2);
  CHECK(p.params[0].name == "t");
  CHECK(p.params[0].domain.lo == 1.0);
  CHECK(p.params[0].domain.hi == 3.0);
  CHECK(p.params[1].domain.lo == -5.0);
  CHECK(p.params[1].domain.hi == 5.0);
  CHECK(*p.targetError == 1e-13);
}

TEST_CASE("parser rejects malformed programs") {
  CHECK_THROWS_WITH_AS(parseProgram("def f(x: Real): Real = { require(0<=x && x<=1) foo(x) }"),
                       doctest::Contains("unknown function"), Error);
  // unbounded parameter: no require clause
  CHECK_THROWS_AS(parseProgram("def f(x: Real): Real = { x }"), Error);
  // non-positive target error
  CHECK_THROWS_AS(
      parseProgram("def f(x: Real): Real = { require(0<=x && x<=1) x } ensuring(res => res +/- 0)"),
      Error);
  // syntax error reports a position
  try {
    parseProgram("def f(x: Real): Real = { require(0<=x && x<=1) x + }");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code == ErrCode::Syntax);
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("pretty-print reparses to a structurally equal program") {
  for (const auto& name : testutil::corpusNames()) {
    Program p = parseProgramFile(testutil::corpusPath(name));
    Program q = parseProgram(programToString(p));
    CHECK_MESSAGE(structurallyEqual(p, q), "round-trip failed for ", name);
  }
}

TEST_CASE("decompose forwardk2jY at depth 0 extracts both sine calls") {
  Program p = parseProgramFile(testutil::corpusPath("forwardk2jY"));
  DecomposedProgram dp = decompose(p, 0);
  REQUIRE(dp.targets.size() == 2);
  CHECK(dp.targets[0].body->op == Op::Sin);
  CHECK(exprToString(dp.targets[0].arg) == "theta1");
  CHECK(dp.targets[1].body->op == Op::Sin);
  CHECK(exprToString(dp.targets[1].arg) == "theta1 + theta2");
  // target bodies are bare calls on the formal
  for (const auto& t : dp.targets) {
    CHECK(t.body->a->op == Op::Var);
    CHECK(t.body->a->sym == t.formal);
  }
  REQUIRE(dp.program.lets.size() == 2);
}

TEST_CASE("decompose leaves call-free programs unchanged") {
  Program p = parseProgram("def f(x: Real): Real = { require(0<=x && x<=1) x + x }");
  DecomposedProgram dp = decompose(p, 0);
  CHECK(dp.targets.empty());
  CHECK(structurallyEqual(dp.program, p));
}

TEST_CASE("decompose ex3_d at unbounded depth keeps the two chains separate") {
  Program p = parseProgramFile(testutil::corpusPath("ex3_d"));
  DecomposedProgram dp = decompose(p, kDepthUnbounded);
  // The product is bivariate in the two calls; each univariate chain is its
  // own target.
  REQUIRE(dp.targets.size() == 2);
  CHECK(containsOp(dp.targets[0].body, Op::Exp));
  CHECK(containsOp(dp.targets[1].body, Op::Sin));
  CHECK(!containsElementary(dp.program.result));
}

TEST_CASE("decompose shares syntactically identical targets") {
  Program p = parseProgramFile(testutil::corpusPath("ex2_1"));
  DecomposedProgram dp = decompose(p, 0);
  // sin(x) and cos(x) each appear twice after let inlining but produce one
  // local each.
  CHECK(dp.targets.size() == 2);
}

TEST_CASE("no elementary node remains outside a target binding") {
  for (const auto& name : testutil::corpusNames()) {
    Program p = parseProgramFile(testutil::corpusPath(name));
    for (unsigned depth : {0u, 1u, kDepthUnbounded}) {
      DecomposedProgram dp = decompose(p, depth);
      CHECK(!containsElementary(dp.program.result));
      if (depth == 0) {
        for (const auto& t : dp.targets) {
          CHECK(isElementary(t.body->op));
          CHECK(!containsElementary(t.arg));
        }
      }
    }
  }
}

TEST_CASE("decompose preserves real semantics on random points") {
  testutil::Rng rng(2024);
  const BigReal tol = pow(BigReal(2), -60);
  for (const auto& name : testutil::corpusNames()) {
    Program p = parseProgramFile(testutil::corpusPath(name));
    for (unsigned depth : {0u, kDepthUnbounded}) {
      DecomposedProgram dp = decompose(p, depth);
      ExprPtr orig = inlineLets(p);
      ExprPtr dec = inlineLets(dp.program);
      for (int i = 0; i < 50; ++i) {
        auto pt = testutil::toBigPoint(testutil::randomPoint(p, rng));
        BigReal a = referenceEval(orig, pt);
        BigReal b = referenceEval(dec, pt);
        BigReal scale = std::max(BigReal(abs(a)), BigReal(1));
        CHECK(abs(a - b) <= tol * scale);
      }
    }
  }
}
