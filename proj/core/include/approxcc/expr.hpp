#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>

#include "approxcc/error.hpp"

namespace approxcc {

// Real-valued expression tree over +, -, *, /, sqrt and the supported
// elementary functions. Nodes are immutable and shared; decomposed programs
// and derivatives reuse subtrees freely.
enum class Op {
  Const,
  Var,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Sqrt,
  Sin,
  Cos,
  Tan,
  Exp,
  Log,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Op op;
  // Const: `sym` keeps the literal exactly as written (decimal or hex float),
  // `value` its round-to-nearest binary64. Var: `sym` is the identifier.
  std::string sym;
  double value = 0.0;
  ExprPtr a, b;
};

int arity(Op op);
bool isElementary(Op op);     // sin, cos, tan, exp, log
bool isArithmetic(Op op);     // neg, +, -, *, /, sqrt
const char* opName(Op op);

// Builders. The constant builders differ: `cst` keeps a source literal (which
// may not be exactly representable), `cstd` wraps an exact binary64 and prints
// as a hex-float literal.
namespace build {
ExprPtr cst(const std::string& literal);
ExprPtr cstd(double v);
ExprPtr var(const std::string& name);
ExprPtr neg(ExprPtr e);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr sqrt(ExprPtr e);
ExprPtr sin(ExprPtr e);
ExprPtr cos(ExprPtr e);
ExprPtr tan(ExprPtr e);
ExprPtr exp(ExprPtr e);
ExprPtr log(ExprPtr e);
ExprPtr unary(Op op, ExprPtr e);
ExprPtr binary(Op op, ExprPtr a, ExprPtr b);
}  // namespace build

bool structurallyEqual(const ExprPtr& a, const ExprPtr& b);
size_t exprHash(const ExprPtr& e);

// Height of the tree: leaves have height 0.
int height(const ExprPtr& e);
size_t nodeCount(const ExprPtr& e);
void collectFreeVars(const ExprPtr& e, std::set<std::string>& out);
std::set<std::string> freeVars(const ExprPtr& e);
bool containsOp(const ExprPtr& e, Op op);
bool containsElementary(const ExprPtr& e);

// Substitutes every occurrence of variable `name` by `replacement`.
ExprPtr substitute(const ExprPtr& e, const std::string& name, const ExprPtr& replacement);

// Canonical infix rendering; parses back to a structurally equal tree.
std::string exprToString(const ExprPtr& e);

}  // namespace approxcc
