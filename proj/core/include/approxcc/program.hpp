#pragma once

#include <optional>
#include <string>
#include <vector>

#include "approxcc/expr.hpp"
#include "approxcc/interval.hpp"

namespace approxcc {

struct Param {
  std::string name;
  Interval domain;
  // Domain bound literals as written, for round-tripping.
  std::string loText, hiText;
};

struct Let {
  std::string name;
  ExprPtr expr;
};

// A parsed program: straight-line real-valued function with bounded inputs
// and an optional absolute error target on the result.
struct Program {
  std::string name;
  std::vector<Param> params;
  std::vector<Let> lets;
  ExprPtr result;
  std::optional<double> targetError;
  std::string targetErrorText;

  const Param* findParam(const std::string& n) const;
  const Let* findLet(const std::string& n) const;
  IntervalEnv domainEnv() const;
};

// Single expression equivalent to the program body: lets substituted into
// the result in binding order.
ExprPtr inlineLets(const Program& p);

std::string programToString(const Program& p);
bool structurallyEqual(const Program& a, const Program& b);

}  // namespace approxcc
