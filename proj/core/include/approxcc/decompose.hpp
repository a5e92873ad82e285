#pragma once

#include <limits>
#include <string>
#include <vector>

#include "approxcc/program.hpp"

namespace approxcc {

inline constexpr unsigned kDepthUnbounded = std::numeric_limits<unsigned>::max();

// One approximation target: the let `local` binds body(arg), where `body` is
// univariate in `formal`. At depth 0 the body is a bare elementary call
// head(formal); at depth > 0 it may be a compound univariate chain, in which
// case `arg` is the variable the chain was rooted on.
struct Target {
  std::string local;
  ExprPtr body;
  std::string formal;
  ExprPtr arg;
};

struct DecomposedProgram {
  Program program;           // lets are the target bindings, in program order
  std::vector<Target> targets;

  const Target* findTarget(const std::string& local) const;
};

// Rewrites the program so every approximation target is bound to a fresh
// local. Targets are the elementary calls themselves at depth 0; for larger
// depths each call grows to the largest enclosing univariate subtree whose
// height stays within depth + height(call). Syntactically identical targets
// share one local. Real-valued semantics are unchanged; programs without
// elementary calls pass through untouched.
DecomposedProgram decompose(const Program& p, unsigned depth);

}  // namespace approxcc
