#pragma once

#include <map>
#include <string>

#include "approxcc/expr.hpp"

namespace approxcc {

using PointEnv = std::map<std::string, double>;

// Bit-exact binary64 evaluation with round-to-nearest at every step (the
// library is compiled with FP contraction off, so no operation fuses).
// Elementary calls go to the platform libm. Throws Overflow when a result
// leaves the finite range and Domain outside log/sqrt/div/tan domains.
double evalF64(const ExprPtr& e, const PointEnv& env);

// Same in strict binary32: program arithmetic and inputs in float,
// elementary calls to the float libm entry points. Constants are rounded
// once, decimal -> binary32.
float evalF32(const ExprPtr& e, const PointEnv& env);

}  // namespace approxcc
