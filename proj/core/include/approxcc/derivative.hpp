#pragma once

#include "approxcc/expr.hpp"

namespace approxcc {

// Exact symbolic partial derivative with respect to `v`; any other variable
// (param or opaque let) is treated as a constant. Output is lightly
// simplified (0/1 folding) to keep interval evaluation of derivatives tight.
ExprPtr differentiate(const ExprPtr& e, const std::string& v);

ExprPtr simplify(const ExprPtr& e);

}  // namespace approxcc
