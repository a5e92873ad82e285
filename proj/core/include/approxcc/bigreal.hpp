#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <map>
#include <string>

#include "approxcc/expr.hpp"

namespace approxcc {

// Extended-precision reals used as the testing/certification oracle and by
// the minimax fitter. 72 decimal digits ~ 240 bits of working precision; all
// MPFR operations are correctly rounded at that precision, so tree
// evaluations over the supported function set retain far more than 100
// correct bits on the domains this tool handles.
using BigReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<72>,
                                              boost::multiprecision::et_off>;

BigReal bigPi();
BigReal bigLn2();

// Directed double conversions (toward -inf / +inf).
double toDoubleDown(const BigReal& x);
double toDoubleUp(const BigReal& x);
double toDoubleNearest(const BigReal& x);

// Parses a decimal or hex-float literal with directed rounding at BigReal
// precision, giving a rigorous enclosure of the exact literal value.
BigReal parseLiteralDown(const std::string& text);
BigReal parseLiteralUp(const std::string& text);

// Round-to-nearest binary32 value of a literal (single rounding from the
// exact decimal, not double-then-float).
float literalToFloat(const std::string& text);

// Upper bound on |literal - nearest binary64(literal)|.
double literalReprError64(const std::string& text);
// Upper bound on |literal - nearest binary32(literal)|.
double literalReprError32(const std::string& text);

// Extended-precision evaluation of an expression at a point. Throws
// ErrCode::Domain outside the mathematical domain of log/sqrt/div/tan.
BigReal referenceEval(const ExprPtr& e, const std::map<std::string, BigReal>& point);

// Directed elementary function evaluation on doubles: correctly rounded
// toward the requested direction. Used for interval endpoints.
double fnDown(Op op, double x);
double fnUp(Op op, double x);

}  // namespace approxcc
