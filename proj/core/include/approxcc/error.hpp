#pragma once

#include <stdexcept>
#include <string>

namespace approxcc {

enum class ErrCode {
  Syntax,
  Domain,
  RangeBlowup,
  Overflow,
  BudgetExhausted,
  NoFeasibleApprox,
  SplitLimitExceeded,
  CertificationTooWide,
  ConvergenceFailure,
  UnmappedTarget,
  ExecutionFailure,
  Unsupported,
};

const char* errCodeName(ErrCode c);

struct Error : std::runtime_error {
  ErrCode code;
  Error(ErrCode c, const std::string& msg)
      : std::runtime_error(std::string(errCodeName(c)) + ": " + msg), code(c) {}
};

}  // namespace approxcc
