#include "approxcc/error.hpp"

namespace approxcc {

const char* errCodeName(ErrCode c) {
  switch (c) {
    case ErrCode::Syntax: return "SyntaxError";
    case ErrCode::Domain: return "DomainError";
    case ErrCode::RangeBlowup: return "RangeBlowup";
    case ErrCode::Overflow: return "OverflowToInfinity";
    case ErrCode::BudgetExhausted: return "BudgetExhausted";
    case ErrCode::NoFeasibleApprox: return "NoFeasibleApprox";
    case ErrCode::SplitLimitExceeded: return "SplitLimitExceeded";
    case ErrCode::CertificationTooWide: return "CertificationTooWide";
    case ErrCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrCode::UnmappedTarget: return "UnmappedTarget";
    case ErrCode::ExecutionFailure: return "ExecutionFailure";
    case ErrCode::Unsupported: return "Unsupported";
  }
  return "Error";
}

}  // namespace approxcc
