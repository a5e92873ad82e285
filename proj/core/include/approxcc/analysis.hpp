#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "approxcc/affine.hpp"
#include "approxcc/decompose.hpp"
#include "approxcc/interval.hpp"

namespace approxcc {

// Floating-point format of the program arithmetic. delta is the absolute
// error bound covering gradual underflow; for binary64 the model value
// 2^-1075 is not itself a double, so the smallest dominating double is used.
struct FloatFormat {
  std::string name;
  double eps;
  double delta;

  static const FloatFormat& binary64();
  static const FloatFormat& binary32();
};

// Error model for elementary calls. In libm mode each call contributes a
// relative error of relFactor(op) * eps. Targets present in `certs` are
// instead charged their certified absolute bound (approx mode); targets
// absent from `certs` stay on the libm model.
struct FnErrorModel {
  struct Cert {
    double absError = 0.0;
    Interval domain = Interval(0.0, 0.0);  // certified argument domain
  };

  double defaultRelFactor = 2.0;
  std::map<Op, double> perFnRelFactor;
  std::map<std::string, Cert> certs;  // by target local name

  double relFactor(Op op) const;
  static FnErrorModel libm();
};

struct TargetSite {
  std::string local;
  Interval argRange;    // real range of the call argument
  double argError;      // worst-case absolute error of the computed argument
  Interval argFpRange;  // argRange widened by argError
  Interval outRange;    // real range of the bound value
  double outError;      // worst-case absolute error of the bound value
};

struct LetInfo {
  std::string name;
  Interval range;
  double errorBound;
};

struct AnalysisResult {
  double total = 0.0;
  Interval resultRange = Interval(0.0, 0.0);
  std::vector<LetInfo> lets;
  std::vector<TargetSite> sites;  // aligned with the decomposed targets

  const TargetSite* site(const std::string& local) const;
};

// Worst-case absolute roundoff bound for the whole program under the
// (x o y)(1 + e) + d model: ranges by interval analysis intersected with
// affine hulls, error propagation by affine arithmetic over error terms.
// Every +,-,*,/,sqrt contributes eps/delta, unary minus contributes nothing,
// decimal constants contribute their representation error, elementary calls
// contribute per the FnErrorModel.
AnalysisResult analyzeRoundoff(const DecomposedProgram& dp, const FloatFormat& fmt,
                               const FnErrorModel& fem);

// Convenience for plain programs: all elementary calls on the libm model.
AnalysisResult analyzeRoundoff(const Program& p, const FloatFormat& fmt, const FnErrorModel& fem);

}  // namespace approxcc
