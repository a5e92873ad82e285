#pragma once

#include <map>
#include <set>
#include <string>

#include "approxcc/approx.hpp"
#include "approxcc/strict_eval.hpp"

namespace approxcc {

struct SourceBundle {
  std::string programFile;
  std::string kernelHeader;
  std::string driverFile;
  std::string buildScript;
  std::string manifestFile;
  std::map<std::string, std::string> files;  // filename -> contents

  void writeTo(const std::string& dir) const;
};

// Emits C99 sources for the approximated program: one kernel per ApproxImpl
// (inlinable, coefficients as exact hex-float literals), the program file
// following the analyzed evaluation order exactly, a timing/check driver and
// a build script with FP contraction disabled. Targets not in `impls` must
// be listed in `libmFallbacks` and call the standard library.
SourceBundle emit(const DecomposedProgram& dp, const std::map<std::string, ApproxImpl>& impls,
                  const std::set<std::string>& libmFallbacks, const FloatFormat& fmt);

// Internal mirror of the emitted code, bit-equivalent under strict IEEE
// round-to-nearest evaluation; lets the pipeline and tests run approximated
// programs without a C toolchain.
class ApproxProgram {
 public:
  ApproxProgram(DecomposedProgram dp, std::map<std::string, ApproxImpl> impls, FloatFormat fmt);

  double eval(const PointEnv& point) const;

  // The same program with every target on the platform libm, in the same
  // format; baseline for accuracy/performance comparisons.
  double evalLibm(const PointEnv& point) const;

  const DecomposedProgram& decomposed() const { return dp_; }
  const std::map<std::string, ApproxImpl>& impls() const { return impls_; }
  bool isF32() const { return f32_; }

 private:
  DecomposedProgram dp_;
  std::map<std::string, ApproxImpl> impls_;
  bool f32_;
};

}  // namespace approxcc
