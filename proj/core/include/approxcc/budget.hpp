#pragma once

#include <string>
#include <vector>

#include "approxcc/error.hpp"

namespace approxcc {

enum class Distribution { Equal, Derivative };

Distribution distributionFromName(const std::string& name);
const char* distributionName(Distribution d);

struct TargetBudget {
  std::string local;
  double tau = 0.0;      // total-effect budget at the program output
  double m = 0.0;        // propagation factor max |df/dv_i|
  double weight = 0.0;   // distribution weight
  double epsLocal = 0.0; // local call-site budget tau / m
};

struct BudgetAllocation {
  double tau = 0.0;        // user target
  double tauFloat = 0.0;   // estimated roundoff part (libm-mode analysis)
  double tauApprox = 0.0;  // tau - tauFloat
  std::vector<TargetBudget> targets;  // program order
};

// Splits the user's total budget into a roundoff part (the libm-mode
// estimate) and the approximation part. Throws BudgetExhausted (reporting
// the required minimum) when the estimate already exceeds the target.
std::pair<double, double> splitTotal(double tau, double roundoffEstimate);

// Distributes tauApprox over n targets: equally, or proportionally to the
// propagation factors m (normalized weights). Guarantees sum(tau_i) <=
// tauApprox with at most one ulp of slack and every share positive. All-zero
// m falls back to the equal strategy.
std::vector<double> distribute(double tauApprox, size_t n, Distribution strategy,
                               const std::vector<double>& m);

// Local call-site budget eps_i = tau_i / m_i. A dead call (m_i = 0) gets the
// configured cap instead (the function's output range width).
double toLocal(double tauI, double mI, double deadCallCap);

BudgetAllocation allocate(double tau, double roundoffEstimate,
                          const std::vector<std::string>& locals, Distribution strategy,
                          const std::vector<double>& m, const std::vector<double>& deadCallCaps);

}  // namespace approxcc
