#include "approxcc/budget.hpp"

#include <cmath>
#include <sstream>

#include "approxcc/interval.hpp"

namespace approxcc {

Distribution distributionFromName(const std::string& name) {
  if (name == "equal") return Distribution::Equal;
  if (name == "derivative") return Distribution::Derivative;
  throw Error(ErrCode::Unsupported, "unknown distribution strategy '" + name + "'");
}

const char* distributionName(Distribution d) {
  return d == Distribution::Equal ? "equal" : "derivative";
}

std::pair<double, double> splitTotal(double tau, double roundoffEstimate) {
  if (!(tau > 0.0)) throw Error(ErrCode::BudgetExhausted, "target error must be positive");
  if (roundoffEstimate >= tau) {
    std::ostringstream os;
    os << "target " << tau << " is below the roundoff floor; required minimum > "
       << roundoffEstimate;
    throw Error(ErrCode::BudgetExhausted, os.str());
  }
  return {roundoffEstimate, tau - roundoffEstimate};
}

std::vector<double> distribute(double tauApprox, size_t n, Distribution strategy,
                               const std::vector<double>& m) {
  if (n == 0) return {};
  std::vector<double> shares(n, 0.0);
  bool equal = strategy == Distribution::Equal;
  double msum = 0.0;
  if (!equal) {
    for (double mi : m) {
      if (!(mi >= 0.0) || !std::isfinite(mi))
        throw Error(ErrCode::Unsupported, "derivative distribution needs finite m >= 0");
      msum += mi;
    }
    if (msum == 0.0) equal = true;  // every call is dead; fall back
  }
  for (size_t i = 0; i < n; ++i) {
    double w = equal ? 1.0 / static_cast<double>(n) : m[i] / msum;
    shares[i] = tauApprox * w;
  }
  // Re-balance the last positive share so the sum conserves tauApprox.
  double partial = 0.0;
  for (size_t i = 0; i + 1 < n; ++i) partial += shares[i];
  double rest = tauApprox - partial;
  if (rest > 0.0 && std::isfinite(rest)) shares[n - 1] = rest;
  double sum = partial + shares[n - 1];
  while (sum > tauApprox && shares[n - 1] > 0.0) {
    shares[n - 1] = std::nextafter(shares[n - 1], 0.0);
    sum = partial + shares[n - 1];
  }
  for (double s : shares)
    if (!(s > 0.0)) throw Error(ErrCode::BudgetExhausted, "a target received a zero budget share");
  return shares;
}

double toLocal(double tauI, double mI, double deadCallCap) {
  if (mI > 0.0) return tauI / mI;
  return deadCallCap;
}

BudgetAllocation allocate(double tau, double roundoffEstimate,
                          const std::vector<std::string>& locals, Distribution strategy,
                          const std::vector<double>& m, const std::vector<double>& deadCallCaps) {
  BudgetAllocation ba;
  ba.tau = tau;
  auto [fl, approx] = splitTotal(tau, roundoffEstimate);
  ba.tauFloat = fl;
  ba.tauApprox = approx;
  std::vector<double> shares = distribute(approx, locals.size(), strategy, m);
  for (size_t i = 0; i < locals.size(); ++i) {
    TargetBudget tb;
    tb.local = locals[i];
    tb.tau = shares[i];
    tb.m = m[i];
    tb.weight = approx > 0.0 ? shares[i] / approx : 0.0;
    tb.epsLocal = toLocal(shares[i], m[i], deadCallCaps[i]);
    ba.targets.push_back(tb);
  }
  return ba;
}

}  // namespace approxcc
