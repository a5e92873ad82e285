#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "approxcc/bigreal.hpp"
#include "approxcc/program.hpp"

namespace testutil {

inline std::string corpusPath(const std::string& name) {
  return std::string(APPROXCC_CORPUS_DIR) + "/" + name + ".real";
}

inline const std::vector<std::string>& corpusNames() {
  static const std::vector<std::string> names = {
      "xu1",          "xu2",          "integrate18257", "integStoutemyer", "sinxx10",
      "axisRotationX", "axisRotationY", "rodriguesRotation", "pendulum1",  "pendulum2",
      "forwardk2jY",  "forwardk2jX",  "ex2_1",          "ex2_2",          "ex2_3",
      "ex2_4",        "ex2_5",        "ex2_9",          "ex2_10",         "ex2_11",
      "ex3_d"};
  return names;
}

// splitmix64: tiny deterministic generator for test sampling.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    double u = static_cast<double>(next() >> 11) * 0x1p-53;
    double v = lo + (hi - lo) * u;
    return v < lo ? lo : (v > hi ? hi : v);
  }
};

inline std::map<std::string, double> randomPoint(const approxcc::Program& p, Rng& rng) {
  std::map<std::string, double> pt;
  for (const auto& q : p.params) pt[q.name] = rng.uniform(q.domain.lo, q.domain.hi);
  return pt;
}

inline std::map<std::string, approxcc::BigReal> toBigPoint(const std::map<std::string, double>& pt) {
  std::map<std::string, approxcc::BigReal> big;
  for (const auto& [k, v] : pt) big.emplace(k, approxcc::BigReal(v));
  return big;
}

// Central finite difference of e w.r.t. v at a point, in extended precision.
inline approxcc::BigReal centralDiff(const approxcc::ExprPtr& e,
                                     std::map<std::string, approxcc::BigReal> pt,
                                     const std::string& v, const approxcc::BigReal& h) {
  using approxcc::BigReal;
  BigReal x = pt.at(v);
  pt[v] = x + h;
  BigReal fp = approxcc::referenceEval(e, pt);
  pt[v] = x - h;
  BigReal fm = approxcc::referenceEval(e, pt);
  return (fp - fm) / (2 * h);
}

}  // namespace testutil
