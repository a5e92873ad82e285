#include "approxcc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#if defined(__x86_64__)
#include <x86intrin.h>
#endif

#include "approxcc/bigreal.hpp"

namespace approxcc {

namespace {

struct SplitMix {
  uint64_t state;
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

#if defined(__x86_64__)
uint64_t readTicks() {
  _mm_lfence();
  return __rdtsc();
}
#else
uint64_t readTicks() {
  auto t = std::chrono::steady_clock::now().time_since_epoch();
  return std::chrono::duration_cast<std::chrono::nanoseconds>(t).count();
}
#endif

}  // namespace

const char* timerSource() {
#if defined(__x86_64__)
  return "rdtsc";
#else
  return "steady_clock";
#endif
}

std::vector<std::vector<double>> sampleInputs(const std::vector<Interval>& domains, size_t n,
                                              uint64_t seed) {
  if (n == 0) throw Error(ErrCode::ExecutionFailure, "need at least one sample");
  SplitMix rng{seed};
  std::vector<std::vector<double>> out(n, std::vector<double>(domains.size()));
  for (size_t i = 0; i < n; ++i)
    for (size_t d = 0; d < domains.size(); ++d)
      out[i][d] = rng.uniform(domains[d].lo, domains[d].hi);
  return out;
}

namespace {

void trimmedStats(std::vector<uint64_t>& samples, double& mean, double& mn, double& mx,
                  size_t& kept) {
  std::sort(samples.begin(), samples.end());
  kept = static_cast<size_t>(std::floor(0.9 * static_cast<double>(samples.size())));
  if (kept == 0) kept = samples.size();
  double sum = 0.0;
  for (size_t i = 0; i < kept; ++i) sum += static_cast<double>(samples[i]);
  mean = sum / static_cast<double>(kept);
  mn = static_cast<double>(samples.front());
  mx = static_cast<double>(samples[kept - 1]);
}

}  // namespace

TimingStats measure(const std::function<double(const double*)>& fn,
                    const std::vector<std::vector<double>>& inputs, int runs) {
  if (inputs.empty() || runs < 1)
    throw Error(ErrCode::ExecutionFailure, "measure needs inputs and at least one run");
  volatile double sink = 0.0;
  std::vector<uint64_t> samples(inputs.size());
  double meanAcc = 0.0, minAcc = 0.0, maxAcc = 0.0;
  size_t kept = 0;
  for (int r = 0; r < runs; ++r) {
    for (const auto& row : inputs) sink = sink + fn(row.data());  // cache warm-up
    for (size_t i = 0; i < inputs.size(); ++i) {
      uint64_t t0 = readTicks();
      sink = sink + fn(inputs[i].data());
      samples[i] = readTicks() - t0;
    }
    double mean = 0.0, mn = 0.0, mx = 0.0;
    trimmedStats(samples, mean, mn, mx, kept);
    meanAcc += mean;
    minAcc += mn;
    maxAcc += mx;
  }
  TimingStats st;
  st.mean = meanAcc / runs;
  st.min = minAcc / runs;
  st.max = maxAcc / runs;
  st.runs = runs;
  st.keptPerRun = kept;
  st.source = timerSource();
  return st;
}

TimingStats aggregateSamples(const std::vector<std::vector<uint64_t>>& sampleRuns,
                             const std::string& source) {
  if (sampleRuns.empty()) throw Error(ErrCode::ExecutionFailure, "no samples to aggregate");
  double meanAcc = 0.0, minAcc = 0.0, maxAcc = 0.0;
  size_t kept = 0;
  for (auto run : sampleRuns) {
    double mean = 0.0, mn = 0.0, mx = 0.0;
    trimmedStats(run, mean, mn, mx, kept);
    meanAcc += mean;
    minAcc += mn;
    maxAcc += mx;
  }
  TimingStats st;
  st.mean = meanAcc / static_cast<double>(sampleRuns.size());
  st.min = minAcc / static_cast<double>(sampleRuns.size());
  st.max = maxAcc / static_cast<double>(sampleRuns.size());
  st.runs = static_cast<int>(sampleRuns.size());
  st.keptPerRun = kept;
  st.source = source;
  return st;
}

AccuracyReport measureAccuracy(const std::function<double(const PointEnv&)>& impl,
                               const Program& program, size_t n, uint64_t seed,
                               double certifiedBound, bool f32Inputs) {
  std::vector<Interval> domains;
  for (const auto& p : program.params) domains.push_back(p.domain);
  auto rows = sampleInputs(domains, n, seed);
  ExprPtr body = inlineLets(program);
  AccuracyReport rep;
  rep.samples = n;
  rep.certifiedBound = certifiedBound;
  for (const auto& row : rows) {
    PointEnv pt;
    std::map<std::string, BigReal> big;
    for (size_t d = 0; d < program.params.size(); ++d) {
      double v = row[d];
      if (f32Inputs) {
        float f = static_cast<float>(v);
        // keep the rounded input inside the declared domain
        const Interval& dom = program.params[d].domain;
        if (f < dom.lo) f = std::nextafterf(f, 1e38f);
        if (f > dom.hi) f = std::nextafterf(f, -1e38f);
        v = f;
      }
      pt[program.params[d].name] = v;
      big.emplace(program.params[d].name, BigReal(v));
    }
    double got = impl(pt);
    BigReal ref = referenceEval(body, big);
    rep.sampledMax = std::max(rep.sampledMax, toDoubleUp(abs(ref - BigReal(got))));
  }
  rep.margin = rep.certifiedBound - rep.sampledMax;
  return rep;
}

}  // namespace approxcc
