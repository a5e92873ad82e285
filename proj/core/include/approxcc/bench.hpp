#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "approxcc/codegen.hpp"

namespace approxcc {

struct TimingStats {
  double mean = 0.0;  // over the kept (lowest 90%) samples, averaged per run
  double min = 0.0;
  double max = 0.0;
  int runs = 0;
  uint64_t seed = 0;
  size_t keptPerRun = 0;
  std::string source;  // "rdtsc" or "steady_clock"
};

struct AccuracyReport {
  double sampledMax = 0.0;
  size_t samples = 0;
  double certifiedBound = 0.0;
  double margin = 0.0;  // certifiedBound - sampledMax; >= 0 required
};

// Deterministic uniform samples, one row per point in parameter order.
std::vector<std::vector<double>> sampleInputs(const std::vector<Interval>& domains, size_t n,
                                              uint64_t seed);

const char* timerSource();

// Per-call timing protocol: warm-up pass, one measurement per input, the
// highest 10% of each run discarded (kept count = floor(0.9 n)), stats
// averaged over `runs` runs.
TimingStats measure(const std::function<double(const double*)>& fn,
                    const std::vector<std::vector<double>>& inputs, int runs = 5);

// Aggregates raw per-input samples (e.g. cycles from a compiled driver) with
// the same trimming protocol; sampleRuns is runs x n row-major.
TimingStats aggregateSamples(const std::vector<std::vector<uint64_t>>& sampleRuns,
                             const std::string& source);

// Max |reference - implementation| over n seeded samples, against the
// certified bound. With f32Inputs the sampled points are rounded to binary32
// first (they are the exact inputs of a binary32 program).
AccuracyReport measureAccuracy(const std::function<double(const PointEnv&)>& impl,
                               const Program& program, size_t n, uint64_t seed,
                               double certifiedBound, bool f32Inputs = false);

}  // namespace approxcc
