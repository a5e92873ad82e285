#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "approxcc/bench.hpp"
#include "approxcc/budget.hpp"
#include "approxcc/codegen.hpp"

namespace approxcc {

struct ToolConfig {
  enum class Mode { Analyze, Approx, Bench };

  std::vector<std::string> inputs;  // .real files
  Mode mode = Mode::Approx;
  std::optional<double> targetError;  // overrides the programs' ensuring clause
  Distribution distribution = Distribution::Equal;
  unsigned depth = 0;
  std::vector<int> degrees;  // empty: per-target §-style defaults
  double timeoutPerCall = 180.0;
  int maxSplits = 64;
  int tableBits = 0;  // reserved; must stay 0
  std::string format = "f64";
  std::string outDir;  // when set, source bundles are written here
  uint64_t seed = 12345;
  size_t accuracySamples = 100000;
  size_t benchSamples = 100000;
  int benchRuns = 5;
  bool benchUseCompiled = false;
  int jobs = 1;
};

struct TargetRow {
  std::string local;
  std::string fn;  // rendered body
  Interval argDomain = Interval(0.0, 0.0);
  double tau = 0.0;
  double m = 0.0;
  double epsLocal = 0.0;
  bool libmFallback = false;
  std::string reduction;
  int degree = 0;
  size_t pieces = 0;
  double certifiedError = 0.0;
  double cost = 0.0;
};

struct BenchmarkRow {
  std::string name;
  bool ok = false;
  std::string reason;  // error code name when failed
  std::string message;
  double targetError = 0.0;
  double libmBound = 0.0;
  double finalBound = 0.0;
  std::vector<TargetRow> targets;
  bool haveAccuracy = false;
  AccuracyReport accuracy;
  bool haveTiming = false;
  TimingStats timingApprox, timingLibm;
  double speedupPercent = 0.0;
  std::string timingBackend;  // "internal" or "compiled"
  double analysisSeconds = 0.0;  // volatile
};

struct RunReport {
  std::string schema = "approxcc-report/1";
  ToolConfig config;
  std::vector<BenchmarkRow> rows;
};

// Full pipeline per input: parse -> decompose -> libm-mode analysis ->
// budget split/distribute/localize -> per-target approximation (in program
// order, argument domains from the mixed-mode analysis) -> approx-mode
// re-analysis -> codegen -> optional accuracy/bench. Fails closed: if the
// second-round bound exceeds the target after one retry with halved local
// budgets, no sources are emitted and the row carries the reason. One
// failing benchmark never aborts the batch.
RunReport runPipeline(const ToolConfig& config);

// Single-benchmark entry used by the batch driver and tests.
BenchmarkRow runOne(const ToolConfig& config, const std::string& path);

nlohmann::ordered_json reportToJson(const RunReport& report);

// Strips wall-clock and timing fields, for byte-identical comparison of two
// runs with the same seed.
nlohmann::ordered_json normalizeReport(nlohmann::ordered_json j);

std::string reportCsv(const RunReport& report);

}  // namespace approxcc
