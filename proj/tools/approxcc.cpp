// approxcc: replaces elementary calls in small real-valued programs by
// verified polynomial approximations under a whole-program error budget.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "approxcc/pipeline.hpp"

using namespace approxcc;

int main(int argc, char** argv) {
  CLI::App app{"approxcc: sound approximation of programs with elementary functions"};
  app.require_subcommand(1);

  ToolConfig cfg;
  std::string distribution = "equal";
  std::string depth = "0";
  std::string reportPath, csvPath;
  double targetError = 0.0;
  bool haveTarget = false;

  auto addCommon = [&](CLI::App* cmd) {
    cmd->add_option("files", cfg.inputs, ".real program files")->required()->check(CLI::ExistingFile);
    cmd->add_option("--target-error", targetError, "total absolute error target (overrides ensuring)")
        ->each([&](const std::string&) { haveTarget = true; });
    cmd->add_option("--distribution", distribution, "error distribution strategy")
        ->check(CLI::IsMember({"equal", "derivative"}))
        ->capture_default_str();
    cmd->add_option("--depth", depth, "compound grouping depth (integer or 'inf')")
        ->capture_default_str();
    cmd->add_option("--degrees", cfg.degrees, "candidate polynomial degrees")->delimiter(',');
    cmd->add_option("--timeout-per-call", cfg.timeoutPerCall, "seconds per degree candidate")
        ->capture_default_str();
    cmd->add_option("--max-splits", cfg.maxSplits, "domain split limit per call")
        ->capture_default_str();
    cmd->add_option("--table-bits", cfg.tableBits,
                    "table index width (reserved; only 0 is supported)")
        ->capture_default_str();
    cmd->add_option("--format", cfg.format, "program arithmetic format (f64 or f32)")
        ->check(CLI::IsMember({"f64", "f32"}))
        ->capture_default_str();
    cmd->add_option("--out", cfg.outDir, "directory for generated source bundles");
    cmd->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
    cmd->add_option("--report", reportPath, "write the JSON report here");
    cmd->add_option("--csv", csvPath, "write per-benchmark CSV stats here");
    cmd->add_option("--jobs", cfg.jobs, "benchmarks processed in parallel")
        ->capture_default_str();
    cmd->add_option("--accuracy-samples", cfg.accuracySamples,
                    "empirical accuracy sample count (0 disables)")
        ->capture_default_str();
  };

  CLI::App* analyze = app.add_subcommand("analyze", "roundoff analysis only (libm mode)");
  CLI::App* approx = app.add_subcommand("approx", "approximate and generate code");
  CLI::App* bench = app.add_subcommand("bench", "approximate, then measure accuracy and speed");
  addCommon(analyze);
  addCommon(approx);
  addCommon(bench);
  bench->add_option("--bench-samples", cfg.benchSamples, "timing inputs per run")
      ->capture_default_str();
  bench->add_option("--bench-runs", cfg.benchRuns, "benchmarking runs")->capture_default_str();
  bench->add_flag("--compiled", cfg.benchUseCompiled,
                  "time the compiled bundle instead of the internal evaluator");

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) cfg.mode = ToolConfig::Mode::Analyze;
  if (approx->parsed()) cfg.mode = ToolConfig::Mode::Approx;
  if (bench->parsed()) cfg.mode = ToolConfig::Mode::Bench;
  if (haveTarget) cfg.targetError = targetError;
  cfg.distribution = distributionFromName(distribution);
  if (depth == "inf" || depth == "unbounded") {
    cfg.depth = kDepthUnbounded;
  } else {
    try {
      long v = std::stol(depth);
      if (v < 0) throw std::invalid_argument("negative");
      cfg.depth = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      std::cerr << "approxcc: --depth expects a nonnegative integer or 'inf'\n";
      return 2;
    }
  }

  RunReport report = runPipeline(cfg);

  int failures = 0;
  for (const auto& row : report.rows) {
    if (row.ok) {
      std::printf("%-20s ok    libm=%.3e", row.name.c_str(), row.libmBound);
      if (cfg.mode != ToolConfig::Mode::Analyze)
        std::printf("  final=%.3e  target=%.3e", row.finalBound, row.targetError);
      if (row.haveAccuracy) std::printf("  sampled=%.3e", row.accuracy.sampledMax);
      if (row.haveTiming) std::printf("  speedup=%+.1f%% (%s)", row.speedupPercent,
                                      row.timingBackend.c_str());
      std::printf("\n");
      for (const auto& t : row.targets) {
        if (t.libmFallback)
          std::printf("    %-6s %-24s libm fallback\n", t.local.c_str(), t.fn.c_str());
        else
          std::printf("    %-6s %-24s deg=%-3d pieces=%-3zu eps_i=%.3e cert=%.3e %s\n",
                      t.local.c_str(), t.fn.c_str(), t.degree, t.pieces, t.epsLocal,
                      t.certifiedError, t.reduction.c_str());
      }
    } else {
      std::printf("%-20s FAILED %s: %s\n", row.name.c_str(), row.reason.c_str(),
                  row.message.c_str());
      ++failures;
    }
  }

  if (!reportPath.empty()) {
    std::ofstream out(reportPath);
    out << reportToJson(report).dump(2) << "\n";
  }
  if (!csvPath.empty()) {
    std::ofstream out(csvPath);
    out << reportCsv(report);
  }
  return failures == 0 ? 0 : 1;
}
