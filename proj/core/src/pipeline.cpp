#include "approxcc/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "approxcc/analysis.hpp"
#include "approxcc/bound.hpp"
#include "approxcc/derivative.hpp"
#include "approxcc/parser.hpp"

namespace approxcc {

namespace {

const FloatFormat& formatOf(const ToolConfig& c) {
  if (c.format == "f32") return FloatFormat::binary32();
  if (c.format == "f64") return FloatFormat::binary64();
  throw Error(ErrCode::Unsupported, "unknown format '" + c.format + "' (use f64 or f32)");
}

// Result expression with every target binding after index i substituted
// back, so the derivative w.r.t. target i is taken over the real-valued
// downstream program.
ExprPtr downstreamFunction(const DecomposedProgram& dp, size_t i) {
  ExprPtr e = dp.program.result;
  for (size_t j = dp.targets.size(); j-- > i + 1;) {
    const Target& t = dp.targets[j];
    e = substitute(e, t.local, substitute(t.body, t.formal, t.arg));
  }
  return e;
}

std::vector<double> propagationFactors(const DecomposedProgram& dp, const AnalysisResult& libm,
                                       int refine) {
  std::vector<double> m;
  for (size_t i = 0; i < dp.targets.size(); ++i) {
    ExprPtr e = simplify(differentiate(downstreamFunction(dp, i), dp.targets[i].local));
    Box box;
    for (const auto& p : dp.program.params) box.emplace_back(p.name, p.domain);
    for (size_t j = 0; j <= i && j < libm.lets.size(); ++j)
      box.emplace_back(libm.lets[j].name, libm.lets[j].range);
    m.push_back(boundAbs(e, box, refine));
  }
  return m;
}

struct ApproxOutcome {
  std::map<std::string, ApproxImpl> impls;
  std::set<std::string> fallbacks;
  FnErrorModel fem;
  std::string lastFailure;
};

ApproxOutcome approximateTargets(const ToolConfig& config, const DecomposedProgram& dp,
                                 const FloatFormat& fmt, const BudgetAllocation& budget,
                                 double epsScale) {
  ApproxOutcome out;
  out.fem = FnErrorModel::libm();
  for (size_t i = 0; i < dp.targets.size(); ++i) {
    const Target& t = dp.targets[i];
    // Mixed-mode analysis: earlier targets already carry their certificates,
    // so this argument range/error includes upstream approximation effects.
    AnalysisResult cur = analyzeRoundoff(dp, fmt, out.fem);
    const TargetSite* site = cur.site(t.local);
    ApproxSpec spec;
    spec.name = dp.program.name + "_" + t.local;
    spec.body = t.body;
    spec.formal = t.formal;
    spec.domain = site->argFpRange;
    spec.targetEps = budget.targets[i].epsLocal * epsScale;
    spec.degrees = config.degrees;
    spec.timeoutPerDegree = config.timeoutPerCall;
    spec.maxSplits = config.maxSplits;
    try {
      ApproxImpl impl = searchDegree(spec);
      out.fem.certs[t.local] = {impl.certifiedError, impl.certifiedDomain};
      out.impls.emplace(t.local, std::move(impl));
    } catch (const Error& e) {
      if (e.code != ErrCode::NoFeasibleApprox) throw;
      out.fallbacks.insert(t.local);  // stays on the libm model
      out.lastFailure = e.what();
    }
  }
  return out;
}

std::string shellQuote(const std::string& s) { return "'" + s + "'"; }

TimingStats benchCompiled(const std::string& dir, const SourceBundle& bundle,
                          const std::string& progName,
                          const std::vector<std::vector<double>>& inputs, int runs) {
  namespace fs = std::filesystem;
  bundle.writeTo(dir);
  {
    std::ofstream bin(fs::path(dir) / "inputs.bin", std::ios::binary);
    for (const auto& row : inputs)
      bin.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  std::string build = "cd " + shellQuote(dir) + " && sh build.sh > build.log 2>&1";
  if (std::system(build.c_str()) != 0)
    throw Error(ErrCode::ExecutionFailure, "build.sh failed in " + dir);
  std::ostringstream cmd;
  cmd << "cd " << shellQuote(dir) << " && ./" << progName << "_run bench inputs.bin "
      << inputs.size() << " " << runs << " cycles.bin > /dev/null 2>&1";
  if (std::system(cmd.str().c_str()) != 0)
    throw Error(ErrCode::ExecutionFailure, "bench driver failed in " + dir);
  std::ifstream cy(fs::path(dir) / "cycles.bin", std::ios::binary);
  std::vector<std::vector<uint64_t>> sampleRuns(runs, std::vector<uint64_t>(inputs.size()));
  for (auto& run : sampleRuns)
    cy.read(reinterpret_cast<char*>(run.data()),
            static_cast<std::streamsize>(run.size() * sizeof(uint64_t)));
  if (!cy) throw Error(ErrCode::ExecutionFailure, "short cycles.bin in " + dir);
  return aggregateSamples(sampleRuns, "rdtsc");
}

void fillTimingRows(const ToolConfig& config, const DecomposedProgram& dp,
                    const ApproxOutcome& ao, const FloatFormat& fmt, BenchmarkRow& row) {
  std::vector<Interval> domains;
  for (const auto& p : dp.program.params) domains.push_back(p.domain);
  auto inputs = sampleInputs(domains, config.benchSamples, config.seed);
  ApproxProgram prog(dp, ao.impls, fmt);

  bool compiled = false;
  if (config.benchUseCompiled) {
    try {
      std::string base = config.outDir.empty()
                             ? (std::filesystem::temp_directory_path() / "approxcc_bench").string()
                             : config.outDir;
      SourceBundle approxBundle = emit(dp, ao.impls, ao.fallbacks, fmt);
      std::set<std::string> allLibm;
      for (const auto& t : dp.targets) allLibm.insert(t.local);
      SourceBundle libmBundle = emit(dp, {}, allLibm, fmt);
      row.timingApprox = benchCompiled(base + "/" + dp.program.name + "_approx", approxBundle,
                                       dp.program.name, inputs, config.benchRuns);
      row.timingLibm = benchCompiled(base + "/" + dp.program.name + "_libm", libmBundle,
                                     dp.program.name, inputs, config.benchRuns);
      row.timingBackend = "compiled";
      compiled = true;
    } catch (const Error&) {
      compiled = false;  // fall back to the internal evaluator
    }
  }
  if (!compiled) {
    const auto& params = dp.program.params;
    auto mkPoint = [&params](const double* xs) {
      PointEnv pt;
      for (size_t d = 0; d < params.size(); ++d) pt[params[d].name] = xs[d];
      return pt;
    };
    row.timingApprox =
        measure([&](const double* xs) { return prog.eval(mkPoint(xs)); }, inputs, config.benchRuns);
    row.timingLibm = measure([&](const double* xs) { return prog.evalLibm(mkPoint(xs)); }, inputs,
                             config.benchRuns);
    row.timingBackend = "internal";
  }
  row.haveTiming = true;
  row.speedupPercent =
      row.timingLibm.mean > 0.0
          ? 100.0 * (row.timingLibm.mean - row.timingApprox.mean) / row.timingLibm.mean
          : 0.0;
  row.timingApprox.seed = config.seed;
  row.timingLibm.seed = config.seed;
}

}  // namespace

BenchmarkRow runOne(const ToolConfig& config, const std::string& path) {
  BenchmarkRow row;
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (config.tableBits != 0)
      throw Error(ErrCode::Unsupported, "table-driven methods are reserved; --table-bits must be 0");
    const FloatFormat& fmt = formatOf(config);
    Program p = parseProgramFile(path);
    row.name = p.name;

    DecomposedProgram dp = decompose(p, config.depth);
    AnalysisResult libmRes = analyzeRoundoff(dp, fmt, FnErrorModel::libm());
    row.libmBound = libmRes.total;

    if (config.mode == ToolConfig::Mode::Analyze) {
      row.ok = true;
      row.finalBound = libmRes.total;
      row.analysisSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return row;
    }

    std::optional<double> tau = config.targetError ? config.targetError : p.targetError;
    if (!tau)
      throw Error(ErrCode::BudgetExhausted,
                  p.name + " has no target error (ensuring clause or --target-error)");
    row.targetError = *tau;

    std::vector<double> m = propagationFactors(dp, libmRes, 1024);
    std::vector<std::string> locals;
    std::vector<double> caps;
    for (size_t i = 0; i < dp.targets.size(); ++i) {
      locals.push_back(dp.targets[i].local);
      caps.push_back(libmRes.sites[i].outRange.width());
    }
    BudgetAllocation budget =
        allocate(*tau, libmRes.total, locals, config.distribution, m, caps);

    // Approximate; if the second-round bound misses the target, one retry
    // with all local budgets halved, then fail closed.
    ApproxOutcome ao;
    AnalysisResult finalRes;
    bool accepted = false;
    for (double scale : {1.0, 0.5}) {
      ao = approximateTargets(config, dp, fmt, budget, scale);
      finalRes = analyzeRoundoff(dp, fmt, ao.fem);
      if (finalRes.total <= *tau) {
        accepted = true;
        break;
      }
    }
    row.finalBound = finalRes.total;
    for (size_t i = 0; i < dp.targets.size(); ++i) {
      const Target& t = dp.targets[i];
      TargetRow tr;
      tr.local = t.local;
      tr.fn = exprToString(t.body);
      tr.argDomain = finalRes.sites[i].argFpRange;
      tr.tau = budget.targets[i].tau;
      tr.m = budget.targets[i].m;
      tr.epsLocal = budget.targets[i].epsLocal;
      auto it = ao.impls.find(t.local);
      if (it != ao.impls.end()) {
        tr.reduction = it->second.reduction.name();
        tr.degree = it->second.degree;
        tr.pieces = it->second.pieces.size();
        tr.certifiedError = it->second.certifiedError;
        tr.cost = it->second.costEstimate;
      } else {
        tr.libmFallback = true;
      }
      row.targets.push_back(tr);
    }
    if (!accepted) {
      std::ostringstream os;
      os << "second-round bound " << finalRes.total << " exceeds target " << *tau
         << " after retry";
      if (!ao.lastFailure.empty()) os << "; " << ao.lastFailure;
      throw Error(ErrCode::BudgetExhausted, os.str());
    }

    if (!config.outDir.empty()) {
      SourceBundle bundle = emit(dp, ao.impls, ao.fallbacks, fmt);
      bundle.writeTo(config.outDir + "/" + p.name);
    }

    if (config.accuracySamples > 0) {
      ApproxProgram prog(dp, ao.impls, fmt);
      row.accuracy = measureAccuracy([&](const PointEnv& pt) { return prog.eval(pt); }, p,
                                     config.accuracySamples, config.seed, finalRes.total,
                                     fmt.name == "binary32");
      row.haveAccuracy = true;
    }

    if (config.mode == ToolConfig::Mode::Bench) fillTimingRows(config, dp, ao, fmt, row);

    row.ok = true;
  } catch (const Error& e) {
    row.ok = false;
    row.reason = errCodeName(e.code);
    row.message = e.what();
    if (row.name.empty()) row.name = std::filesystem::path(path).stem().string();
  } catch (const std::exception& e) {
    row.ok = false;
    row.reason = "InternalError";
    row.message = e.what();
    if (row.name.empty()) row.name = std::filesystem::path(path).stem().string();
  }
  row.analysisSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

RunReport runPipeline(const ToolConfig& config) {
  RunReport report;
  report.config = config;
  report.rows.resize(config.inputs.size());
  if (config.jobs <= 1 || config.inputs.size() <= 1) {
    for (size_t i = 0; i < config.inputs.size(); ++i)
      report.rows[i] = runOne(config, config.inputs[i]);
    return report;
  }
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= config.inputs.size()) return;
      report.rows[i] = runOne(config, config.inputs[i]);
    }
  };
  std::vector<std::future<void>> pool;
  int n = std::min<int>(config.jobs, static_cast<int>(config.inputs.size()));
  for (int i = 0; i < n; ++i) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  return report;
}

namespace {

nlohmann::ordered_json timingJson(const TimingStats& t) {
  nlohmann::ordered_json j;
  j["mean"] = t.mean;
  j["min"] = t.min;
  j["max"] = t.max;
  j["runs"] = t.runs;
  j["kept_per_run"] = t.keptPerRun;
  j["seed"] = t.seed;
  j["source"] = t.source;
  return j;
}

}  // namespace

nlohmann::ordered_json reportToJson(const RunReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = report.schema;
  const ToolConfig& c = report.config;
  nlohmann::ordered_json cfg;
  cfg["mode"] = c.mode == ToolConfig::Mode::Analyze ? "analyze"
                : c.mode == ToolConfig::Mode::Approx ? "approx"
                                                     : "bench";
  cfg["distribution"] = distributionName(c.distribution);
  cfg["depth"] = c.depth == kDepthUnbounded ? -1 : static_cast<long long>(c.depth);
  cfg["degrees"] = c.degrees;
  cfg["timeout_per_call"] = c.timeoutPerCall;
  cfg["max_splits"] = c.maxSplits;
  cfg["format"] = c.format;
  cfg["seed"] = c.seed;
  cfg["accuracy_samples"] = c.accuracySamples;
  cfg["bench_samples"] = c.benchSamples;
  cfg["bench_runs"] = c.benchRuns;
  if (c.targetError) cfg["target_error"] = *c.targetError;
  j["config"] = cfg;
  j["timer"] = timerSource();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["name"] = r.name;
    row["status"] = r.ok ? "ok" : "failed";
    if (!r.ok) {
      row["reason"] = r.reason;
      row["message"] = r.message;
    }
    if (r.targetError > 0.0) row["target_error"] = r.targetError;
    row["libm_bound"] = r.libmBound;
    if (r.ok || r.finalBound > 0.0) row["final_bound"] = r.finalBound;
    nlohmann::ordered_json targets = nlohmann::ordered_json::array();
    for (const auto& t : r.targets) {
      nlohmann::ordered_json tj;
      tj["local"] = t.local;
      tj["fn"] = t.fn;
      tj["arg_domain"] = {t.argDomain.lo, t.argDomain.hi};
      tj["tau_i"] = t.tau;
      tj["m_i"] = t.m;
      tj["eps_i"] = t.epsLocal;
      if (t.libmFallback) {
        tj["libm_fallback"] = true;
      } else {
        tj["reduction"] = t.reduction;
        tj["degree"] = t.degree;
        tj["pieces"] = t.pieces;
        tj["certified_error"] = t.certifiedError;
        tj["cost"] = t.cost;
      }
      targets.push_back(tj);
    }
    row["targets"] = targets;
    if (r.haveAccuracy) {
      nlohmann::ordered_json acc;
      acc["sampled_max"] = r.accuracy.sampledMax;
      acc["samples"] = r.accuracy.samples;
      acc["certified_bound"] = r.accuracy.certifiedBound;
      acc["margin"] = r.accuracy.margin;
      row["accuracy"] = acc;
    }
    if (r.haveTiming) {
      nlohmann::ordered_json t;
      t["backend"] = r.timingBackend;
      t["approx"] = timingJson(r.timingApprox);
      t["libm"] = timingJson(r.timingLibm);
      t["speedup_percent"] = r.speedupPercent;
      row["timing"] = t;
    }
    row["analysis_seconds"] = r.analysisSeconds;
    rows.push_back(row);
  }
  j["benchmarks"] = rows;
  return j;
}

nlohmann::ordered_json normalizeReport(nlohmann::ordered_json j) {
  j.erase("timer");
  if (j.contains("benchmarks"))
    for (auto& row : j["benchmarks"]) {
      row.erase("analysis_seconds");
      row.erase("timing");
    }
  return j;
}

std::string reportCsv(const RunReport& report) {
  std::ostringstream os;
  os << "name,status,target_error,libm_bound,final_bound,sampled_max,approx_mean,libm_mean,"
        "speedup_percent,timer\n";
  for (const auto& r : report.rows) {
    os << r.name << ',' << (r.ok ? "ok" : "failed") << ',';
    os << r.targetError << ',' << r.libmBound << ',' << r.finalBound << ',';
    if (r.haveAccuracy)
      os << r.accuracy.sampledMax;
    os << ',';
    if (r.haveTiming)
      os << r.timingApprox.mean << ',' << r.timingLibm.mean << ',' << r.speedupPercent;
    else
      os << ",,";
    os << ',' << (r.haveTiming ? r.timingApprox.source : "") << '\n';
  }
  return os.str();
}

}  // namespace approxcc
