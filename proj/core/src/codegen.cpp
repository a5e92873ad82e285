#include "approxcc/codegen.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace approxcc {

namespace {

std::string hex64(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string hex32(float v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%af", static_cast<double>(v));
  return buf;
}

int precedenceC(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    default:
      return 4;
  }
}

// C expression text with the same tree shape as the analyzed expression (no
// reassociation; parentheses force the structure).
void emitCExpr(const ExprPtr& e, bool f32, int parentPrec, bool rightChild, std::ostream& os) {
  int prec = precedenceC(e->op);
  bool parens = prec < parentPrec || (prec == parentPrec && rightChild && prec <= 2);
  if (parens) os << '(';
  switch (e->op) {
    case Op::Const:
      os << (f32 ? hex32(literalToFloat(e->sym)) : hex64(e->value));
      break;
    case Op::Var:
      os << e->sym;
      break;
    case Op::Neg:
      os << '-';
      emitCExpr(e->a, f32, 3, false, os);
      break;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      emitCExpr(e->a, f32, prec, false, os);
      os << ' ' << opName(e->op) << ' ';
      emitCExpr(e->b, f32, prec, true, os);
      break;
    default: {
      const char* fn = opName(e->op);
      os << fn << (f32 ? "f(" : "(");
      emitCExpr(e->a, f32, 0, false, os);
      os << ')';
      break;
    }
  }
  if (parens) os << ')';
}

std::string cExpr(const ExprPtr& e, bool f32) {
  std::ostringstream os;
  emitCExpr(e, f32, 0, false, os);
  return os.str();
}

void emitPieces(const ApproxImpl& impl, std::ostream& os) {
  const auto& ps = impl.pieces;
  os << "    double p;\n";
  for (size_t i = 0; i < ps.size(); ++i) {
    if (ps.size() > 1) {
      if (i == 0)
        os << "    if (t <= " << hex64(ps[i].dom.hi) << ") {\n";
      else if (i + 1 < ps.size())
        os << "    } else if (t <= " << hex64(ps[i].dom.hi) << ") {\n";
      else
        os << "    } else {\n";
    }
    std::string ind = ps.size() > 1 ? "        " : "    ";
    const PolyPiece& p = ps[i];
    if (p.center == 0.0)
      os << ind << "double u = t;\n";
    else
      os << ind << "double u = t - " << hex64(p.center) << ";\n";
    os << ind << "p = " << hex64(p.coeffs.back()) << ";\n";
    for (size_t k = p.coeffs.size() - 1; k-- > 0;)
      os << ind << "p = p * u + " << hex64(p.coeffs[k]) << ";\n";
  }
  if (ps.size() > 1) os << "    }\n";
}

void emitKernel(const std::string& fnName, const ApproxImpl& impl, std::ostream& os) {
  const Reduction& r = impl.reduction;
  os << "/* domain [" << hex64(impl.certifiedDomain.lo) << ", " << hex64(impl.certifiedDomain.hi)
     << "], certified absolute error " << impl.certifiedError << " */\n";
  os << "static inline double " << fnName << "(double x) {\n";
  switch (r.kind) {
    case Reduction::Kind::None:
      os << "    double t = x;\n";
      break;
    case Reduction::Kind::OddFold:
    case Reduction::Kind::EvenFold:
      os << "    double t = fabs(x);\n";
      break;
    case Reduction::Kind::PeriodicFold:
    case Reduction::Kind::ExpScale:
      os << "    double kd = nearbyint(x * " << hex64(r.invStep) << ");\n";
      os << "    double r = (x - kd * " << hex64(r.c1) << ") - kd * " << hex64(r.c2) << ";\n";
      if (r.parityOdd || r.parityEven)
        os << "    double t = fabs(r);\n";
      else
        os << "    double t = r;\n";
      break;
    case Reduction::Kind::LogDecompose:
      os << "    int e;\n";
      os << "    double m = frexp(x, &e);\n";
      os << "    if (m < " << hex64(0x1.6a09e667f3bcdp-1) << ") { m = m * 2.0; e -= 1; }\n";
      os << "    double t = m;\n";
      break;
    case Reduction::Kind::SqrtScale:
      os << "    if (x == 0.0) return 0.0;\n";
      os << "    int e;\n";
      os << "    double m = frexp(x, &e);\n";
      os << "    if (e & 1) { m = m * 2.0; e -= 1; }\n";
      os << "    double t = m;\n";
      break;
  }
  emitPieces(impl, os);
  switch (r.kind) {
    case Reduction::Kind::None:
    case Reduction::Kind::EvenFold:
      os << "    return p;\n";
      break;
    case Reduction::Kind::OddFold:
      os << "    return x < 0.0 ? -p : p;\n";
      break;
    case Reduction::Kind::PeriodicFold:
      if (r.parityOdd)
        os << "    return r < 0.0 ? -p : p;\n";
      else
        os << "    return p;\n";
      break;
    case Reduction::Kind::ExpScale:
      os << "    return ldexp(p, (int)kd);\n";
      break;
    case Reduction::Kind::LogDecompose:
      os << "    return (double)e * " << hex64(r.c1) << " + ((double)e * " << hex64(r.c2)
         << " + p);\n";
      break;
    case Reduction::Kind::SqrtScale:
      os << "    return ldexp(p, e / 2);\n";
      break;
  }
  os << "}\n\n";
}

std::string driverSource(const Program& p, bool f32) {
  std::ostringstream os;
  size_t nParams = p.params.size();
  const char* ty = f32 ? "float" : "double";
  os << "#include <stdio.h>\n#include <stdlib.h>\n#include <string.h>\n#include <time.h>\n\n";
  os << ty << ' ' << p.name << "(";
  for (size_t i = 0; i < nParams; ++i) os << (i ? ", " : "") << ty;
  os << ");\n\n";
  os << "#if defined(__x86_64__)\n"
        "static unsigned long long ticks(void) {\n"
        "    unsigned int lo, hi;\n"
        "    __asm__ __volatile__(\"lfence\\n\\trdtsc\" : \"=a\"(lo), \"=d\"(hi));\n"
        "    return ((unsigned long long)hi << 32) | lo;\n"
        "}\n"
        "#else\n"
        "static unsigned long long ticks(void) {\n"
        "    struct timespec ts;\n"
        "    clock_gettime(CLOCK_MONOTONIC, &ts);\n"
        "    return (unsigned long long)ts.tv_sec * 1000000000ull + ts.tv_nsec;\n"
        "}\n"
        "#endif\n\n";
  os << "int main(int argc, char** argv) {\n";
  os << "    if (argc >= 2 && strcmp(argv[1], \"check\") == 0) {\n";
  os << "        double a[" << nParams << "];\n";
  os << "        for (;;) {\n            int got = 0;\n";
  os << "            for (int i = 0; i < " << nParams
     << "; i++) got += scanf(\"%la\", &a[i]);\n";
  os << "            if (got != " << nParams << ") break;\n";
  os << "            printf(\"%a\\n\", (double)" << p.name << "(";
  for (size_t i = 0; i < nParams; ++i) os << (i ? ", " : "") << (f32 ? "(float)" : "") << "a[" << i << "]";
  os << "));\n        }\n        return 0;\n    }\n";
  os << "    if (argc == 6 && strcmp(argv[1], \"bench\") == 0) {\n";
  os << "        const char* inPath = argv[2];\n"
        "        long n = atol(argv[3]);\n"
        "        int runs = atoi(argv[4]);\n"
        "        FILE* in = fopen(inPath, \"rb\");\n"
        "        FILE* out = fopen(argv[5], \"wb\");\n"
        "        if (!in || !out) return 2;\n";
  os << "        double* xs = malloc(sizeof(double) * n * " << nParams << ");\n";
  os << "        unsigned long long* cy = malloc(sizeof(unsigned long long) * n);\n";
  os << "        if (fread(xs, sizeof(double), n * " << nParams << ", in) != (size_t)(n * "
     << nParams << ")) return 3;\n";
  os << "        volatile double sink = 0.0;\n";
  os << "        for (int r = 0; r < runs; r++) {\n";
  os << "            for (long i = 0; i < n; i++) sink += (double)" << p.name << "(";
  for (size_t i = 0; i < nParams; ++i)
    os << (i ? ", " : "") << (f32 ? "(float)" : "") << "xs[i * " << nParams << " + " << i << "]";
  os << ");  /* warm-up */\n";
  os << "            for (long i = 0; i < n; i++) {\n";
  os << "                unsigned long long t0 = ticks();\n";
  os << "                sink += (double)" << p.name << "(";
  for (size_t i = 0; i < nParams; ++i)
    os << (i ? ", " : "") << (f32 ? "(float)" : "") << "xs[i * " << nParams << " + " << i << "]";
  os << ");\n";
  os << "                cy[i] = ticks() - t0;\n            }\n";
  os << "            fwrite(cy, sizeof(unsigned long long), n, out);\n        }\n";
  os << "        fclose(in); fclose(out);\n";
  os << "        return sink == -1.0 ? 1 : 0;\n    }\n";
  os << "    fprintf(stderr, \"usage: %s check | bench <inputs.bin> <n> <runs> <out.bin>\\n\", "
        "argv[0]);\n";
  os << "    return 2;\n}\n";
  return os.str();
}

}  // namespace

SourceBundle emit(const DecomposedProgram& dp, const std::map<std::string, ApproxImpl>& impls,
                  const std::set<std::string>& libmFallbacks, const FloatFormat& fmt) {
  const Program& p = dp.program;
  bool f32 = fmt.name == "binary32";
  const char* ty = f32 ? "float" : "double";

  for (const auto& t : dp.targets)
    if (!impls.count(t.local) && !libmFallbacks.count(t.local))
      throw Error(ErrCode::UnmappedTarget, "target " + t.local + " has no implementation");

  // kernel names in target order
  std::map<std::string, std::string> kernelName;
  {
    int i = 0;
    for (const auto& t : dp.targets) {
      if (impls.count(t.local)) kernelName[t.local] = p.name + "_k" + std::to_string(i);
      ++i;
    }
  }

  std::ostringstream kh;
  kh << "/* polynomial kernels for " << p.name << "; include once, link nothing */\n";
  kh << "#ifndef " << p.name << "_KERNELS_H\n#define " << p.name << "_KERNELS_H\n\n";
  kh << "#include <math.h>\n\n";
  for (const auto& t : dp.targets) {
    auto it = impls.find(t.local);
    if (it != impls.end()) emitKernel(kernelName[t.local], it->second, kh);
  }
  kh << "#endif\n";

  std::ostringstream pc;
  pc << "#include <math.h>\n#include \"" << p.name << "_kernels.h\"\n\n";
  pc << ty << ' ' << p.name << "(";
  for (size_t i = 0; i < p.params.size(); ++i)
    pc << (i ? ", " : "") << ty << ' ' << p.params[i].name;
  pc << ") {\n";
  for (const auto& t : dp.targets) {
    pc << "    " << ty << ' ' << t.local << " = ";
    auto it = impls.find(t.local);
    if (it != impls.end()) {
      if (f32)
        pc << "(float)" << kernelName[t.local] << "((double)(" << cExpr(t.arg, f32) << "));\n";
      else
        pc << kernelName[t.local] << "(" << cExpr(t.arg, f32) << ");\n";
    } else {
      pc << cExpr(substitute(t.body, t.formal, t.arg), f32) << ";\n";
    }
  }
  pc << "    return " << cExpr(dp.program.result, f32) << ";\n}\n";

  std::string buildSh =
      "#!/bin/sh\n"
      "# builds the benchmark/check driver; kernels are header-inlined\n"
      "set -e\n"
      "CC=${CC:-cc}\n"
      "$CC -std=c99 -O2 -ffp-contract=off -fno-math-errno " +
      p.name + ".c " + p.name + "_driver.c -o " + p.name + "_run -lm\n";

  nlohmann::ordered_json manifest;
  manifest["program"] = p.name;
  manifest["format"] = fmt.name;
  manifest["files"] = {p.name + ".c", p.name + "_kernels.h", p.name + "_driver.c", "build.sh"};
  nlohmann::ordered_json kernels = nlohmann::ordered_json::object();
  for (const auto& t : dp.targets) {
    nlohmann::ordered_json row;
    auto it = impls.find(t.local);
    if (it != impls.end()) {
      row["kernel"] = kernelName[t.local];
      row["reduction"] = it->second.reduction.name();
      row["degree"] = it->second.degree;
      row["pieces"] = it->second.pieces.size();
      row["certified_error"] = it->second.certifiedError;
      row["domain"] = {it->second.certifiedDomain.lo, it->second.certifiedDomain.hi};
    } else {
      row["kernel"] = nullptr;
      row["libm"] = true;
    }
    kernels[t.local] = row;
  }
  manifest["kernels"] = kernels;

  SourceBundle b;
  b.programFile = p.name + ".c";
  b.kernelHeader = p.name + "_kernels.h";
  b.driverFile = p.name + "_driver.c";
  b.buildScript = "build.sh";
  b.manifestFile = "manifest.json";
  b.files[b.programFile] = pc.str();
  b.files[b.kernelHeader] = kh.str();
  b.files[b.driverFile] = driverSource(p, f32);
  b.files[b.buildScript] = buildSh;
  b.files[b.manifestFile] = manifest.dump(2) + "\n";
  return b;
}

void SourceBundle::writeTo(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& [name, content] : files) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw Error(ErrCode::ExecutionFailure, "cannot write " + name + " in " + dir);
    out << content;
  }
  fs::permissions(fs::path(dir) / buildScript,
                  fs::perms::owner_exec | fs::perms::group_exec | fs::perms::others_exec,
                  fs::perm_options::add);
}

ApproxProgram::ApproxProgram(DecomposedProgram dp, std::map<std::string, ApproxImpl> impls,
                             FloatFormat fmt)
    : dp_(std::move(dp)), impls_(std::move(impls)), f32_(fmt.name == "binary32") {}

double ApproxProgram::eval(const PointEnv& point) const {
  PointEnv env = point;
  for (const auto& t : dp_.targets) {
    auto it = impls_.find(t.local);
    double v;
    if (f32_) {
      float a = evalF32(t.arg, env);
      if (it != impls_.end())
        v = static_cast<float>(evalApproxImpl(it->second, static_cast<double>(a)));
      else
        v = evalF32(t.body, {{t.formal, static_cast<double>(a)}});
    } else {
      double a = evalF64(t.arg, env);
      v = it != impls_.end() ? evalApproxImpl(it->second, a) : evalF64(t.body, {{t.formal, a}});
    }
    env[t.local] = v;
  }
  return f32_ ? static_cast<double>(evalF32(dp_.program.result, env))
              : evalF64(dp_.program.result, env);
}

double ApproxProgram::evalLibm(const PointEnv& point) const {
  PointEnv env = point;
  for (const auto& t : dp_.targets) {
    double v;
    if (f32_) {
      float a = evalF32(t.arg, env);
      v = evalF32(t.body, {{t.formal, static_cast<double>(a)}});
    } else {
      double a = evalF64(t.arg, env);
      v = evalF64(t.body, {{t.formal, a}});
    }
    env[t.local] = v;
  }
  return f32_ ? static_cast<double>(evalF32(dp_.program.result, env))
              : evalF64(dp_.program.result, env);
}

}  // namespace approxcc
