#include "approxcc/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "approxcc/bigreal.hpp"

namespace approxcc {

const Param* Program::findParam(const std::string& n) const {
  for (const auto& p : params)
    if (p.name == n) return &p;
  return nullptr;
}

const Let* Program::findLet(const std::string& n) const {
  for (const auto& l : lets)
    if (l.name == n) return &l;
  return nullptr;
}

IntervalEnv Program::domainEnv() const {
  IntervalEnv env;
  for (const auto& p : params) env.emplace(p.name, p.domain);
  return env;
}

ExprPtr inlineLets(const Program& p) {
  ExprPtr body = p.result;
  for (auto it = p.lets.rbegin(); it != p.lets.rend(); ++it)
    body = substitute(body, it->name, it->expr);
  return body;
}

std::string programToString(const Program& p) {
  std::ostringstream os;
  os << "def " << p.name << "(";
  for (size_t i = 0; i < p.params.size(); ++i) {
    if (i) os << ", ";
    os << p.params[i].name << ": Real";
  }
  os << "): Real = {\n  require(";
  for (size_t i = 0; i < p.params.size(); ++i) {
    if (i) os << " && ";
    const Param& q = p.params[i];
    os << q.loText << " <= " << q.name << " && " << q.name << " <= " << q.hiText;
  }
  os << ")\n";
  for (const auto& l : p.lets) os << "  val " << l.name << ": Real = " << exprToString(l.expr) << "\n";
  os << "  " << exprToString(p.result) << "\n}";
  if (p.targetError) os << " ensuring(res => res +/- " << p.targetErrorText << ")";
  os << "\n";
  return os.str();
}

bool structurallyEqual(const Program& a, const Program& b) {
  if (a.name != b.name || a.params.size() != b.params.size() || a.lets.size() != b.lets.size())
    return false;
  for (size_t i = 0; i < a.params.size(); ++i) {
    const Param &x = a.params[i], &y = b.params[i];
    if (x.name != y.name || x.domain.lo != y.domain.lo || x.domain.hi != y.domain.hi) return false;
  }
  for (size_t i = 0; i < a.lets.size(); ++i)
    if (a.lets[i].name != b.lets[i].name || !structurallyEqual(a.lets[i].expr, b.lets[i].expr))
      return false;
  if (!structurallyEqual(a.result, b.result)) return false;
  if (a.targetError.has_value() != b.targetError.has_value()) return false;
  if (a.targetError && *a.targetError != *b.targetError) return false;
  return true;
}

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << "line " << tok_.line << ":" << tok_.col << ": " << msg;
    if (tok_.kind != Tok::End) os << " (at '" << tok_.text << "')";
    throw Error(ErrCode::Syntax, os.str());
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::End, "", line_, col_};
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        take();
      tok_ = {Tok::Ident, src_.substr(start, pos_ - start), tok_.line, tok_.col};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      size_t start = pos_;
      while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
        take();
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        size_t save = pos_;
        take();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) take();
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) take();
        } else {
          pos_ = save;  // not an exponent
        }
      }
      tok_ = {Tok::Number, src_.substr(start, pos_ - start), tok_.line, tok_.col};
      return;
    }
    // multi-char punctuation
    static const char* multi[] = {"&&", "<=", ">=", "=>", "+/-"};
    for (const char* m : multi) {
      size_t n = std::strlen(m);
      if (src_.compare(pos_, n, m) == 0) {
        tok_ = {Tok::Punct, m, tok_.line, tok_.col};
        for (size_t i = 0; i < n; ++i) take();
        return;
      }
    }
    tok_ = {Tok::Punct, std::string(1, c), tok_.line, tok_.col};
    take();
  }

  void take() {
    ++pos_;
    ++col_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Program parse() {
    expectIdent("def");
    prog_.name = expectKind(Tok::Ident, "program name").text;
    expectPunct("(");
    while (true) {
      Param p;
      p.name = expectKind(Tok::Ident, "parameter name").text;
      expectPunct(":");
      expectIdent("Real");
      declareParam(p);
      if (tryPunct(",")) continue;
      break;
    }
    expectPunct(")");
    expectPunct(":");
    expectIdent("Real");
    expectPunct("=");
    expectPunct("{");
    if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "require") parseRequire();
    checkDomains();
    while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "val") parseLet();
    prog_.result = parseExpr();
    tryPunct(";");
    expectPunct("}");
    if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "ensuring") parseEnsuring();
    if (lex_.peek().kind != Tok::End) lex_.fail("trailing input after program");
    return std::move(prog_);
  }

 private:
  void declareParam(Param& p) {
    if (scope_.count(p.name)) lex_.fail("duplicate identifier " + p.name);
    scope_.insert(p.name);
    prog_.params.push_back(p);
  }

  void parseRequire() {
    lex_.next();
    expectPunct("(");
    while (true) {
      parseBoundAtom();
      if (tryPunct("&&")) continue;
      break;
    }
    expectPunct(")");
  }

  // literal <= ident | ident <= literal (and the mirrored >= forms)
  void parseBoundAtom() {
    Token t = lex_.next();
    if (t.kind == Tok::Number || (t.kind == Tok::Punct && t.text == "-")) {
      std::string lit = t.text == "-" ? "-" + expectKind(Tok::Number, "number").text : t.text;
      std::string rel = expectRel();
      std::string id = expectKind(Tok::Ident, "parameter name").text;
      setBound(id, lit, rel == "<=" ? BoundSide::Lo : BoundSide::Hi);
    } else if (t.kind == Tok::Ident) {
      std::string rel = expectRel();
      Token v = lex_.next();
      std::string lit = v.text;
      if (v.kind == Tok::Punct && v.text == "-")
        lit = "-" + expectKind(Tok::Number, "number").text;
      else if (v.kind != Tok::Number)
        lex_.fail("expected numeric bound");
      setBound(t.text, lit, rel == "<=" ? BoundSide::Hi : BoundSide::Lo);
    } else {
      lex_.fail("expected bound constraint");
    }
  }

  std::string expectRel() {
    Token t = lex_.next();
    if (t.kind != Tok::Punct || (t.text != "<=" && t.text != ">=")) lex_.fail("expected <= or >=");
    return t.text;
  }

  enum class BoundSide { Lo, Hi };

  void setBound(const std::string& id, const std::string& lit, BoundSide side) {
    for (auto& p : prog_.params) {
      if (p.name != id) continue;
      if (side == BoundSide::Lo)
        p.loText = lit;
      else
        p.hiText = lit;
      return;
    }
    lex_.fail("require bounds unknown parameter " + id);
  }

  void checkDomains() {
    for (auto& p : prog_.params) {
      if (p.loText.empty() || p.hiText.empty())
        lex_.fail("parameter " + p.name + " has no bounded domain (missing require clause)");
      double lo = build::cst(p.loText)->value;
      double hi = build::cst(p.hiText)->value;
      if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        lex_.fail("parameter " + p.name + " has an empty or non-finite domain");
      p.domain = Interval(lo, hi);
    }
  }

  void parseLet() {
    lex_.next();
    std::string name = expectKind(Tok::Ident, "let name").text;
    if (scope_.count(name)) lex_.fail("duplicate identifier " + name);
    if (tryPunct(":")) expectIdent("Real");
    expectPunct("=");
    ExprPtr e = parseExpr();
    tryPunct(";");
    scope_.insert(name);
    prog_.lets.push_back({name, e});
  }

  void parseEnsuring() {
    lex_.next();
    expectPunct("(");
    std::string res = expectKind(Tok::Ident, "result name").text;
    expectPunct("=>");
    std::string res2 = expectKind(Tok::Ident, "result name").text;
    if (res2 != res) lex_.fail("ensuring must constrain the bound result variable");
    expectPunct("+/-");
    Token t = lex_.next();
    std::string lit = t.text;
    if (t.kind == Tok::Punct && t.text == "-")
      lit = "-" + expectKind(Tok::Number, "number").text;
    else if (t.kind != Tok::Number)
      lex_.fail("expected numeric error bound");
    expectPunct(")");
    double v = build::cst(lit)->value;
    if (!(v > 0.0)) lex_.fail("target error must be positive");
    prog_.targetError = v;
    prog_.targetErrorText = lit;
  }

  ExprPtr parseExpr() {
    ExprPtr e = parseTerm();
    while (lex_.peek().kind == Tok::Punct && (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      std::string op = lex_.next().text;
      ExprPtr rhs = parseTerm();
      e = op == "+" ? build::add(e, rhs) : build::sub(e, rhs);
    }
    return e;
  }

  ExprPtr parseTerm() {
    ExprPtr e = parseFactor();
    while (lex_.peek().kind == Tok::Punct && (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      std::string op = lex_.next().text;
      ExprPtr rhs = parseFactor();
      e = op == "*" ? build::mul(e, rhs) : build::div(e, rhs);
    }
    return e;
  }

  ExprPtr parseFactor() {
    Token t = lex_.peek();
    if (t.kind == Tok::Punct && t.text == "-") {
      lex_.next();
      return build::neg(parseFactor());
    }
    if (t.kind == Tok::Punct && t.text == "(") {
      lex_.next();
      ExprPtr e = parseExpr();
      expectPunct(")");
      return e;
    }
    if (t.kind == Tok::Number) {
      lex_.next();
      return build::cst(t.text);
    }
    if (t.kind == Tok::Ident) {
      lex_.next();
      static const std::map<std::string, Op> fns = {
          {"sqrt", Op::Sqrt}, {"sin", Op::Sin}, {"cos", Op::Cos},
          {"tan", Op::Tan},   {"exp", Op::Exp}, {"log", Op::Log}};
      if (lex_.peek().kind == Tok::Punct && lex_.peek().text == "(") {
        auto it = fns.find(t.text);
        if (it == fns.end()) lex_.fail("unknown function name " + t.text);
        lex_.next();
        ExprPtr arg = parseExpr();
        expectPunct(")");
        return build::unary(it->second, arg);
      }
      if (!scope_.count(t.text)) lex_.fail("use of undeclared identifier " + t.text);
      return build::var(t.text);
    }
    lex_.fail("expected expression");
  }

  void expectIdent(const std::string& kw) {
    Token t = lex_.next();
    if (t.kind != Tok::Ident || t.text != kw) lex_.fail("expected '" + kw + "'");
  }

  void expectPunct(const std::string& p) {
    Token t = lex_.next();
    if (t.kind != Tok::Punct || t.text != p) lex_.fail("expected '" + p + "'");
  }

  bool tryPunct(const std::string& p) {
    if (lex_.peek().kind == Tok::Punct && lex_.peek().text == p) {
      lex_.next();
      return true;
    }
    return false;
  }

  Token expectKind(Tok k, const char* what) {
    Token t = lex_.next();
    if (t.kind != k) lex_.fail(std::string("expected ") + what);
    return t;
  }

  Lexer lex_;
  Program prog_;
  std::set<std::string> scope_;
};

}  // namespace

Program parseProgram(const std::string& source) { return Parser(source).parse(); }

Program parseProgramFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrCode::ExecutionFailure, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parseProgram(ss.str());
}

}  // namespace approxcc
