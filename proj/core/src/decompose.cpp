#include "approxcc/decompose.hpp"

#include <map>
#include <set>
#include <sstream>

namespace approxcc {

const Target* DecomposedProgram::findTarget(const std::string& local) const {
  for (const auto& t : targets)
    if (t.local == local) return &t;
  return nullptr;
}

namespace {

std::string pathKey(const std::vector<int>& path) {
  std::ostringstream os;
  for (int i : path) os << i << '.';
  return os.str();
}

struct RootInfo {
  const Expr* node;
  // A compound root covers its whole subtree (grown univariate chain); a
  // head root covers only the call itself, so targets nested inside its
  // argument stay separate.
  bool compound;
};

struct Finder {
  unsigned depth;
  // target root occurrences, keyed by path
  std::map<std::string, RootInfo> roots;

  // Walks the tree keeping the ancestor chain. For each elementary call,
  // climbs to the largest enclosing subtree that stays univariate, keeps all
  // other elementary calls on the nesting chain (no parallel calls), and
  // respects the height budget depth + height(call).
  void scan(const ExprPtr& e, std::vector<const Expr*>& chain, std::vector<int>& path) {
    if (!e) return;
    if (isElementary(e->op)) {
      size_t rootDepth = chain.size();  // index into chain; chain.size() = self
      if (depth > 0) {
        int callHeight = height(e);
        const Expr* cur = e.get();
        for (size_t i = chain.size(); i-- > 0;) {
          const Expr* anc = chain[i];
          if (arity(anc->op) == 2) {
            const ExprPtr& sibling = (anc->a.get() == cur) ? anc->b : anc->a;
            if (containsElementary(sibling)) break;  // parallel call: not a chain
          }
          ExprPtr ancPtr = (i == 0) ? rootPtr : ptrInParent(chain, i);
          if (freeVars(ancPtr).size() > 1) break;
          if (depth != kDepthUnbounded &&
              static_cast<unsigned>(height(ancPtr)) > depth + static_cast<unsigned>(callHeight))
            break;
          rootDepth = i;
          cur = anc;
        }
      }
      std::vector<int> rootPath(path.begin(), path.begin() + rootDepth);
      const Expr* rootNode = rootDepth == chain.size() ? e.get() : chain[rootDepth];
      bool compound = rootNode != e.get();
      auto [it, inserted] = roots.emplace(pathKey(rootPath), RootInfo{rootNode, compound});
      if (!inserted) it->second.compound = it->second.compound || compound;
    }
    chain.push_back(e.get());
    if (e->a) {
      path.push_back(0);
      scan(e->a, chain, path);
      path.pop_back();
    }
    if (e->b) {
      path.push_back(1);
      scan(e->b, chain, path);
      path.pop_back();
    }
    chain.pop_back();
  }

  ExprPtr ptrInParent(const std::vector<const Expr*>& chain, size_t i) {
    // Recover a shared_ptr for chain[i] through its parent (or the root).
    if (i == 0) return rootPtr;
    const Expr* parent = chain[i - 1];
    if (parent->a.get() == chain[i]) return parent->a;
    return parent->b;
  }

  ExprPtr rootPtr;
};

struct Rewriter {
  const std::map<std::string, RootInfo>& roots;
  std::set<std::string> usedNames;
  std::vector<Let> lets;
  std::vector<Target> targets;
  std::map<std::string, std::string> sharedLocals;  // target text -> local
  int counter = 0;

  std::string freshLocal() {
    for (;;) {
      std::string name = "v" + std::to_string(++counter);
      if (!usedNames.count(name)) {
        usedNames.insert(name);
        return name;
      }
    }
  }

  ExprPtr rewrite(const ExprPtr& e, std::vector<int>& path) {
    ExprPtr na = e->a, nb = e->b;
    if (e->a) {
      path.push_back(0);
      na = rewrite(e->a, path);
      path.pop_back();
    }
    if (e->b) {
      path.push_back(1);
      nb = rewrite(e->b, path);
      path.pop_back();
    }
    ExprPtr node = e;
    if (na.get() != e->a.get() || nb.get() != e->b.get()) {
      node = arity(e->op) == 1 ? build::unary(e->op, na) : build::binary(e->op, na, nb);
    }
    auto rootIt = roots.find(pathKey(path));
    if (rootIt == roots.end()) return node;
    bool compound = rootIt->second.compound;

    std::string key = exprToString(node);
    auto shared = sharedLocals.find(key);
    if (shared != sharedLocals.end()) return build::var(shared->second);

    std::string local = freshLocal();
    sharedLocals.emplace(key, local);
    lets.push_back({local, node});

    Target t;
    t.local = local;
    std::string formal = "x";
    while (usedNames.count(formal)) formal = "_" + formal;
    t.formal = formal;
    if (!compound && isElementary(node->op)) {
      // Bare call: approximate the head as a function of its argument value.
      t.body = build::unary(node->op, build::var(formal));
      t.arg = node->a;
    } else {
      // Compound univariate chain rooted on a single variable.
      std::set<std::string> fv = freeVars(node);
      std::string w = fv.empty() ? std::string() : *fv.begin();
      if (fv.empty()) {
        // Constant subtree with an elementary call inside; treat the whole
        // subtree as the body over a dummy point argument.
        t.body = node;
        t.arg = build::cstd(0.0);
      } else {
        t.body = substitute(node, w, build::var(formal));
        t.arg = build::var(w);
      }
    }
    targets.push_back(t);
    return build::var(local);
  }
};

}  // namespace

DecomposedProgram decompose(const Program& p, unsigned depth) {
  bool hasCalls = containsElementary(p.result);
  for (const auto& l : p.lets) hasCalls = hasCalls || containsElementary(l.expr);
  if (!hasCalls) return {p, {}};

  ExprPtr body = inlineLets(p);

  Finder finder;
  finder.depth = depth;
  finder.rootPtr = body;
  std::vector<const Expr*> chain;
  std::vector<int> path;
  finder.scan(body, chain, path);

  // A compound root absorbs every root strictly inside its subtree; head
  // roots absorb nothing (their arguments are evaluated separately).
  std::map<std::string, RootInfo> outer;
  for (const auto& [key, info] : finder.roots) {
    bool absorbed = false;
    for (const auto& [other, info2] : finder.roots) {
      if (info2.compound && other.size() < key.size() &&
          key.compare(0, other.size(), other) == 0) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) outer.emplace(key, info);
  }

  Rewriter rw{outer, {}, {}, {}, {}, 0};
  for (const auto& q : p.params) rw.usedNames.insert(q.name);
  std::vector<int> rpath;
  ExprPtr newResult = rw.rewrite(body, rpath);

  DecomposedProgram out;
  out.program.name = p.name;
  out.program.params = p.params;
  out.program.lets = rw.lets;
  out.program.result = newResult;
  out.program.targetError = p.targetError;
  out.program.targetErrorText = p.targetErrorText;
  out.targets = rw.targets;
  return out;
}

}  // namespace approxcc
