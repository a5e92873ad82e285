#include "approxcc/bound.hpp"

#include <algorithm>
#include <queue>

namespace approxcc {

namespace {

struct Node {
  double ub;
  int64_t seq;
  Box box;
};

struct NodeLess {
  bool operator()(const Node& a, const Node& b) const {
    if (a.ub != b.ub) return a.ub < b.ub;
    return a.seq > b.seq;  // older first on ties
  }
};

double evalBox(const ExprPtr& e, const Box& box) {
  IntervalEnv env;
  for (const auto& [name, iv] : box) env.emplace(name, iv);
  return intervalEval(e, env).maxAbs();
}

// Widest dimension; among equals, the lexicographically first variable.
size_t pickDim(const Box& box) {
  size_t best = 0;
  double w = -1.0;
  for (size_t i = 0; i < box.size(); ++i) {
    double wi = box[i].second.width();
    if (wi > w || (wi == w && box[i].first < box[best].first)) {
      w = wi;
      best = i;
    }
  }
  return best;
}

}  // namespace

double boundAbs(const ExprPtr& e, const Box& box, int budget) {
  if (box.empty()) return evalBox(e, box);
  std::priority_queue<Node, std::vector<Node>, NodeLess> open;
  int64_t seq = 0;
  open.push({evalBox(e, box), seq++, box});
  double settled = 0.0;  // max over boxes no longer refined
  int used = 1;
  while (!open.empty() && used < budget) {
    Node n = open.top();
    if (n.ub <= settled) break;
    open.pop();
    size_t d = pickDim(n.box);
    const Interval& iv = n.box[d].second;
    if (iv.width() <= 0.0 || iv.mid() <= iv.lo || iv.mid() >= iv.hi) {
      settled = std::max(settled, n.ub);
      continue;
    }
    double m = iv.mid();
    Box left = n.box, right = n.box;
    left[d].second = Interval(iv.lo, m);
    right[d].second = Interval(m, iv.hi);
    open.push({evalBox(e, left), seq++, left});
    open.push({evalBox(e, right), seq++, right});
    used += 2;
  }
  double best = settled;
  while (!open.empty()) {
    best = std::max(best, open.top().ub);
    open.pop();
  }
  return best;
}

}  // namespace approxcc
