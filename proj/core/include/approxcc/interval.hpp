#pragma once

#include <map>
#include <string>

#include "approxcc/expr.hpp"

namespace approxcc {

// Closed interval with outward-rounded endpoint arithmetic. Every operation
// returns an enclosure of the exact real image; endpoints stay finite or the
// operation throws (RangeBlowup for overflow, Domain for log/sqrt/div/tan
// domain violations).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double l, double h);
  static Interval point(double v) { return Interval(v, v); }

  double width() const { return hi - lo; }
  double mid() const;
  double rad() const;             // upper bound on half-width from mid()
  double maxAbs() const;
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool containsZero() const { return lo <= 0.0 && 0.0 <= hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);

Interval scaleI(const Interval& a, double s);       // a * [s, s]
Interval addScalarUp(const Interval& a, double s);  // outward a + [s, s]
Interval hullI(const Interval& a, const Interval& b);
Interval intersectI(const Interval& a, const Interval& b);  // must overlap
Interval widenI(const Interval& a, double delta);   // a + [-delta, delta]

Interval sqrtI(const Interval& a);
Interval sinI(const Interval& a);
Interval cosI(const Interval& a);
Interval tanI(const Interval& a);
Interval expI(const Interval& a);
Interval logI(const Interval& a);
Interval fnI(Op op, const Interval& a);
Interval absI(const Interval& a);

// Directed scalar helpers (shared with the error analysis bookkeeping).
double addUp(double a, double b);
double addDown(double a, double b);
double subUp(double a, double b);
double subDown(double a, double b);
double mulUp(double a, double b);
double mulDown(double a, double b);
double divUp(double a, double b);
double divDown(double a, double b);

using IntervalEnv = std::map<std::string, Interval>;

// Enclosure of {e(x) : x in env}. Throws Domain / RangeBlowup.
Interval intervalEval(const ExprPtr& e, const IntervalEnv& env);

}  // namespace approxcc
