#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "approxcc/interval.hpp"

namespace approxcc {

// Fresh noise-symbol allocator. One context per analysis run; allocation
// order is deterministic, so bounds are reproducible.
class AffineContext {
 public:
  int64_t fresh() { return next_++; }
  int64_t issued() const { return next_; }

 private:
  int64_t next_ = 0;
};

// Affine form: center + sum(term_i * eps_i) + slack * eps0 with eps in
// [-1, 1]. `slack` absorbs the rounding of the form's own bookkeeping
// arithmetic and is treated as an independent deviation. Terms are kept
// sorted by symbol id.
class AffineForm {
 public:
  AffineForm() = default;
  explicit AffineForm(double constant) : center_(constant) {}

  static AffineForm fromInterval(const Interval& iv, AffineContext& ctx);

  double center() const { return center_; }
  double slack() const { return slack_; }
  const std::vector<std::pair<int64_t, double>>& terms() const { return terms_; }

  // Upper bound on sum |term_i| + slack.
  double radiusUp() const;
  Interval hull() const;
  double maxAbsUp() const { return hull().maxAbs(); }

  AffineForm negated() const;
  AffineForm withFresh(double magnitude, AffineContext& ctx) const;

  friend AffineForm addAF(const AffineForm& a, const AffineForm& b);
  friend AffineForm subAF(const AffineForm& a, const AffineForm& b);
  friend AffineForm scaleAF(const AffineForm& a, double s);
  friend AffineForm mulAF(const AffineForm& a, const AffineForm& b, AffineContext& ctx);

 private:
  double center_ = 0.0;
  std::vector<std::pair<int64_t, double>> terms_;
  double slack_ = 0.0;
};

AffineForm addAF(const AffineForm& a, const AffineForm& b);
AffineForm subAF(const AffineForm& a, const AffineForm& b);
AffineForm scaleAF(const AffineForm& a, double s);
AffineForm mulAF(const AffineForm& a, const AffineForm& b, AffineContext& ctx);
AffineForm divAF(const AffineForm& a, const AffineForm& b, AffineContext& ctx);

// a * s for an interval factor s: correlation-preserving scale by mid(s)
// plus a fresh deviation covering rad(s).
AffineForm mulIntervalAF(const AffineForm& a, const Interval& s, AffineContext& ctx);

// Sound range transformer for a univariate op: mean-value linearization
// through the derivative enclosure, with a plain boxing fallback whenever
// that is tighter.
AffineForm linearizeAF(const AffineForm& x, Op op, AffineContext& ctx);

// Same, but with the operand's value range refined by the caller (e.g. by
// intersecting with an interval analysis). xRange must enclose the actual
// values of the operand.
AffineForm linearizeOnRange(const AffineForm& x, const Interval& xRange, Op op, AffineContext& ctx);
AffineForm inverseOnRange(const AffineForm& x, const Interval& xRange, AffineContext& ctx);

using AffineEnv = std::map<std::string, AffineForm>;

AffineForm affineEval(const ExprPtr& e, const AffineEnv& env, AffineContext& ctx);

}  // namespace approxcc
