#pragma once

#include <string>
#include <vector>

#include "approxcc/interval.hpp"

namespace approxcc {

// Ordered box: dimension order is fixed by the caller and is part of the
// deterministic subdivision behavior.
using Box = std::vector<std::pair<std::string, Interval>>;

// Rigorous upper bound on max |e| over the box, by branch-and-bound interval
// refinement: repeatedly splits the box with the largest bound along its
// widest dimension (ties: lexicographically first variable name), spending
// at most `budget` boxes. The result never increases with a larger budget
// and always dominates the sampled maximum.
double boundAbs(const ExprPtr& e, const Box& box, int budget = 1024);

}  // namespace approxcc
