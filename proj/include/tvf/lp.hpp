#pragma once

#include <optional>
#include <vector>

#include "tvf/rational.hpp"

namespace tvf {

/// Rows of A, each of the same length.
using RationalMatrix = std::vector<std::vector<Rational>>;

/// Some x >= 0 with A x = b, or nothing if the system is infeasible. Exact
/// phase-1 simplex with Bland's anti-cycling rule.
std::optional<std::vector<Rational>> nonnegative_solution(const RationalMatrix& a, const std::vector<Rational>& b);

} // namespace tvf
