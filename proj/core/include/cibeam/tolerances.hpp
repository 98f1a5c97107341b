#pragma once

#include <cstddef>

namespace cibeam {

// Numeric thresholds shared by solvers and tests. Solver code and the test
// suite must agree on these, so they live in one place.

/// Factorization pivot floor, relative to trace/n. Pivots at or below this
/// raise NotPositiveDefinite instead of regularizing.
inline constexpr double kPivotEps = 1e-12;

/// Relative residual guaranteed by the triangular solves.
inline constexpr double kSolveEps = 1e-10;

/// Feasibility slack for active-set sign tests: entries of u and of the
/// multiplier vector are treated as non-negative above -kFeasEps.
inline constexpr double kFeasEps = 1e-9;

/// Slack when classifying the row-sum vector: entries above -kNegEntryEps
/// count as non-negative.
inline constexpr double kNegEntryEps = 1e-12;

/// Quadratic forms at or below this are degenerate (no dual scaling exists).
inline constexpr double kDegenerateEps = 1e-14;

/// Exhaustive support enumeration is capped at this dimension.
inline constexpr std::size_t kEnumDimCap = 20;

/// Sentinel for an unbounded iteration budget.
inline constexpr std::size_t kUnlimited = static_cast<std::size_t>(-1);

}  // namespace cibeam
