#pragma once

#include <vector>

#include "cibeam/ci_kernel.hpp"
#include "cibeam/tolerances.hpp"

namespace cibeam {

enum class RowSumClass { kEmptyS, kNonEmptyS };

/// Classifies the kernel by the sign pattern of its row-sum vector: when no
/// entry is negative the dual optimum is a/c and the solver short-circuits.
RowSumClass classify(const CiKernel& kernel);

/// One step of the solver's history, kept only when tracing is requested.
struct IterationTrace {
  std::size_t iteration = 0;
  std::size_t selected = 0;        // index appended this step
  bool accepted = false;           // multipliers stayed non-negative
  std::size_t retract_position = 0;  // 1-based position truncated at (when !accepted)
  std::vector<std::size_t> active;   // active set after the step
  std::vector<std::size_t> counters; // rank counters after the step
  double min_u = 0.0;
  double dual_objective = 0.0;     // u^T V^{-1} u of the current affine state
};

struct IterativeResult {
  RealVector u;
  std::size_t iterations = 0;
  bool converged = false;
  bool fallback = false;  // descent oracle finished the instance
  double objective = 0.0;  // u^T V^{-1} u of the returned u
  std::vector<std::size_t> active_set;  // indices carrying nonzero multipliers
  RealVector multipliers;               // aligned with active_set
  std::vector<IterationTrace> trace;    // empty unless requested
};

/// Iterative closed-form active-set scheme.
///
/// Starting from u = a/c, the solver grows an ordered active set: each step
/// ranks the entries of u ascending, appends the t-th smallest index not yet
/// active, and recomputes all multipliers from the principal block of
/// g = v - a a^T / c in closed form. If a multiplier turns negative the set
/// is truncated at the most negative one and that position's rank counter
/// advances, so the next attempt there picks the next-ranked candidate.
/// Terminates when u is non-negative; the result then satisfies the
/// optimality conditions of the simplex program exactly.
///
/// n_max bounds the number of iterations. With the kUnlimited sentinel a
/// generous internal cap (10 * dim) applies and, should it ever be exhausted,
/// the projected-gradient oracle finishes the instance (fallback flag). An
/// explicit n_max returns the best closed-form state visited so far, which
/// makes the margin non-decreasing in the budget; n_max = 0 always returns
/// the row-sum point a/c.
IterativeResult solve_iterative(const CiKernel& kernel,
                                std::size_t n_max = kUnlimited,
                                bool record_trace = false);

/// Budget-limited entry point for the performance/complexity tradeoff; never
/// throws on exhaustion. Identical to solve_iterative with an explicit cap.
IterativeResult solve_with_budget(const CiKernel& kernel, std::size_t n_max,
                                  bool record_trace = false);

}  // namespace cibeam
