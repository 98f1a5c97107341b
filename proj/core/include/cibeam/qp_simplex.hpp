#pragma once

#include <utility>

#include "cibeam/linalg.hpp"

namespace cibeam {

/// min u^T V^{-1} u over the probability simplex. The quadratic form is held
/// through V's factorization; applying it is a solve plus an inner product.
class SimplexQp {
 public:
  explicit SimplexQp(const RealMatrix& v);
  /// Borrows an already-computed factorization (e.g. the kernel's).
  explicit SimplexQp(RealCholesky chol) : chol_(std::move(chol)) {}

  std::size_t dim() const { return chol_.dim(); }

  /// V^{-1} x.
  RealVector apply_form(const RealVector& x) const;
  /// u^T V^{-1} u.
  double objective(const RealVector& u) const;

 private:
  RealCholesky chol_;
};

struct SimplexSolution {
  RealVector u;
  double objective = 0.0;
  std::size_t iterations = 0;   // descent steps (0 for the enumerator)
  double residual = 0.0;        // final projected-gradient norm (descent only)
  std::size_t supports_tried = 0;  // enumerator bookkeeping
};

/// Exhaustive support enumeration, exact for dim <= kEnumDimCap. For each
/// candidate support the equality-constrained restriction has the closed form
/// u_F = w / sum(w) with w = A_FF^{-1} 1, objective 1 / sum(w). Supports are
/// scanned from largest cardinality down and the scan stops at the first
/// candidate that is both primal and dual feasible, which by convexity is the
/// global optimum; if none certifies, the best primal-feasible candidate wins.
SimplexSolution solve_active_set_enum(const SimplexQp& qp);

/// Projected-gradient descent with exact sort-and-threshold projection.
/// Terminates when the projected-gradient norm drops to tol; throws
/// NotConverged past max_iter.
SimplexSolution solve_projected_gradient(const SimplexQp& qp, double tol = 1e-10,
                                         std::size_t max_iter = 100000);

/// Euclidean projection onto {u >= 0, sum u = 1}; ties in the threshold sort
/// break by index so results are deterministic.
RealVector project_simplex(RealVector v);

}  // namespace cibeam
