#pragma once

#include <memory>

#include "cibeam/beamformer.hpp"
#include "cibeam/linalg.hpp"

namespace cibeam {

/// Per-channel precomputation shared by every symbol of one realization:
/// the Gram matrix H H^H, its factorization, and its explicit inverse.
struct ChannelContext {
  ComplexMatrix h;
  ComplexMatrix gram_matrix;
  ComplexMatrix gram_inv;
  ComplexCholesky gram_chol;
};

std::shared_ptr<const ChannelContext> make_channel_context(ComplexMatrix h);

enum class CiMode { kStrict, kNonStrict };

/// Everything the dual solvers need for one (H, s) pair.
///
/// For strict phase rotation the working dimension is n = K and the quadratic
/// form is V = Re(T) with T = diag(s^H) (H H^H)^{-1} diag(s). For the
/// non-strict (constructive-region) case the dimension doubles: the form is
/// the 2K x 2K matrix paired with the sector-constraint map, and the same
/// row-sum machinery applies verbatim.
struct CiKernel {
  CiMode mode = CiMode::kStrict;
  std::size_t users = 0;  // K
  std::size_t dim = 0;    // K (strict) or 2K (non-strict)
  double power_budget = 1.0;

  std::shared_ptr<const ChannelContext> channel;  // null for synthetic kernels
  ComplexVector s;

  ComplexMatrix t;  // K x K, Hermitian positive definite
  RealMatrix v;     // n x n symmetric positive definite quadratic form
  RealVector a;     // row sums of v
  double c = 0.0;   // sum of all entries of v
  RealMatrix g;     // v - a a^T / c; rows sum to zero
  RealCholesky v_chol;

  // non-strict extras
  double threshold_angle = 0.0;  // theta_t
  double tan_theta = 0.0;
  RealMatrix t_hat;   // [Re T, -Im T; Im T, Re T]
  RealMatrix s_map;   // [I, -I/tan; I, I/tan]
  RealCholesky t_hat_chol;

  /// Builds a solver-only kernel straight from a quadratic form; used by the
  /// solver tests to pin hand-constructed cases. No beamformer can be
  /// reconstructed from it (there is no channel behind it).
  static CiKernel from_quadratic(RealMatrix v, CiMode mode = CiMode::kStrict);
};

CiKernel build_kernel_strict(const ComplexMatrix& h, const ComplexVector& s, double p0);
CiKernel build_kernel_strict(std::shared_ptr<const ChannelContext> channel,
                             const ComplexVector& s, double p0);

/// theta_t must lie in (0, pi/2); BPSK (theta_t = pi/2) is rejected because
/// the two sector constraints coincide there.
CiKernel build_kernel_nonstrict(const ComplexMatrix& h, const ComplexVector& s,
                                double p0, double theta_t);
CiKernel build_kernel_nonstrict(std::shared_ptr<const ChannelContext> channel,
                                const ComplexVector& s, double p0, double theta_t);

/// Dual point together with the receive-side quantities it induces.
struct DualSolution {
  RealVector u;         // length n, on the simplex at optimality
  RealVector q;         // multipliers of u >= 0, complementary to u
  double alpha0 = 0.0;  // sqrt(u^T V^{-1} u / (4 p0))
  ComplexVector lambda; // per-user receive scaling, length K (real when strict)
  double t_star = 0.0;  // constructive margin: min_k lambda_k (strict) or
                        // min_k (Re lambda_k - |Im lambda_k| / tan theta_t)
  double objective = 0.0;  // u^T V^{-1} u
};

struct CiBeamformer {
  Beamformer beamformer;
  DualSolution dual;
};

/// Reconstructs the optimal beamformer from a dual vector u:
/// lambda = sqrt(p0 / u^T V^{-1} u) V^{-1} u (strict), and through the
/// sector map for non-strict; then x = H^H (H H^H)^{-1} (lambda .* s).
/// The result satisfies ||x||^2 = p0 and H x = lambda .* s.
CiBeamformer beamformer_from_dual(const CiKernel& kernel, double p0,
                                  const RealVector& u);

}  // namespace cibeam
