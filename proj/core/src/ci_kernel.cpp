#include "cibeam/ci_kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

namespace cibeam {

namespace {

void check_unit_modulus(const ComplexVector& s) {
  for (const auto& e : s) {
    if (std::abs(std::abs(e) - 1.0) > 1e-9) {
      throw BadParameter("ci kernel: symbol entries must be unit-modulus");
    }
  }
}

// Fills a, c, g and the factorization from an already-built v.
void finish_kernel(CiKernel& k) {
  const std::size_t n = k.v.rows();
  k.dim = n;
  k.a.assign(n, 0.0);
  k.c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += k.v(i, j);
    k.a[i] = row;
    k.c += row;
  }
  if (!(k.c > 0.0)) {
    throw NotPositiveDefinite("ci kernel: total sum of the quadratic form is not positive");
  }
  k.g = RealMatrix(n, n);
  const double inv_c = 1.0 / k.c;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      k.g(i, j) = k.v(i, j) - k.a[i] * k.a[j] * inv_c;
    }
  }
  k.v_chol = RealCholesky(k.v);
}

// T = diag(s^H) (H H^H)^{-1} diag(s), Hermitian by construction.
ComplexMatrix rotated_inverse_gram(const ComplexMatrix& gram_inv, const ComplexVector& s) {
  const std::size_t k = s.size();
  ComplexMatrix t(k, k);
  for (std::size_t m = 0; m < k; ++m) {
    t(m, m) = Complex{(std::conj(s[m]) * gram_inv(m, m) * s[m]).real(), 0.0};
    for (std::size_t n = m + 1; n < k; ++n) {
      const Complex val = std::conj(s[m]) * gram_inv(m, n) * s[n];
      t(m, n) = val;
      t(n, m) = std::conj(val);
    }
  }
  return t;
}

}  // namespace

std::shared_ptr<const ChannelContext> make_channel_context(ComplexMatrix h) {
  auto ctx = std::make_shared<ChannelContext>();
  ctx->h = std::move(h);
  ctx->gram_matrix = gram(ctx->h);
  ctx->gram_chol = ComplexCholesky(ctx->gram_matrix);
  ComplexMatrix inv = ctx->gram_chol.solve(ComplexMatrix::identity(ctx->h.rows()));
  // exact conjugate symmetrization so downstream real parts are symmetric
  for (std::size_t i = 0; i < inv.rows(); ++i) {
    inv(i, i) = Complex{inv(i, i).real(), 0.0};
    for (std::size_t j = i + 1; j < inv.cols(); ++j) {
      const Complex avg = 0.5 * (inv(i, j) + std::conj(inv(j, i)));
      inv(i, j) = avg;
      inv(j, i) = std::conj(avg);
    }
  }
  ctx->gram_inv = std::move(inv);
  return ctx;
}

CiKernel CiKernel::from_quadratic(RealMatrix v, CiMode mode) {
  if (v.rows() != v.cols()) throw BadDimensions("synthetic kernel: v must be square");
  // exact symmetrization
  for (std::size_t i = 0; i < v.rows(); ++i) {
    for (std::size_t j = i + 1; j < v.cols(); ++j) {
      const double avg = 0.5 * (v(i, j) + v(j, i));
      v(i, j) = avg;
      v(j, i) = avg;
    }
  }
  CiKernel k;
  k.mode = mode;
  k.users = (mode == CiMode::kStrict) ? v.rows() : v.rows() / 2;
  k.v = std::move(v);
  finish_kernel(k);
  return k;
}

CiKernel build_kernel_strict(std::shared_ptr<const ChannelContext> channel,
                             const ComplexVector& s, double p0) {
  if (!channel) throw BadParameter("ci kernel: null channel context");
  if (s.size() != channel->h.rows()) throw BadDimensions("ci kernel: symbol count must equal K");
  if (p0 <= 0.0) throw BadParameter("ci kernel: p0 must be > 0");
  check_unit_modulus(s);

  CiKernel k;
  k.mode = CiMode::kStrict;
  k.users = s.size();
  k.power_budget = p0;
  k.channel = std::move(channel);
  k.s = s;
  k.t = rotated_inverse_gram(k.channel->gram_inv, s);
  k.v = RealMatrix(k.users, k.users);
  for (std::size_t i = 0; i < k.users; ++i) {
    for (std::size_t j = 0; j < k.users; ++j) k.v(i, j) = k.t(i, j).real();
  }
  finish_kernel(k);
  return k;
}

CiKernel build_kernel_strict(const ComplexMatrix& h, const ComplexVector& s, double p0) {
  return build_kernel_strict(make_channel_context(h), s, p0);
}

CiKernel build_kernel_nonstrict(std::shared_ptr<const ChannelContext> channel,
                                const ComplexVector& s, double p0, double theta_t) {
  if (!channel) throw BadParameter("ci kernel: null channel context");
  if (s.size() != channel->h.rows()) throw BadDimensions("ci kernel: symbol count must equal K");
  if (p0 <= 0.0) throw BadParameter("ci kernel: p0 must be > 0");
  if (!(theta_t > 0.0) || theta_t >= std::numbers::pi / 2.0 - 1e-12) {
    throw UnsupportedModulation(
        "non-strict rotation needs a threshold angle in (0, pi/2); "
        "BPSK collapses the two sector constraints (got theta_t = " +
        std::to_string(theta_t) + ")");
  }
  check_unit_modulus(s);

  CiKernel k;
  k.mode = CiMode::kNonStrict;
  k.users = s.size();
  k.power_budget = p0;
  k.channel = std::move(channel);
  k.s = s;
  k.threshold_angle = theta_t;
  k.tan_theta = std::tan(theta_t);
  k.t = rotated_inverse_gram(k.channel->gram_inv, s);

  const std::size_t kk = k.users;
  const std::size_t n = 2 * kk;
  const double tau = k.tan_theta;

  // t_hat = [Re T, -Im T; Im T, Re T]; symmetric since Im T is antisymmetric.
  k.t_hat = RealMatrix(n, n);
  for (std::size_t i = 0; i < kk; ++i) {
    for (std::size_t j = 0; j < kk; ++j) {
      const double re = k.t(i, j).real();
      const double im = k.t(i, j).imag();
      k.t_hat(i, j) = re;
      k.t_hat(kk + i, kk + j) = re;
      k.t_hat(i, kk + j) = -im;
      k.t_hat(kk + i, j) = im;
    }
  }

  // Sector-constraint map and its inverse are block-structured, so the
  // doubled quadratic form has the closed-form blocks
  //   diag blocks: (1 + tau^2)/4 * Re T
  //   off blocks : ((1 - tau^2) Re T -/+ 2 tau Im T) / 4
  // which keeps the per-symbol cost at O(K^2).
  k.s_map = RealMatrix(n, n);
  const double inv_tau = 1.0 / tau;
  for (std::size_t i = 0; i < kk; ++i) {
    k.s_map(i, i) = 1.0;
    k.s_map(i, kk + i) = -inv_tau;
    k.s_map(kk + i, i) = 1.0;
    k.s_map(kk + i, kk + i) = inv_tau;
  }

  k.v = RealMatrix(n, n);
  const double diag_w = 0.25 * (1.0 + tau * tau);
  const double off_w = 0.25 * (1.0 - tau * tau);
  const double skew_w = 0.5 * tau;
  for (std::size_t i = 0; i < kk; ++i) {
    for (std::size_t j = 0; j < kk; ++j) {
      const double re = k.t(i, j).real();
      const double im = k.t(i, j).imag();
      k.v(i, j) = diag_w * re;
      k.v(kk + i, kk + j) = diag_w * re;
      const double cross = off_w * re - skew_w * im;
      k.v(i, kk + j) = cross;
      k.v(kk + j, i) = cross;
    }
  }
  finish_kernel(k);
  k.t_hat_chol = RealCholesky(k.t_hat);
  return k;
}

CiKernel build_kernel_nonstrict(const ComplexMatrix& h, const ComplexVector& s,
                                double p0, double theta_t) {
  return build_kernel_nonstrict(make_channel_context(h), s, p0, theta_t);
}

CiBeamformer beamformer_from_dual(const CiKernel& kernel, double p0,
                                  const RealVector& u) {
  if (!kernel.channel) {
    throw BadParameter("beamformer_from_dual: kernel has no channel behind it");
  }
  if (u.size() != kernel.dim) throw BadDimensions("beamformer_from_dual: dual length mismatch");
  if (p0 <= 0.0) throw BadParameter("beamformer_from_dual: p0 must be > 0");
  double total = 0.0;
  for (double e : u) total += e;
  if (std::abs(total - 1.0) > 1e-9) {
    throw BadParameter("beamformer_from_dual: dual vector must sum to one");
  }

  const std::size_t kk = kernel.users;
  DualSolution dual;
  dual.u = u;
  dual.lambda.resize(kk);

  RealVector grad;  // 2 V^{-1} u, for the multiplier reconstruction
  if (kernel.mode == CiMode::kStrict) {
    RealVector w = kernel.v_chol.solve(std::span<const double>(u));
    const double omega = dot(u, w);
    if (omega <= kDegenerateEps) throw DegenerateDual("beamformer_from_dual: u^T V^{-1} u vanishes");
    const double scale = std::sqrt(p0 / omega);
    for (std::size_t i = 0; i < kk; ++i) dual.lambda[i] = Complex{scale * w[i], 0.0};
    dual.objective = omega;
    dual.alpha0 = std::sqrt(omega / (4.0 * p0));
    dual.t_star = dual.lambda[0].real();
    for (std::size_t i = 1; i < kk; ++i) dual.t_star = std::min(dual.t_star, dual.lambda[i].real());
    grad.resize(kk);
    for (std::size_t i = 0; i < kk; ++i) grad[i] = 2.0 * w[i];
  } else {
    const std::size_t n = kernel.dim;
    const double inv_tau = 1.0 / kernel.tan_theta;
    RealVector z(n);  // S^T u
    for (std::size_t i = 0; i < kk; ++i) {
      z[i] = u[i] + u[kk + i];
      z[kk + i] = inv_tau * (u[kk + i] - u[i]);
    }
    RealVector w = kernel.t_hat_chol.solve(std::span<const double>(z));
    const double omega = dot(z, w);
    if (omega <= kDegenerateEps) throw DegenerateDual("beamformer_from_dual: dual quadratic form vanishes");
    const double scale = std::sqrt(p0 / omega);
    dual.objective = omega;
    dual.alpha0 = std::sqrt(omega / (4.0 * p0));
    for (std::size_t i = 0; i < kk; ++i) {
      dual.lambda[i] = Complex{scale * w[i], scale * w[kk + i]};
    }
    dual.t_star = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kk; ++i) {
      const double margin = dual.lambda[i].real() - std::abs(dual.lambda[i].imag()) * inv_tau;
      dual.t_star = std::min(dual.t_star, margin);
    }
    grad.resize(n);
    for (std::size_t i = 0; i < kk; ++i) {
      grad[i] = 2.0 * (w[i] - inv_tau * w[kk + i]);
      grad[kk + i] = 2.0 * (w[i] + inv_tau * w[kk + i]);
    }
  }

  const double q0 = -dot(u, grad);
  dual.q.resize(kernel.dim);
  for (std::size_t i = 0; i < kernel.dim; ++i) dual.q[i] = grad[i] + q0;

  ComplexVector y(kk);
  for (std::size_t i = 0; i < kk; ++i) y[i] = dual.lambda[i] * kernel.s[i];
  ComplexVector mid = kernel.channel->gram_chol.solve(std::span<const Complex>(y));
  ComplexVector x = adjoint_matvec(kernel.channel->h, mid);

  return CiBeamformer{Beamformer{std::move(x), p0}, std::move(dual)};
}

}  // namespace cibeam
