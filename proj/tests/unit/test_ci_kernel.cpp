#include <doctest.h>

#include "test_util.hpp"

using namespace cibeam;

TEST_CASE("strict kernel: single user") {
  ComplexMatrix h(1, 2);
  h(0, 0) = {0.6, 0.8};
  h(0, 1) = {1.0, -0.5};
  const double hsq = 0.6 * 0.6 + 0.8 * 0.8 + 1.0 + 0.25;
  ComplexVector s{Complex{1.0, 0.0}};
  CiKernel k = build_kernel_strict(h, s, 1.0);
  CHECK(k.t(0, 0).real() == doctest::Approx(1.0 / hsq).epsilon(1e-12));
  CHECK(k.v(0, 0) == doctest::Approx(k.t(0, 0).real()));
  CHECK(k.a[0] == doctest::Approx(k.c));
  CHECK(std::abs(k.g(0, 0)) < 1e-15);
}

TEST_CASE("strict kernel: identity channel") {
  const std::size_t kk = 4;
  ComplexMatrix h = ComplexMatrix::identity(kk);
  Constellation c = make_constellation(8);
  Rng rng(2);
  SymbolVector sv = draw_symbols(c, kk, rng);
  CiKernel k = build_kernel_strict(h, sv.s, 1.0);
  for (std::size_t i = 0; i < kk; ++i) {
    for (std::size_t j = 0; j < kk; ++j) {
      CHECK(std::abs(k.t(i, j) - (i == j ? Complex{1.0} : Complex{})) < 1e-12);
      CHECK(k.g(i, j) == doctest::Approx((i == j ? 1.0 : 0.0) - 1.0 / kk).epsilon(1e-12));
    }
    CHECK(k.a[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(k.c == doctest::Approx(double(kk)).epsilon(1e-12));
}

TEST_CASE("kernel invariants: row-sum identity, centered rows, symmetry") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = testutil::random_instance(seed, 3 + seed % 4, 8, 8);
    CiKernel k = build_kernel_strict(inst.ctx, inst.sv.s, 1.0);

    RealVector ones = k.v_chol.solve(std::span<const double>(k.a));
    for (double e : ones) CHECK(std::abs(e - 1.0) < 1e-8);

    for (std::size_t i = 0; i < k.dim; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < k.dim; ++j) {
        row += k.g(i, j);
        CHECK(k.t(i, j) == std::conj(k.t(j, i)));
        CHECK(k.v(i, j) == k.v(j, i));
      }
      CHECK(std::abs(row) < 1e-9);
    }
  }
}

TEST_CASE("non-strict kernel: sector map and the 1x1 hand case") {
  // qpsk: tan(theta) = 1, so the map blocks are +/- identity
  auto inst = testutil::random_instance(4, 2, 3, 4);
  CiKernel k = build_kernel_nonstrict(inst.ctx, inst.sv.s, 1.0, std::numbers::pi / 4.0);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const double want_tl = (i == j) ? 1.0 : 0.0;
      CHECK(k.s_map(i, j) == doctest::Approx(want_tl));
      CHECK(k.s_map(i, 2 + j) == doctest::Approx(-want_tl));
      CHECK(k.s_map(2 + i, j) == doctest::Approx(want_tl));
      CHECK(k.s_map(2 + i, 2 + j) == doctest::Approx(want_tl));
    }
  }

  ComplexMatrix h1(1, 1);
  h1(0, 0) = {1.0, 0.0};
  ComplexVector s1{Complex{std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0}};
  CiKernel k1 = build_kernel_nonstrict(h1, s1, 1.0, std::numbers::pi / 4.0);
  CHECK(std::abs(k1.t(0, 0) - Complex{1.0, 0.0}) < 1e-12);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(k1.t_hat(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
      CHECK(k1.v(i, j) == doctest::Approx(i == j ? 0.5 : 0.0));
    }
  }
}

TEST_CASE("non-strict kernel: doubled row-sum identity and total-sum match") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = testutil::random_instance(seed, 4, 6, 8);
    CiKernel ks = build_kernel_strict(inst.ctx, inst.sv.s, 1.0);
    CiKernel kn = build_kernel_nonstrict(inst.ctx, inst.sv.s, 1.0,
                                         inst.constellation.threshold_angle);
    CHECK(kn.dim == 8);
    RealVector ones = kn.v_chol.solve(std::span<const double>(kn.a));
    for (double e : ones) CHECK(std::abs(e - 1.0) < 1e-8);
    // the sector transform preserves the total sum of the form
    CHECK(kn.c == doctest::Approx(ks.c).epsilon(1e-12));
  }
}

TEST_CASE("non-strict kernel rejects bpsk") {
  auto inst = testutil::random_instance(6, 2, 2, 2);
  CHECK_THROWS_AS(
      build_kernel_nonstrict(inst.ctx, inst.sv.s, 1.0, std::numbers::pi / 2.0),
      UnsupportedModulation);
}

TEST_CASE("beamformer_from_dual: row-sum dual point reproduces zf") {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    auto inst = testutil::random_instance(seed, 4, 8);
    CiKernel k = build_kernel_strict(inst.ctx, inst.sv.s, 1.0);
    RealVector u(k.dim);
    for (std::size_t i = 0; i < k.dim; ++i) u[i] = k.a[i] / k.c;
    CiBeamformer ci = beamformer_from_dual(k, 1.0, u);
    const double expect = std::sqrt(1.0 / k.c);
    for (const auto& lam : ci.dual.lambda) {
      CHECK(std::abs(lam - Complex{expect, 0.0}) < 1e-9);
    }
    ZfResult zf = zf_precode(inst.ctx->h, inst.sv.s, 1.0);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < zf.beamformer.x.size(); ++i) {
      num += std::norm(ci.beamformer.x[i] - zf.beamformer.x[i]);
      den += std::norm(zf.beamformer.x[i]);
    }
    CHECK(std::sqrt(num) <= 1e-9 * std::sqrt(den));
    CHECK(ci.dual.t_star == doctest::Approx(1.0 / zf.scaling).epsilon(1e-9));
  }
}

TEST_CASE("beamformer_from_dual: single user gets the full power beam") {
  auto inst = testutil::random_instance(7, 1, 4);
  CiKernel k = build_kernel_strict(inst.ctx, inst.sv.s, 2.0);
  CiBeamformer ci = beamformer_from_dual(k, 2.0, RealVector{1.0});
  double hsq = 0.0;
  for (std::size_t j = 0; j < 4; ++j) hsq += std::norm(inst.ctx->h(0, j));
  CHECK(ci.dual.lambda[0].real() == doctest::Approx(std::sqrt(2.0 * hsq)).epsilon(1e-10));
  // beam is the matched direction h^H scaled
  const Complex ref = ci.beamformer.x[0] / std::conj(inst.ctx->h(0, 0));
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(std::abs(ci.beamformer.x[j] - ref * std::conj(inst.ctx->h(0, j))) < 1e-10);
  }
}

TEST_CASE("reconstruction consistency for arbitrary dual points") {
  Rng rng(99);
  for (std::uint64_t seed = 300; seed < 350; ++seed) {
    const bool nonstrict = seed % 2;
    auto inst = testutil::random_instance(seed, 3 + seed % 3, 8, 8);
    const double p0 = (seed % 5 == 0) ? 3.0 : 1.0;
    CiKernel k = nonstrict
                     ? build_kernel_nonstrict(inst.ctx, inst.sv.s, p0,
                                              inst.constellation.threshold_angle)
                     : build_kernel_strict(inst.ctx, inst.sv.s, p0);
    RealVector u = testutil::random_simplex(rng, k.dim);
    CiBeamformer ci = beamformer_from_dual(k, p0, u);

    const double power = norm2(std::span<const Complex>(ci.beamformer.x));
    CHECK(std::abs(power * power - p0) < 1e-10 * p0);

    ComplexVector r = matvec(inst.ctx->h, ci.beamformer.x);
    for (std::size_t i = 0; i < k.users; ++i) {
      CHECK(std::abs(r[i] - ci.dual.lambda[i] * inst.sv.s[i]) < 1e-9);
    }

    // rank-one reconstruction: every column of W delivers the same vector
    ComplexMatrix w = ci.beamformer.matrix(inst.sv.s);
    for (std::size_t col = 1; col < k.users; ++col) {
      for (std::size_t row = 0; row < w.rows(); ++row) {
        CHECK(std::abs(w(row, col) * inst.sv.s[col] - w(row, 0) * inst.sv.s[0]) < 1e-12);
      }
    }
  }
}

TEST_CASE("optimal duals: sector feasibility, relaxation dominance, zf bound") {
  for (std::uint64_t seed = 400; seed < 440; ++seed) {
    auto inst = testutil::random_instance(seed, 4, 4, 4);
    CiKernel ks = build_kernel_strict(inst.ctx, inst.sv.s, 1.0);
    CiKernel kn = build_kernel_nonstrict(inst.ctx, inst.sv.s, 1.0,
                                         inst.constellation.threshold_angle);
    IterativeResult rs = solve_iterative(ks);
    IterativeResult rn = solve_iterative(kn);
    REQUIRE(rs.converged);
    REQUIRE(rn.converged);
    CiBeamformer bs = beamformer_from_dual(ks, 1.0, rs.u);
    CiBeamformer bn = beamformer_from_dual(kn, 1.0, rn.u);

    const double tan_t = std::tan(inst.constellation.threshold_angle);
    for (const auto& lam : bn.dual.lambda) {
      CHECK((lam.real() - bn.dual.t_star) * tan_t >= std::abs(lam.imag()) - 1e-8);
    }
    CHECK(bn.dual.t_star >= bs.dual.t_star - 1e-9);

    ZfResult zf = zf_precode(inst.ctx->h, inst.sv.s, 1.0);
    CHECK(bs.dual.t_star >= 1.0 / zf.scaling - 1e-9);
    CHECK(bn.dual.t_star >= 1.0 / zf.scaling - 1e-9);
  }
}

TEST_CASE("beamformer_from_dual: validation") {
  auto inst = testutil::random_instance(1, 3, 4);
  CiKernel k = build_kernel_strict(inst.ctx, inst.sv.s, 1.0);
  CHECK_THROWS_AS(beamformer_from_dual(k, 1.0, RealVector{0.5, 0.2, 0.2}), BadParameter);
  CHECK_THROWS_AS(beamformer_from_dual(k, 1.0, RealVector{0.5, 0.5}), BadDimensions);

  CiKernel synth = CiKernel::from_quadratic(RealMatrix::identity(3));
  CHECK_THROWS_AS(beamformer_from_dual(synth, 1.0, RealVector{0.4, 0.3, 0.3}), BadParameter);

  // vanishing quadratic form: a channel with ~zero gain
  ComplexMatrix weak(2, 2);
  weak(0, 0) = {1e-9, 0.0};
  weak(1, 1) = {1e-9, 0.0};
  ComplexVector s{Complex{1.0, 0.0}, Complex{-1.0, 0.0}};
  CiKernel kw = build_kernel_strict(weak, s, 1.0);
  CHECK_THROWS_AS(beamformer_from_dual(kw, 1.0, RealVector{0.5, 0.5}), DegenerateDual);
}
