#include <doctest.h>

#include "test_util.hpp"

using namespace cibeam;

TEST_CASE("project_simplex: hand cases and invariants") {
  RealVector a = project_simplex({2.0, 0.0});
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(a[1] == doctest::Approx(0.0));

  RealVector b = project_simplex({0.3, 0.3});
  CHECK(b[0] == doctest::Approx(0.5));
  CHECK(b[1] == doctest::Approx(0.5));

  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    RealVector v(5);
    for (auto& e : v) e = 3.0 * rng.normal();
    RealVector p = project_simplex(v);
    double total = 0.0;
    for (double e : p) {
      CHECK(e >= 0.0);
      total += e;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("enumeration: symmetric and diagonal closed forms") {
  SimplexQp unit(RealMatrix::identity(4));
  SimplexSolution sol = solve_active_set_enum(unit);
  for (double e : sol.u) CHECK(e == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(0.25).epsilon(1e-12));

  // form diag(1, 4) comes from v = diag(1, 1/4); minimizer [4/5, 1/5]
  RealMatrix v(2, 2);
  v(0, 0) = 1.0;
  v(1, 1) = 0.25;
  SimplexSolution d = solve_active_set_enum(SimplexQp(v));
  CHECK(d.u[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(d.u[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(d.objective == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("enumeration: non-negative row sums give u* = a/c") {
  ComplexMatrix h = ComplexMatrix::identity(3);
  Constellation c = make_constellation(4);
  Rng rng(14);
  SymbolVector sv = draw_symbols(c, 3, rng);
  CiKernel k = build_kernel_strict(h, sv.s, 1.0);
  SimplexSolution sol = solve_active_set_enum(SimplexQp(k.v));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(sol.u[i] == doctest::Approx(k.a[i] / k.c).epsilon(1e-10));
  }

  // a randomly found kernel with all row sums non-negative
  for (std::uint64_t seed = 0;; ++seed) {
    auto inst = testutil::random_instance(seed, 4, 8);
    CiKernel kern = build_kernel_strict(inst.ctx, inst.sv.s, 1.0);
    bool nonneg = true;
    for (double e : kern.a) nonneg = nonneg && e >= 0.0;
    if (!nonneg) continue;
    SimplexSolution s2 = solve_active_set_enum(SimplexQp(kern.v));
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(s2.u[i] == doctest::Approx(kern.a[i] / kern.c).epsilon(1e-9));
    }
    break;
  }
}

TEST_CASE("cross-oracle agreement and optimality certificates") {
  for (std::uint64_t seed = 500; seed < 520; ++seed) {
    auto inst = testutil::random_instance(seed, 4, 4, 4);
    CiKernel k = build_kernel_strict(inst.ctx, inst.sv.s, 1.0);
    SimplexQp qp(k.v);
    SimplexSolution enumerated = solve_active_set_enum(qp);
    SimplexSolution descended = solve_projected_gradient(qp);
    CHECK(testutil::rel_gap(descended.objective, enumerated.objective) < 1e-8);

    for (const auto& sol : {enumerated, descended}) {
      double total = 0.0;
      for (double e : sol.u) {
        CHECK(e >= -1e-12);
        total += e;
      }
      CHECK(std::abs(total - 1.0) <= 1e-10);

      // stationarity: the form gradient is constant on the support and no
      // smaller off it
      RealVector grad = qp.apply_form(sol.u);
      const double nu = 2.0 * sol.objective;
      for (std::size_t i = 0; i < sol.u.size(); ++i) {
        if (sol.u[i] > 1e-9) {
          CHECK(std::abs(2.0 * grad[i] - nu) < 1e-8);
        } else {
          CHECK(2.0 * grad[i] >= nu - 1e-8);
        }
      }
    }
  }
}

TEST_CASE("cross-oracle agreement on the doubled problem") {
  for (std::uint64_t seed = 530; seed < 534; ++seed) {
    auto inst = testutil::random_instance(seed, 8, 8, 4);
    CiKernel k = build_kernel_nonstrict(inst.ctx, inst.sv.s, 1.0,
                                        inst.constellation.threshold_angle);
    SimplexQp qp(k.v);
    SimplexSolution enumerated = solve_active_set_enum(qp);
    SimplexSolution descended = solve_projected_gradient(qp);
    CHECK(testutil::rel_gap(descended.objective, enumerated.objective) < 1e-8);
  }
}

TEST_CASE("dual value consistency with the power scaling") {
  auto inst = testutil::random_instance(77, 5, 6, 8);
  CiKernel k = build_kernel_strict(inst.ctx, inst.sv.s, 1.0);
  const double p0 = 2.0;
  SimplexSolution sol = solve_active_set_enum(SimplexQp(k.v));
  const double alpha0 = std::sqrt(sol.objective / (4.0 * p0));
  // max of the dual equals -sqrt(p0 * objective); evaluating the saddle
  // expression at alpha0 must agree
  const double saddle = -(sol.objective / (4.0 * alpha0) + alpha0 * p0);
  CHECK(saddle == doctest::Approx(-std::sqrt(p0 * sol.objective)).epsilon(1e-12));

  CiBeamformer bf = beamformer_from_dual(k, p0, sol.u);
  CHECK(bf.dual.alpha0 == doctest::Approx(alpha0).epsilon(1e-10));
  CHECK(bf.dual.t_star == doctest::Approx(std::sqrt(p0 * sol.objective)).epsilon(1e-8));
}

TEST_CASE("solver guards") {
  CHECK_THROWS_AS(solve_active_set_enum(SimplexQp(RealMatrix::identity(21))), TooLarge);
  CHECK_NOTHROW(solve_active_set_enum(SimplexQp(RealMatrix::identity(8))));

  auto inst = testutil::random_instance(9, 6, 6, 4);
  CiKernel k = build_kernel_strict(inst.ctx, inst.sv.s, 1.0);
  SimplexQp hard(k.v);
  CHECK_THROWS_AS(solve_projected_gradient(hard, 1e-14, 2), NotConverged);
  try {
    solve_projected_gradient(hard, 1e-14, 2);
  } catch (const NotConverged& e) {
    CHECK(e.final_residual > 0.0);
  }
  CHECK_THROWS_AS(solve_projected_gradient(hard, 0.0), BadParameter);

  SimplexQp qp(RealMatrix::identity(6));
  SimplexSolution sol = solve_projected_gradient(qp);
  for (double e : sol.u) CHECK(e == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
}
