#include <doctest.h>

#include "test_util.hpp"

using namespace cibeam;

TEST_CASE("zf: identity channel") {
  const std::size_t k = 4;
  ComplexMatrix h = ComplexMatrix::identity(k);
  Constellation c = make_constellation(4);
  Rng rng(8);
  SymbolVector sv = draw_symbols(c, k, rng);
  ZfResult zf = zf_precode(h, sv.s, 1.0);
  CHECK(zf.scaling == doctest::Approx(std::sqrt(4.0)).epsilon(1e-12));
  for (std::size_t i = 0; i < k; ++i) {
    CHECK(std::abs(zf.beamformer.x[i] - sv.s[i] / 2.0) < 1e-12);
  }
}

TEST_CASE("zf: symbol-level power normalization") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto inst = testutil::random_instance(seed, 2 + seed % 7, 8);
    const double p0 = (seed % 3 == 0) ? 2.5 : 1.0;
    ZfResult zf = zf_precode(inst.ctx->h, inst.sv.s, p0);
    const double power = norm2(std::span<const Complex>(zf.beamformer.x));
    CHECK(std::abs(power * power - p0) < 1e-10 * p0);
  }
}

TEST_CASE("zf: scaling factor equals the inverse-Gram quadratic form") {
  auto inst = testutil::random_instance(17, 2, 3);
  const double p0 = 1.0;
  ZfResult zf = zf_precode(inst.ctx->h, inst.sv.s, p0);
  // independent evaluation of sum_{m,n} C(m,n) s_m^H s_n
  ComplexMatrix c_inv = hermitian_solve(gram(inst.ctx->h), ComplexMatrix::identity(2));
  Complex quad{};
  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t n = 0; n < 2; ++n) {
      quad += std::conj(inst.sv.s[m]) * c_inv(m, n) * inst.sv.s[n];
    }
  }
  CHECK(zf.scaling * zf.scaling * p0 == doctest::Approx(quad.real()).epsilon(1e-10));
  CHECK(std::abs(quad.imag()) < 1e-12);
}

TEST_CASE("zf: noiseless receive has no cross-user interference") {
  for (std::uint64_t seed = 40; seed < 60; ++seed) {
    auto inst = testutil::random_instance(seed, 5, 7);
    ZfResult zf = zf_precode(inst.ctx->h, inst.sv.s, 1.0);
    ComplexVector r = matvec(inst.ctx->h, zf.beamformer.x);
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(std::abs(r[k] - inst.sv.s[k] / zf.scaling) < 1e-10);
    }
  }
}

TEST_CASE("zf: common phase rotation of the data rotates the signal") {
  auto inst = testutil::random_instance(3, 4, 5);
  ZfResult base = zf_precode(inst.ctx->h, inst.sv.s, 1.0);
  const Complex phase = std::polar(1.0, 0.7);
  ComplexVector rotated = inst.sv.s;
  for (auto& e : rotated) e *= phase;
  ZfResult rot = zf_precode(inst.ctx->h, rotated, 1.0);
  for (std::size_t i = 0; i < rot.beamformer.x.size(); ++i) {
    CHECK(std::abs(rot.beamformer.x[i] - phase * base.beamformer.x[i]) < 1e-12);
  }
}

TEST_CASE("rzf: vanishing regularizer matches zf") {
  auto inst = testutil::random_instance(21, 4, 6);
  ZfResult zf = zf_precode(inst.ctx->h, inst.sv.s, 1.0);
  Beamformer rzf = rzf_precode(inst.ctx->h, inst.sv.s, 1.0, 1e12);
  for (std::size_t i = 0; i < rzf.x.size(); ++i) {
    CHECK(std::abs(rzf.x[i] - zf.beamformer.x[i]) < 1e-9);
  }
}

TEST_CASE("rzf: identity channel absorbs the regularizer into the normalization") {
  ComplexMatrix h = ComplexMatrix::identity(2);
  Constellation c = make_constellation(4);
  Rng rng(12);
  SymbolVector sv = draw_symbols(c, 2, rng);
  Beamformer rzf = rzf_precode(h, sv.s, 1.0, 2.0);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::abs(rzf.x[i] - sv.s[i] / std::numbers::sqrt2) < 1e-12);
  }
}

TEST_CASE("rzf: power normalization and parameter validation") {
  for (std::uint64_t seed = 60; seed < 80; ++seed) {
    auto inst = testutil::random_instance(seed, 4, 4);
    Beamformer rzf = rzf_precode(inst.ctx->h, inst.sv.s, 1.0, 10.0);
    const double power = norm2(std::span<const Complex>(rzf.x));
    CHECK(std::abs(power * power - 1.0) < 1e-10);
  }
  auto inst = testutil::random_instance(1, 2, 2);
  CHECK_THROWS_AS(rzf_precode(inst.ctx->h, inst.sv.s, 1.0, 0.0), BadParameter);
  CHECK_THROWS_AS(rzf_precode(inst.ctx->h, inst.sv.s, 1.0, -3.0), BadParameter);
  CHECK_THROWS_AS(zf_precode(inst.ctx->h, inst.sv.s, 0.0), BadParameter);
}
