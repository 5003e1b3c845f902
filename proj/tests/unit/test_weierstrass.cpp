#include <doctest.h>

#include "../support/oracles.hpp"
#include "smod/errors.hpp"
#include "smod/weierstrass.hpp"

#include <random>

using namespace smod;

namespace {

/// e1 for Z + Z i, frozen from the theta-function oracle (agrees with the
/// Eisenstein-corrected box sum at |m|,|n| <= 200 to 1e-12).
constexpr double kE1SquareLattice = 6.875185818020372;

double relative_error(Complex a, Complex b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

} // namespace

TEST_CASE("frozen e1 matches the theta oracle") {
  oracle::Theta theta(Complex(0.0, 1.0));
  CHECK(std::abs(theta.e1() - kE1SquareLattice) < 1e-12);
}

TEST_CASE("half-period values of the square lattice") {
  WeierstrassP wp(EllipticCurve({0.0, 1.0}));
  auto e = wp.half_period_values();
  CHECK(std::abs(e[0] - kE1SquareLattice) < 1e-9);
  CHECK(std::abs(e[1] + kE1SquareLattice) < 1e-9);
  CHECK(std::abs(e[2]) < 1e-9);
  CHECK(std::abs(e[0] + e[1] + e[2]) < 1e-9);
  CHECK(std::abs(wp.derivative(0.5).value) < 1e-8);
  CHECK(std::abs(wp.derivative(Complex(0.0, 0.5)).value) < 1e-8);
}

TEST_CASE("poles map to infinity") {
  WeierstrassP wp(EllipticCurve({0.2, 1.1}), 16);
  CHECK(wp.value(0.0).infinite);
  CHECK(wp.value(Complex(1.0, 0.0) + Complex(0.2, 1.1)).infinite);
  CHECK(wp.derivative(Complex(-2.0, 0.0)).infinite);
}

TEST_CASE("p agrees with the theta-function formula on random lattices") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.8, 1.6), unit(0.05, 0.95);
  for (int lattice = 0; lattice < 6; ++lattice) {
    Complex tau(re(rng), im(rng));
    EllipticCurve curve(tau);
    WeierstrassP fast(curve, 12);
    WeierstrassP full(curve);
    oracle::Theta theta(tau);
    for (int i = 0; i < 40; ++i) {
      Complex z = curve.point(unit(rng), unit(rng));
      Complex expected = theta.wp(z);
      CHECK(relative_error(fast.value(z).value, expected) < 1e-9);
      if (i < 5)
        CHECK(relative_error(full.value(z).value, expected) < 1e-9);
    }
  }
}

TEST_CASE("p is even and periodic") {
  EllipticCurve curve({-0.3, 1.2});
  WeierstrassP wp(curve, 12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    Complex z(u(rng), u(rng));
    if (curve.is_lattice_point(z, 1e-3))
      continue;
    Complex p = wp.value(z).value;
    CHECK(relative_error(wp.value(-z).value, p) < 1e-9);
    CHECK(relative_error(wp.value(z + 2.0 - curve.tau()).value, p) < 1e-9);
  }
}

TEST_CASE("p satisfies its differential equation") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  EllipticCurve curve({0.45, 0.95});
  WeierstrassP wp(curve, 12);
  int checked = 0;
  while (checked < 500) {
    Complex z = curve.point(unit(rng), unit(rng));
    if (std::abs(wp.centre(z)) < 0.05)
      continue;
    auto v = wp.evaluate(z);
    Complex p = v.p.value, dp = v.prime.value;
    Complex residual = dp * dp - (4.0 * p * p * p - wp.g2() * p - wp.g3());
    CHECK(std::abs(residual) / (1.0 + std::pow(std::abs(p), 3)) <= 1e-6);
    ++checked;
  }
}

TEST_CASE("invariants of the square lattice") {
  WeierstrassP wp(EllipticCurve({0.0, 1.0}), 8);
  // g3 vanishes by the fourfold symmetry; g2 = 4 e1^2 when e3 = 0
  CHECK(std::abs(wp.g3()) < 1e-9);
  CHECK(std::abs(wp.g2() - 4.0 * kE1SquareLattice * kE1SquareLattice) < 1e-8);
  CHECK_THROWS_AS(WeierstrassP(EllipticCurve({0.0, 1.0}), 3), ModelError);
  CHECK_THROWS_AS(wp.eisenstein(1), DomainError);
}

TEST_CASE("inverse of p") {
  EllipticCurve curve({0.1, 1.05});
  WeierstrassInverse inverse(curve, 10);
  const WeierstrassP &wp = inverse.p();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    Complex z = curve.point(unit(rng), unit(rng));
    P1Point w = wp.value(z);
    Complex u = inverse.solve(w);
    CHECK(chordal_distance(wp.value(u), w) < 1e-9);
    // the solution is +-z modulo the lattice
    bool plus = curve.is_lattice_point(u - z, 1e-6);
    bool minus = curve.is_lattice_point(u + z, 1e-6);
    CHECK((plus || minus));
  }
  CHECK(curve.is_lattice_point(inverse.solve(P1Point::infinity())));
  auto e = wp.half_period_values();
  Complex half = inverse.solve(P1Point::finite(e[0]));
  CHECK(curve.is_lattice_point(2.0 * half, 1e-6));
  CHECK(std::abs(wp.value(half).value - e[0]) < 1e-8);
}
