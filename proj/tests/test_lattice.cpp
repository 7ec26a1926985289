#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "topochain/lattice.hpp"

using topochain::ComplexMatrix;
using topochain::LatticeParams;

namespace {

constexpr double pi = std::numbers::pi;

LatticeParams base_params() {
  LatticeParams p;
  p.J = 1.0;
  p.delta = 0.0;
  p.Je = 1.0;
  p.DeltaC = 0.0;
  p.L = 4;
  p.theta = 0.0;
  return p;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

}  // namespace

TEST_CASE("couplings_from_angle limiting angles") {
  auto c0 = topochain::couplings_from_angle(1.0, 0.0);
  CHECK(c0.g1 == Catch::Approx(0.0).margin(1e-15));
  CHECK(c0.g2 == Catch::Approx(1.0));

  auto cpi = topochain::couplings_from_angle(1.0, pi);
  CHECK(cpi.g1 == Catch::Approx(1.0));
  CHECK(cpi.g2 == Catch::Approx(0.0).margin(1e-15));

  auto chalf = topochain::couplings_from_angle(2.0, pi / 2.0);
  CHECK(chalf.g1 == Catch::Approx(std::sqrt(2.0)));
  CHECK(chalf.g2 == Catch::Approx(std::sqrt(2.0)));
}

TEST_CASE("coupling pair invariants and angle roundtrip") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  std::uniform_real_distribution<double> mag(0.1, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double g0 = mag(rng), theta = angle(rng);
    auto c = topochain::couplings_from_angle(g0, theta);
    REQUIRE(c.g1 * c.g1 + c.g2 * c.g2 == Catch::Approx(g0 * g0).epsilon(1e-12));
    const double back = topochain::wrap_angle(c.mixing_angle());
    REQUIRE(std::min(std::abs(back - theta), 2.0 * pi - std::abs(back - theta)) < 1e-9);
  }
}

TEST_CASE("couplings_from_flux reference points") {
  auto a = topochain::couplings_from_flux(0.5, 1.0, pi / 2.0, 0.0);
  CHECK(a.g1 == Catch::Approx(0.0).margin(1e-15));
  CHECK(a.g2 == Catch::Approx(1.0));

  auto b = topochain::couplings_from_flux(0.5, 1.0, pi / 4.0, pi / 4.0);
  CHECK(b.g1 == Catch::Approx(std::sqrt(2.0) / 2.0));
  CHECK(b.g2 == Catch::Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("flux parametrization matches angle parametrization") {
  // with f5 = theta/2 and f3 = (pi - theta)/2, cos(f3) = sin(theta/2)
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  std::uniform_real_distribution<double> mag(0.05, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double theta = angle(rng), betaEJ = mag(rng), dpsi0 = mag(rng);
    auto from_flux = topochain::couplings_from_flux(betaEJ, dpsi0,
                                                    (pi - theta) / 2.0, theta / 2.0);
    auto from_angle = topochain::couplings_from_angle(2.0 * betaEJ * dpsi0, theta);
    REQUIRE(from_flux.g1 == Catch::Approx(from_angle.g1).margin(1e-12));
    REQUIRE(from_flux.g2 == Catch::Approx(from_angle.g2).margin(1e-12));
  }
}

TEST_CASE("build_hamiltonian theta = 0") {
  auto h = topochain::build_hamiltonian(base_params(), false);
  const double diag[] = {1.0, -1.0, 1.0, -1.0};
  for (std::size_t i = 0; i < 4; ++i) CHECK(h(i, i).real() == Catch::Approx(diag[i]));
  for (std::size_t i = 0; i + 1 < 4; ++i) {
    CHECK(h(i, i + 1).real() == Catch::Approx(1.0));
    CHECK(h(i + 1, i).real() == Catch::Approx(1.0));
  }
}

TEST_CASE("build_hamiltonian theta = pi/2") {
  auto p = base_params().with_theta(pi / 2.0);
  auto h = topochain::build_hamiltonian(p, false);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::abs(h(i, i)) < 1e-15);
  CHECK(h(0, 1).real() == Catch::Approx(0.5));
  CHECK(h(1, 2).real() == Catch::Approx(1.5));
  CHECK(h(2, 3).real() == Catch::Approx(0.5));
}

TEST_CASE("build_hamiltonian structure: real, tridiagonal, symmetric") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 25; ++trial) {
    LatticeParams p = base_params();
    p.J = u(rng);
    p.delta = u(rng);
    p.Je = std::abs(u(rng)) + 0.1;
    p.theta = u(rng) + 2.0;
    p.DeltaC = u(rng);
    p.L = 10;
    auto h = topochain::build_hamiltonian(p, true);
    for (std::size_t i = 0; i < p.L; ++i) {
      for (std::size_t j = 0; j < p.L; ++j) {
        REQUIRE(h(i, j).imag() == 0.0);
        REQUIRE(h(i, j) == h(j, i));
        if (i > j + 1 || j > i + 1) REQUIRE(h(i, j) == topochain::Complex{0.0, 0.0});
      }
    }
    // hopping sum rule: the sin(theta) modulation cancels in intra + inter
    REQUIRE(h(0, 1).real() + h(1, 2).real() == Catch::Approx(2.0 * p.J).margin(1e-12));
  }
}

TEST_CASE("build_hamiltonian is 2 pi periodic in theta") {
  LatticeParams p = base_params();
  p.delta = 0.3;
  p.theta = 1.234;
  p.L = 8;
  auto a = topochain::build_hamiltonian(p, false);
  auto b = topochain::build_hamiltonian(p.with_theta(p.theta + 2.0 * pi), false);
  CHECK(max_abs_diff(a, b) < 1e-14);
}

TEST_CASE("lattice params validation") {
  LatticeParams p = base_params();
  p.L = 3;
  CHECK_THROWS_AS(p.validate(), topochain::ValidationError);
  p.L = 2;
  CHECK_THROWS_AS(p.validate(), topochain::ValidationError);
  p.L = 4;
  p.Je = 0.0;
  CHECK_THROWS_AS(p.validate(), topochain::ValidationError);
  p.Je = 1.0;
  p.kappa = -0.5;
  CHECK_THROWS_AS(p.validate(), topochain::ValidationError);
  p.kappa = 0.0;
  CHECK_NOTHROW(p.validate());

  p.g0 = 2.0;
  CHECK_THROWS_AS(p.validate(), topochain::ValidationError);  // DeltaQ missing
  p.DeltaQ = 4.0;
  CHECK_NOTHROW(p.validate());  // 4/4 = 1 = Je
  p.DeltaQ = 3.9;
  CHECK_THROWS_AS(p.validate(), topochain::ValidationError);
}
