#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "topochain/bloch.hpp"
#include "topochain/driven.hpp"

using topochain::Complex;
using topochain::ComplexVector;
using topochain::DriveConfig;
using topochain::LatticeParams;

namespace {

constexpr double pi = std::numbers::pi;

LatticeParams chain(double delta, std::size_t l = 10) {
  LatticeParams p;
  p.J = 1.0;
  p.delta = delta;
  p.Je = 1.0;
  p.L = l;
  return p;
}

/// Hoppings switched off: every site responds as an isolated mode.
LatticeParams decoupled(double delta_c) {
  LatticeParams p;
  p.J = 0.0;
  p.delta = 0.0;
  p.Je = 1e-30;
  p.DeltaC = delta_c;
  p.L = 4;
  return p;
}

LatticeParams random_gapped(std::mt19937& rng, std::size_t l) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LatticeParams p;
  p.J = 0.4 + 1.6 * u(rng);
  p.Je = 0.4 + 1.6 * u(rng);
  p.delta = (u(rng) < 0.5) ? (u(rng) - 0.5) * 0.8 * p.Je
                           : std::copysign((1.2 + 0.8 * u(rng)) * p.Je / 2.0, u(rng) - 0.5);
  p.theta = 2.0 * pi * u(rng);
  p.L = l;
  return p;
}

}  // namespace

TEST_CASE("T matrix reference points") {
  auto t0 = topochain::build_T_matrix(chain(0.0, 4));
  const double diag0[] = {1.0, -1.0, 1.0, -1.0};
  for (std::size_t i = 0; i < 4; ++i) CHECK(t0(i, i).real() == Catch::Approx(diag0[i]));
  CHECK(t0(0, 1).real() == Catch::Approx(1.0));
  CHECK(t0(1, 2).real() == Catch::Approx(1.0));
  CHECK(t0(2, 3).real() == Catch::Approx(1.0));

  auto p = chain(0.25, 6).with_theta(pi);
  auto tp = topochain::build_T_matrix(p);
  CHECK(tp(0, 0).real() == Catch::Approx(-1.0));
  CHECK(tp(1, 1).real() == Catch::Approx(1.0));
  CHECK(tp(0, 1).real() == Catch::Approx(p.J1()).margin(1e-12));
  CHECK(tp(1, 2).real() == Catch::Approx(p.J2()).margin(1e-12));
}

TEST_CASE("T matrix equals the open Hamiltonian without detuning, exactly") {
  std::mt19937 rng(314);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    LatticeParams p;
    p.J = u(rng);
    p.delta = u(rng);
    p.Je = std::abs(u(rng)) + 0.05;
    p.theta = u(rng) + 2.0;
    p.DeltaC = u(rng);
    p.L = 8;
    auto t = topochain::build_T_matrix(p);
    auto h = topochain::build_hamiltonian(p, false);
    for (std::size_t i = 0; i < p.L; ++i)
      for (std::size_t j = 0; j < p.L; ++j) REQUIRE(t(i, j) == h(i, j));
  }
}

TEST_CASE("unforced steady state is dark") {
  DriveConfig d;
  d.amplitudes = ComplexVector(10);
  d.kappa = 0.3;
  d.DeltaC = 0.4;
  auto s = topochain::steady_state(chain(0.0), d);
  for (double n : s.photon_numbers) CHECK(n == 0.0);
}

TEST_CASE("decoupled mode responds as a lorentzian") {
  const double delta_c = 0.7, kappa = 0.25;
  const Complex omega{0.1, 0.0};
  auto p = decoupled(delta_c);
  auto d = DriveConfig::single_site(p.L, 0, omega, kappa, delta_c);
  auto s = topochain::steady_state(p, d);
  const Complex expect = -omega / Complex{delta_c, -kappa / 2.0};
  CHECK(std::abs(s.amplitudes[0] - expect) < 1e-12);
  for (std::size_t j = 1; j < p.L; ++j) CHECK(std::abs(s.amplitudes[j]) < 1e-12);
  CHECK(s.photon_numbers[0] == Catch::Approx(std::norm(expect)).epsilon(1e-10));
}

TEST_CASE("steady state is linear in the drive") {
  std::mt19937 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  auto p = chain(0.2);
  for (int trial = 0; trial < 20; ++trial) {
    DriveConfig da, db, dsum;
    da.amplitudes = ComplexVector(p.L);
    db.amplitudes = ComplexVector(p.L);
    dsum.amplitudes = ComplexVector(p.L);
    da.kappa = db.kappa = dsum.kappa = 0.4;
    da.DeltaC = db.DeltaC = dsum.DeltaC = 0.3;
    const Complex wa{g(rng), g(rng)}, wb{g(rng), g(rng)};
    for (std::size_t j = 0; j < p.L; ++j) {
      da.amplitudes[j] = Complex{g(rng), g(rng)};
      db.amplitudes[j] = Complex{g(rng), g(rng)};
      dsum.amplitudes[j] = wa * da.amplitudes[j] + wb * db.amplitudes[j];
    }
    auto sa = topochain::steady_state(p, da);
    auto sb = topochain::steady_state(p, db);
    auto ssum = topochain::steady_state(p, dsum);
    for (std::size_t j = 0; j < p.L; ++j)
      REQUIRE(std::abs(ssum.amplitudes[j] - (wa * sa.amplitudes[j] + wb * sb.amplitudes[j])) <
              1e-10);
  }
}

TEST_CASE("edge drive occupies the left edge resonator most") {
  auto p = chain(0.0).with_theta(pi / 2.0);
  auto d = DriveConfig::single_site(p.L, 0, Complex{0.1, 0.0}, 0.1, 0.5);
  auto s = topochain::steady_state(p, d);
  for (std::size_t j = 1; j < p.L; ++j)
    REQUIRE(s.photon_numbers[0] > s.photon_numbers[j]);
  // envelope decays into the bulk cell by cell
  for (std::size_t cell = 0; cell + 1 < p.L / 2; ++cell) {
    const double here = std::max(s.photon_numbers[2 * cell], s.photon_numbers[2 * cell + 1]);
    const double next =
        std::max(s.photon_numbers[2 * cell + 2], s.photon_numbers[2 * cell + 3]);
    REQUIRE(here > next);
  }
}

TEST_CASE("zero drive evolves to zero trajectory") {
  DriveConfig d;
  d.amplitudes = ComplexVector(10);
  d.kappa = 0.2;
  auto traj = topochain::evolve_expectations(chain(0.0), d, 5.0, 0.01);
  for (const auto& state : traj)
    for (std::size_t j = 0; j < state.size(); ++j) REQUIRE(state[j] == Complex{0.0, 0.0});
}

TEST_CASE("single mode matches the scalar linear-ode closed form") {
  const double delta_c = 0.8, kappa = 0.3, dt = 0.002, t_final = 12.0;
  const Complex omega{0.05, 0.02};
  auto p = decoupled(delta_c);
  auto d = DriveConfig::single_site(p.L, 0, omega, kappa, delta_c);
  auto traj = topochain::evolve_expectations(p, d, t_final, dt);
  const Complex pole{delta_c, -kappa / 2.0};
  for (std::size_t s = 0; s < traj.size(); s += 100) {
    const double t = static_cast<double>(s) * dt;
    const Complex expect =
        -omega / pole * (1.0 - std::exp(Complex{0.0, -delta_c} * t - kappa / 2.0 * t));
    REQUIRE(std::abs(traj[s][0] - expect) < 1e-8);
  }
}

TEST_CASE("trajectory converges to the steady state") {
  auto p = chain(0.0).with_theta(pi / 2.0);
  const double kappa = 0.1;
  auto d = DriveConfig::single_site(p.L, 0, Complex{0.1, 0.0}, kappa, 0.5);
  auto s = topochain::steady_state(p, d);
  auto traj = topochain::evolve_expectations(p, d, 200.0 / kappa, 0.01);
  double dist = 0.0;
  for (std::size_t j = 0; j < p.L; ++j) dist += std::norm(traj.back()[j] - s.amplitudes[j]);
  CHECK(std::sqrt(dist) < 1e-6);
}

TEST_CASE("steady state equals the long-time limit over random configurations") {
  std::mt19937 rng(20240814);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_gapped(rng, 6);
    const double kappa = 0.3 + 1.2 * u(rng);
    DriveConfig d;
    d.amplitudes = ComplexVector(p.L);
    for (std::size_t j = 0; j < p.L; ++j)
      d.amplitudes[j] = Complex{u(rng) - 0.5, u(rng) - 0.5} * 0.2;
    d.kappa = kappa;
    d.DeltaC = u(rng) - 0.5;
    auto s = topochain::steady_state(p, d);
    const double t_final = 40.0 / kappa;
    auto traj = topochain::evolve_expectations(p, d, t_final, 0.008);
    double dist = 0.0;
    for (std::size_t j = 0; j < p.L; ++j)
      dist += std::norm(traj.back()[j] - s.amplitudes[j]);
    REQUIRE(std::sqrt(dist) < 1e-6);
  }
}

TEST_CASE("evolve rejects oversized steps") {
  DriveConfig d;
  d.amplitudes = ComplexVector(10);
  d.kappa = 0.1;
  CHECK_THROWS_AS(topochain::evolve_expectations(chain(0.0), d, 1.0, 0.5),
                  topochain::ValidationError);
}

TEST_CASE("single-mode reflection flips the phase on resonance") {
  // mandated scalar oracle: r = 1 + i kappa / (-i kappa / 2) = -1
  for (double kappa : {0.05, 0.3, 1.0}) {
    const Complex r = topochain::reflection_dissipative(decoupled(0.0), kappa, 0.0);
    REQUIRE(std::abs(r - Complex{-1.0, 0.0}) < 1e-12);
  }
}

TEST_CASE("reflection limits in kappa") {
  auto p = chain(0.15).with_theta(1.1);
  // kappa -> 0: the port decouples and r -> 1
  CHECK(std::abs(topochain::reflection_dissipative(p, 1e-7, 0.3) - Complex{1.0, 0.0}) < 1e-4);
  // kappa -> infinity: overdamped port, r -> -1 with O(1/kappa) series
  double prev = 1e300;
  for (double kappa : {1e2, 1e3, 1e4}) {
    const double dev = std::abs(topochain::reflection_dissipative(p, kappa, 0.3) -
                                Complex{-1.0, 0.0});
    REQUIRE(dev < 10.0 / kappa);
    REQUIRE(dev < prev);
    prev = dev;
  }
}

TEST_CASE("reflection is passive") {
  std::mt19937 rng(55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = random_gapped(rng, (trial % 2) ? 4 : 10);
    const double kappa = 0.05 + 2.0 * u(rng);
    const double delta_c = 2.0 * (u(rng) - 0.5);
    REQUIRE(std::abs(topochain::reflection_dissipative(p, kappa, delta_c)) <=
            1.0 + 1e-10);
  }
}

TEST_CASE("winding distinguishes the phases") {
  auto topo = topochain::reflection_trace(chain(0.0), 0.1, 0.0, 256);
  CHECK(topo.winding == 1);
  CHECK(topo.winding_residual < 1e-3);
  CHECK(topo.max_step < pi);

  auto triv = topochain::reflection_trace(chain(0.6), 0.1, 0.0, 256);
  CHECK(triv.winding == 0);
  CHECK(triv.winding_residual < 1e-3);
}

TEST_CASE("two unit cells keep the winding for all decay rates") {
  for (double kappa : {0.1, 0.7, 1.5}) {
    auto trace = topochain::reflection_trace(chain(0.0, 4), kappa, 0.0, 256);
    REQUIRE(trace.winding == 1);
  }
}

TEST_CASE("winding is invariant across the kappa sweep in the topological phase") {
  std::mt19937 rng(909);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    LatticeParams p = chain((u(rng) - 0.5) * 0.7);
    p.J = 0.6 + u(rng);
    for (double kappa : {0.05, 0.3, 0.8, 1.5}) {
      REQUIRE(topochain::reflection_trace(p, kappa * p.Je, 0.0, 128).winding == 1);
    }
  }
}

TEST_CASE("winding equals the analytic chern number on random sets") {
  std::mt19937 rng(20240815);
  for (int trial = 0; trial < 30; ++trial) {
    auto p = random_gapped(rng, 10);
    const int expect = topochain::chern_analytic(p);
    REQUIRE(topochain::reflection_trace(p, 0.1 * p.Je, 0.0, 128).winding == expect);
    auto p4 = p;
    p4.L = 4;
    REQUIRE(topochain::reflection_trace(p4, 0.1 * p.Je, 0.0, 128).winding == expect);
  }
}

TEST_CASE("photon numbers mirror amplitude moduli") {
  std::mt19937 rng(66);
  std::normal_distribution<double> g(0.0, 0.3);
  auto p = chain(0.1);
  DriveConfig d;
  d.amplitudes = ComplexVector(p.L);
  for (std::size_t j = 0; j < p.L; ++j) d.amplitudes[j] = Complex{g(rng), g(rng)};
  d.kappa = 0.4;
  d.DeltaC = 0.2;
  auto s = topochain::steady_state(p, d);
  for (std::size_t j = 0; j < p.L; ++j)
    REQUIRE(s.photon_numbers[j] ==
            Catch::Approx(std::norm(s.amplitudes[j])).margin(1e-12));
}
