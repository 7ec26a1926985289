#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "topochain/errors.hpp"
#include "topochain/lattice.hpp"
#include "topochain/linalg.hpp"
#include "topochain/trace.hpp"

namespace topochain {

/// External drive: one complex amplitude per resonator, plus the probe
/// context (uniform decay and detuning) it is applied under.
struct DriveConfig {
  ComplexVector amplitudes;
  double kappa = 0.0;
  double DeltaC = 0.0;

  static DriveConfig single_site(std::size_t l, std::size_t site, Complex amp,
                                 double kappa, double delta_c) {
    DriveConfig d;
    d.amplitudes = ComplexVector(l);
    if (site >= l) throw ValidationError("DriveConfig: drive site out of range");
    d.amplitudes[site] = amp;
    d.kappa = kappa;
    d.DeltaC = delta_c;
    return d;
  }
};

/// Steady-state field expectations <a_j> and occupations |<a_j>|^2.
struct SteadyState {
  ComplexVector amplitudes;
  std::vector<double> photon_numbers;
};

/// Coupling matrix T of the first-moment equation of motion. Matches the
/// open-boundary Hamiltonian without detuning entry for entry; built here
/// from its own element definitions so the identity stays checkable.
inline ComplexMatrix build_T_matrix(const LatticeParams& p) {
  p.validate();
  const double s = std::sin(p.theta), c = std::cos(p.theta);
  ComplexMatrix t(p.L, p.L);
  for (std::size_t cell = 0; 2 * cell < p.L; ++cell) {
    const std::size_t a = 2 * cell, b = 2 * cell + 1;
    t(a, a) = p.Je * c;
    t(b, b) = -p.Je * c;
    t(a, b) = p.J1() - p.Je * s / 2.0;
    t(b, a) = t(a, b);
    if (cell > 0) {
      const std::size_t prev_b = 2 * cell - 1;
      t(a, prev_b) = p.J2() + p.Je * s / 2.0;
      t(prev_b, a) = t(a, prev_b);
    }
  }
  return t;
}

namespace detail {

inline ComplexMatrix response_matrix(const LatticeParams& p, double kappa,
                                     double delta_c) {
  ComplexMatrix m = build_T_matrix(p);
  for (std::size_t j = 0; j < p.L; ++j) m(j, j) += Complex{delta_c, -kappa / 2.0};
  return m;
}

}  // namespace detail

/// Fixed point of the first-moment dynamics:
/// (DeltaC + T - i kappa/2) <a> = -Omega.
inline SteadyState steady_state(const LatticeParams& p, const DriveConfig& d) {
  p.validate();
  if (d.amplitudes.size() != p.L)
    throw ValidationError("steady_state: drive length must equal L");
  if (d.kappa < 0.0) throw ValidationError("steady_state: kappa must be >= 0");
  ComplexVector rhs(p.L);
  for (std::size_t j = 0; j < p.L; ++j) rhs[j] = -d.amplitudes[j];
  SteadyState out;
  try {
    out.amplitudes = solve_linear(detail::response_matrix(p, d.kappa, d.DeltaC), rhs);
  } catch (const NumericalError&) {
    throw NumericalError("steady_state: undamped resonance (kappa = 0 on an eigenmode)");
  }
  out.photon_numbers.resize(p.L);
  for (std::size_t j = 0; j < p.L; ++j)
    out.photon_numbers[j] = std::norm(out.amplitudes[j]);
  return out;
}

/// Classical RK4 integration of
/// d<a>/dt = -i (DeltaC + T) <a> - (kappa/2) <a> - i Omega from <a>(0) = 0.
/// Returns the trajectory including the initial state.
inline std::vector<ComplexVector> evolve_expectations(const LatticeParams& p,
                                                      const DriveConfig& d,
                                                      double t_final, double dt) {
  p.validate();
  if (d.amplitudes.size() != p.L)
    throw ValidationError("evolve_expectations: drive length must equal L");
  const ComplexMatrix t_matrix = build_T_matrix(p);
  const double scale = t_matrix.frobenius_norm() + d.kappa + std::abs(d.DeltaC);
  if (!(dt > 0.0) || dt >= 0.1 / scale)
    throw ValidationError("evolve_expectations: dt must satisfy dt < 0.1/(||T|| + kappa + |DeltaC|) = " +
                          std::to_string(0.1 / scale));

  auto rhs = [&](const ComplexVector& a) {
    ComplexVector ta = t_matrix.multiply(a);
    ComplexVector out(p.L);
    const Complex damp{-d.kappa / 2.0, -d.DeltaC};
    for (std::size_t j = 0; j < p.L; ++j)
      out[j] = Complex{0.0, -1.0} * ta[j] + damp * a[j] + Complex{0.0, -1.0} * d.amplitudes[j];
    return out;
  };

  const std::size_t steps = static_cast<std::size_t>(std::ceil(t_final / dt));
  std::vector<ComplexVector> trajectory;
  trajectory.reserve(steps + 1);
  ComplexVector a(p.L);
  trajectory.push_back(a);
  for (std::size_t s = 0; s < steps; ++s) {
    const ComplexVector k1 = rhs(a);
    ComplexVector tmp(p.L);
    for (std::size_t j = 0; j < p.L; ++j) tmp[j] = a[j] + 0.5 * dt * k1[j];
    const ComplexVector k2 = rhs(tmp);
    for (std::size_t j = 0; j < p.L; ++j) tmp[j] = a[j] + 0.5 * dt * k2[j];
    const ComplexVector k3 = rhs(tmp);
    for (std::size_t j = 0; j < p.L; ++j) tmp[j] = a[j] + dt * k3[j];
    const ComplexVector k4 = rhs(tmp);
    for (std::size_t j = 0; j < p.L; ++j)
      a[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    trajectory.push_back(a);
  }
  return trajectory;
}

/// Input-output reflection off the leftmost resonator:
/// r = 1 + i kappa [(DeltaC + T - i kappa/2)^-1]_00.
inline Complex reflection_dissipative(const LatticeParams& p, double kappa,
                                      double delta_c) {
  p.validate();
  if (!(kappa > 0.0)) throw ValidationError("reflection_dissipative: kappa must be > 0");
  const Complex g = inverse_element(detail::response_matrix(p, kappa, delta_c), 0, 0);
  return 1.0 + Complex{0.0, kappa} * g;
}

/// Reflection trace over one theta cycle with phase unwrapping and winding.
inline ReflectionTrace reflection_trace(const LatticeParams& p, double kappa,
                                        double delta_c, std::size_t ntheta) {
  p.validate();
  return trace_winding(
      [&](double theta) {
        return reflection_dissipative(p.with_theta(theta), kappa, delta_c);
      },
      ntheta);
}

}  // namespace topochain
