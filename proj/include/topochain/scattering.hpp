#pragma once

#include <cmath>
#include <string>

#include "topochain/errors.hpp"
#include "topochain/lattice.hpp"
#include "topochain/linalg.hpp"
#include "topochain/trace.hpp"

namespace topochain {

/// Probe energy bookkeeping: E is the total (lead) energy, Ep = E - DeltaC
/// the in-gap energy seen by the device.
struct ScatterEnergy {
  double E = 0.0;
  double Ep = 0.0;

  static ScatterEnergy from_device_energy(const LatticeParams& p, double ep) {
    ScatterEnergy s{ep + p.DeltaC, ep};
    if (!(std::abs(s.E) < p.J))
      throw NumericalError("ScatterEnergy: |E| >= J, evanescent lead");
    return s;
  }
};

/// Surface self-energies of the two semi-infinite leads (half-bandwidth J).
struct LeadSelfEnergy {
  Complex left;
  Complex right;
};

/// Sigma_L = (E - i sqrt(J^2 - E^2))/2 and Sigma_R = (E + i sqrt(J^2 - E^2))/2,
/// the branch pair with group velocities directed into the device.
inline LeadSelfEnergy lead_self_energy(double E, double J) {
  if (!(std::abs(E) < J))
    throw NumericalError("lead_self_energy: |E| >= J, evanescent lead");
  const double v = std::sqrt(J * J - E * E);
  return {Complex{E / 2.0, -v / 2.0}, Complex{E / 2.0, v / 2.0}};
}

namespace detail {

/// E I - H_D - Sigma_L e_0 e_0^T - Sigma_R e_{L-1} e_{L-1}^T, detuning included.
inline ComplexMatrix green_inverse(const LatticeParams& p, double E) {
  const auto sigma = lead_self_energy(E, p.J);
  ComplexMatrix m = build_hamiltonian(p, true);
  for (std::size_t i = 0; i < p.L; ++i)
    for (std::size_t j = 0; j < p.L; ++j) m(i, j) = -m(i, j);
  for (std::size_t i = 0; i < p.L; ++i) m(i, i) += E;
  m(0, 0) -= sigma.left;
  m(p.L - 1, p.L - 1) -= sigma.right;
  return m;
}

}  // namespace detail

/// Element (i, j) of the finite-device Green function with both leads attached.
inline Complex device_green_element(const LatticeParams& p, double E, std::size_t i,
                                    std::size_t j) {
  p.validate();
  return inverse_element(detail::green_inverse(p, E), i, j);
}

/// Corner element [G_D]_11 from the L x L matrix inversion.
inline Complex device_green_11_numeric(const LatticeParams& p, double E) {
  return device_green_element(p, E, 0, 0);
}

/// Pieces of the closed-form corner Green function.
struct ClosedFormParts {
  double m1 = 0.0;
  double m2 = 0.0;
  double P1 = 0.0;  ///< Je cos(theta)
  double P2 = 0.0;  ///< Je sin(theta)
};

/// m1, m2 of the semi-infinite closed form at in-gap energy Ep.
///
/// The root term is sqrt(b1) * sqrt(b2) with complex principal branches: for
/// in-gap energies both brackets are negative and each contributes a factor
/// i, so the real root of the product enters with a plus sign. A mixed-sign
/// product means Ep lies inside a device band. Selecting the root this way
/// reproduces the retarded corner Green function on both sides of the
/// Ep + P1 = 0 line; a fixed minus branch picks the unphysical solution of
/// the surface recursion on one side.
inline ClosedFormParts closed_form_parts(const LatticeParams& p, double Ep) {
  p.validate();
  const double E = Ep + p.DeltaC;
  if (!(std::abs(E) < p.J))
    throw NumericalError("closed_form_parts: |E| >= J, evanescent lead");
  ClosedFormParts parts;
  parts.P1 = p.Je * std::cos(p.theta);
  parts.P2 = p.Je * std::sin(p.theta);
  const double j1 = p.J1(), j2 = p.J2();
  const double b1 = Ep * Ep - (j1 + j2) * (j1 + j2) - parts.P1 * parts.P1;
  const double b2 =
      Ep * Ep - (parts.P2 - j1 + j2) * (parts.P2 - j1 + j2) - parts.P1 * parts.P1;
  const double product = b1 * b2;
  if (product < 0.0)
    throw NumericalError("closed_form_parts: energy not in gap (Ep = " +
                         std::to_string(Ep) + ", theta = " + std::to_string(p.theta) + ")");
  const double root = (b1 < 0.0) ? -std::sqrt(product) : std::sqrt(product);
  parts.m1 = j1 * j1 - j2 * j2 + (Ep + parts.P1) * (p.DeltaC + parts.P1) -
             (j1 + j2) * parts.P2 - root;
  parts.m2 = (Ep + parts.P1) * std::sqrt(p.J * p.J - E * E);
  return parts;
}

/// Continued-fraction closed form [G_D]_11 = -2 (Ep + P1) / (m1 - i m2),
/// the large-L limit of the numeric corner element.
inline Complex device_green_11_closed(const LatticeParams& p, double Ep) {
  const auto parts = closed_form_parts(p, Ep);
  return -2.0 * (Ep + parts.P1) / Complex{parts.m1, -parts.m2};
}

/// Fisher-Lee reflection off the left lead:
/// r_L = -1 + i sqrt(J^2 - E^2) [G_D]_11.
inline Complex reflection_fisher_lee(const LatticeParams& p, double E) {
  p.validate();
  if (!(std::abs(E) < p.J))
    throw NumericalError("reflection_fisher_lee: |E| >= J, evanescent lead");
  const Complex g = device_green_11_numeric(p, E);
  return -1.0 + Complex{0.0, std::sqrt(p.J * p.J - E * E)} * g;
}

/// Analytic reflection r = -(m1 + i m2)/(m1 - i m2); unimodular by
/// construction wherever defined.
inline Complex reflection_closed(const LatticeParams& p, double Ep) {
  const auto parts = closed_form_parts(p, Ep);
  if (parts.m1 == 0.0 && parts.m2 == 0.0)
    throw NumericalError("reflection_closed: degenerate point m1 = m2 = 0; shift theta off the grid node");
  return -Complex{parts.m1, parts.m2} / Complex{parts.m1, -parts.m2};
}

/// Closed-form reflection sampled over one theta cycle.
inline ReflectionTrace pump_trace(const LatticeParams& p, double Ep,
                                  std::size_t ntheta) {
  p.validate();
  return trace_winding(
      [&](double theta) { return reflection_closed(p.with_theta(theta), Ep); }, ntheta);
}

/// Pumped particle number per cycle: the winding of the closed-form
/// reflection phase over theta in [0, 2 pi].
inline int pumped_charge(const LatticeParams& p, double Ep, std::size_t ntheta) {
  return pump_trace(p, Ep, ntheta).winding;
}

}  // namespace topochain
