#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "topochain/errors.hpp"
#include "topochain/linalg.hpp"

namespace topochain {

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  return t;
}

/// Physical parameter set of one chain instance. All energies are in units
/// of Je unless the caller says otherwise; J1 = J + delta and J2 = J - delta
/// are always derived, never stored.
struct LatticeParams {
  double J = 1.0;       ///< mean hopping (J1 + J2) / 2
  double delta = 0.0;   ///< hopping imbalance (J1 - J2) / 2
  double Je = 1.0;      ///< qubit-assisted rate g0^2 / DeltaQ, > 0
  double DeltaC = 0.0;  ///< cavity detuning
  double kappa = 0.0;   ///< uniform cavity decay, >= 0
  double theta = 0.0;   ///< mixing angle, canonical range [0, 2*pi)
  std::size_t L = 10;   ///< resonator count, even and >= 4
  std::optional<double> g0;      ///< composite coupling (optional)
  std::optional<double> DeltaQ;  ///< qubit detuning (optional, nonzero)

  double J1() const { return J + delta; }
  double J2() const { return J - delta; }

  LatticeParams with_theta(double t) const {
    LatticeParams q = *this;
    q.theta = t;
    return q;
  }

  void validate() const {
    if (!(std::isfinite(J) && std::isfinite(delta) && std::isfinite(Je) &&
          std::isfinite(DeltaC) && std::isfinite(kappa) && std::isfinite(theta)))
      throw ValidationError("LatticeParams: all physical values must be finite");
    if (L < 4 || L % 2 != 0)
      throw ValidationError("LatticeParams: L must be even and >= 4, got " +
                            std::to_string(L));
    if (!(Je > 0.0)) throw ValidationError("LatticeParams: Je must be > 0");
    if (kappa < 0.0) throw ValidationError("LatticeParams: kappa must be >= 0");
    if (g0 && DeltaQ) {
      if (*DeltaQ == 0.0) throw ValidationError("LatticeParams: DeltaQ must be nonzero");
      const double derived = (*g0) * (*g0) / (*DeltaQ);
      if (std::abs(derived - Je) > 1e-12 * std::abs(Je))
        throw ValidationError("LatticeParams: Je inconsistent with g0^2/DeltaQ (" +
                              std::to_string(derived) + " vs " + std::to_string(Je) + ")");
    } else if (g0.has_value() != DeltaQ.has_value()) {
      throw ValidationError("LatticeParams: g0 and DeltaQ must be given together");
    }
  }
};

/// Qubit-resonator coupling strengths (g1, g2).
struct CouplingPair {
  double g1 = 0.0;
  double g2 = 0.0;

  double g0() const { return std::hypot(g1, g2); }
  /// Recovers the mixing angle; equals theta mod 2*pi when g2 != 0.
  double mixing_angle() const { return 2.0 * std::atan2(g1, g2); }
};

/// g1 = g0 sin(theta/2), g2 = g0 cos(theta/2).
inline CouplingPair couplings_from_angle(double g0, double theta) {
  if (g0 < 0.0) throw ValidationError("couplings_from_angle: g0 must be >= 0");
  return {g0 * std::sin(theta / 2.0), g0 * std::cos(theta / 2.0)};
}

/// Flux-bias form: g_a = 2 betaEJ cos(f3) dpsi0, g_b = 2 betaEJ cos(f5) dpsi0.
/// With f5 = theta/2 and f3 = (pi - theta)/2 this reduces to
/// couplings_from_angle(2 betaEJ dpsi0, theta).
inline CouplingPair couplings_from_flux(double betaEJ, double dpsi0, double f3,
                                        double f5) {
  return {2.0 * betaEJ * std::cos(f3) * dpsi0, 2.0 * betaEJ * std::cos(f5) * dpsi0};
}

/// Real-space open-boundary Hamiltonian on the a1, b1, a2, b2, ... basis
/// (index 0 is the leftmost, driven resonator).
///
/// Tridiagonal, real symmetric: intra-cell hop J1 - (Je/2) sin(theta),
/// inter-cell hop J2 + (Je/2) sin(theta), on-site +Je cos(theta) on a-sites
/// and -Je cos(theta) on b-sites, plus DeltaC on every site when requested.
inline ComplexMatrix build_hamiltonian(const LatticeParams& p, bool include_detuning) {
  p.validate();
  const double s = std::sin(p.theta), c = std::cos(p.theta);
  const double intra = p.J1() - 0.5 * p.Je * s;
  const double inter = p.J2() + 0.5 * p.Je * s;
  const double shift = include_detuning ? p.DeltaC : 0.0;
  ComplexMatrix h(p.L, p.L);
  for (std::size_t j = 0; j < p.L; ++j) {
    const double onsite = (j % 2 == 0) ? p.Je * c : -p.Je * c;
    h(j, j) = shift + onsite;
    if (j + 1 < p.L) {
      const double hop = (j % 2 == 0) ? intra : inter;
      h(j, j + 1) = hop;
      h(j + 1, j) = hop;
    }
  }
  return h;
}

}  // namespace topochain
