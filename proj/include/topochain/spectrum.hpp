#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "topochain/bloch.hpp"
#include "topochain/errors.hpp"
#include "topochain/lattice.hpp"
#include "topochain/linalg.hpp"
#include "topochain/parallel.hpp"

namespace topochain {

/// Open-boundary eigenspectrum against theta, with per-level in-gap flags
/// measured against the exact bulk band edges.
struct EdgeSpectrum {
  std::vector<double> theta_grid;
  std::vector<std::vector<double>> energies;   ///< per theta, ascending
  std::vector<std::vector<bool>> edge_flags;   ///< strictly inside the gap
  std::vector<std::pair<double, double>> gap_bounds;
};

/// Per-site probabilities |psi_j|^2 / ||psi||^2; non-negative, sums to 1.
struct DensityProfile {
  std::vector<double> site_probabilities;
};

/// In-gap levels at one theta with their profiles and IPR localization.
struct EdgeStateSet {
  std::vector<std::size_t> indices;
  std::vector<DensityProfile> profiles;
  std::vector<double> localization;  ///< inverse participation ratio per profile
};

inline DensityProfile density_profile(const ComplexVector& v) {
  const double n2 = v.norm() * v.norm();
  if (!(n2 > 0.0)) throw ValidationError("density_profile: zero vector");
  DensityProfile d;
  d.site_probabilities.resize(v.size());
  for (std::size_t j = 0; j < v.size(); ++j)
    d.site_probabilities[j] = std::norm(v[j]) / n2;
  return d;
}

inline double inverse_participation_ratio(const DensityProfile& d) {
  double s = 0.0;
  for (double p : d.site_probabilities) s += p * p;
  return s;
}

/// Uniform grid over [0, 2 pi], both endpoints included.
inline std::vector<double> uniform_theta_grid(std::size_t n = 201) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = 2.0 * std::numbers::pi * static_cast<double>(i) /
              static_cast<double>(n - 1);
  return grid;
}

namespace detail {

/// Flag margin keeping floating-point boundary flicker deterministic.
inline double edge_flag_margin(const LatticeParams& p) { return 1e-9 * p.Je; }

}  // namespace detail

/// Diagonalizes the open chain at every theta (DeltaC = 0 frame) and flags
/// levels lying strictly inside the bulk gap of that theta.
inline EdgeSpectrum open_spectrum(const LatticeParams& p,
                                  const std::vector<double>& theta_grid) {
  p.validate();
  EdgeSpectrum out;
  out.theta_grid = theta_grid;
  out.energies.resize(theta_grid.size());
  out.edge_flags.resize(theta_grid.size());
  out.gap_bounds.resize(theta_grid.size());
  const double margin = detail::edge_flag_margin(p);
  parallel_for(theta_grid.size(), [&](std::size_t t) {
    const double theta = theta_grid[t];
    auto eig = hermitian_eig(build_hamiltonian(p.with_theta(theta), false));
    const auto bounds = band_edges_at_theta(p, theta);
    std::vector<bool> flags(eig.values.size());
    for (std::size_t k = 0; k < eig.values.size(); ++k)
      flags[k] = eig.values[k] > bounds.first + margin &&
                 eig.values[k] < bounds.second - margin;
    out.energies[t] = std::move(eig.values);
    out.edge_flags[t] = std::move(flags);
    out.gap_bounds[t] = bounds;
  });
  return out;
}

namespace detail {

inline ComplexVector column(const ComplexMatrix& m, std::size_t k) {
  ComplexVector v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, k);
  return v;
}

/// Rotates a nearly degenerate pair into its maximally boundary-localized
/// combinations by diagonalizing the left-half weight in the 2d subspace.
/// Finite chains hybridize the two edge states into even/odd cats whenever
/// their energies cross; the rotation undoes that finite-size artifact.
inline std::pair<ComplexVector, ComplexVector> localize_pair(const ComplexVector& a,
                                                             const ComplexVector& b) {
  const std::size_t n = a.size();
  ComplexMatrix w(2, 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    w(0, 0) += std::conj(a[j]) * a[j];
    w(0, 1) += std::conj(a[j]) * b[j];
    w(1, 0) += std::conj(b[j]) * a[j];
    w(1, 1) += std::conj(b[j]) * b[j];
  }
  auto eig = hermitian_eig(w);
  ComplexVector lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = eig.vectors(0, 0) * a[j] + eig.vectors(1, 0) * b[j];
    hi[j] = eig.vectors(0, 1) * a[j] + eig.vectors(1, 1) * b[j];
  }
  return {hi, lo};  // (left-localized, right-localized)
}

}  // namespace detail

/// In-gap levels at this theta. Nearly degenerate in-gap pairs are reported
/// as their boundary-localized combinations.
inline EdgeStateSet identify_edge_states(const LatticeParams& p, double theta) {
  p.validate();
  auto eig = hermitian_eig(build_hamiltonian(p.with_theta(theta), false));
  const auto bounds = band_edges_at_theta(p, theta);
  const double margin = detail::edge_flag_margin(p);
  std::vector<std::size_t> in_gap;
  for (std::size_t k = 0; k < eig.values.size(); ++k)
    if (eig.values[k] > bounds.first + margin && eig.values[k] < bounds.second - margin)
      in_gap.push_back(k);
  if (in_gap.empty())
    throw NumericalError("identify_edge_states: no in-gap state at this theta");

  const double gap_width = bounds.second - bounds.first;
  EdgeStateSet out;
  out.indices = in_gap;
  std::vector<ComplexVector> states;
  for (std::size_t pos = 0; pos < in_gap.size();) {
    if (pos + 1 < in_gap.size() &&
        std::abs(eig.values[in_gap[pos + 1]] - eig.values[in_gap[pos]]) <
            0.05 * gap_width) {
      auto [left, right] = detail::localize_pair(detail::column(eig.vectors, in_gap[pos]),
                                                 detail::column(eig.vectors, in_gap[pos + 1]));
      states.push_back(std::move(left));
      states.push_back(std::move(right));
      pos += 2;
    } else {
      states.push_back(detail::column(eig.vectors, in_gap[pos]));
      pos += 1;
    }
  }
  for (const auto& s : states) {
    out.profiles.push_back(density_profile(s));
    out.localization.push_back(inverse_participation_ratio(out.profiles.back()));
  }
  return out;
}

}  // namespace topochain
