#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "topochain/errors.hpp"
#include "topochain/lattice.hpp"
#include "topochain/parallel.hpp"

namespace topochain {

/// Momentum-space decomposition h0 + h . sigma of the two-band Hamiltonian.
struct BlochVector {
  double h0 = 0.0;
  double hx = 0.0;
  double hy = 0.0;
  double hz = 0.0;

  double norm() const { return std::sqrt(hx * hx + hy * hy + hz * hz); }
};

struct BandPair {
  double minus = 0.0;
  double plus = 0.0;
};

/// Chern estimate with its quantization defect; `rounded` is the invariant,
/// `quantization_error` must stay small for the estimate to be trusted.
struct ChernResult {
  double value = 0.0;
  int rounded = 0;
  double quantization_error = 0.0;
  std::size_t nk = 0;
  std::size_t ntheta = 0;
};

/// h(kx, theta) = (DeltaC; 2J cos kx, (2 delta - Je sin theta) sin kx, Je cos theta).
inline BlochVector bloch_field(const LatticeParams& p, double kx, double theta) {
  return {p.DeltaC, 2.0 * p.J * std::cos(kx),
          (2.0 * p.delta - p.Je * std::sin(theta)) * std::sin(kx),
          p.Je * std::cos(theta)};
}

inline BandPair band_energies(const BlochVector& h) {
  const double r = h.norm();
  return {h.h0 - r, h.h0 + r};
}

/// Exact min over kx of |h(kx, theta)|: the kx-extrema sit at kx = 0 and
/// kx = pi/2, so min |h|^2 = min(4J^2, S^2) + hz^2 with S = 2 delta - Je sin theta.
inline double min_band_norm_at_theta(const LatticeParams& p, double theta) {
  const double s = 2.0 * p.delta - p.Je * std::sin(theta);
  const double hz = p.Je * std::cos(theta);
  const double m2 = std::min(4.0 * p.J * p.J, s * s) + hz * hz;
  return std::sqrt(m2);
}

/// Bulk band edges at fixed theta in the DeltaC = 0 frame: (-m, +m).
inline std::pair<double, double> band_edges_at_theta(const LatticeParams& p,
                                                     double theta) {
  const double m = min_band_norm_at_theta(p, theta);
  return {-m, m};
}

/// Minimum of 2|h| over a (kx, theta) grid; the direct gap of the two bands.
inline double bulk_gap(const LatticeParams& p, std::size_t nk, std::size_t ntheta) {
  p.validate();
  if (nk < 16 || ntheta < 16)
    throw ValidationError("bulk_gap: grid counts must be >= 16");
  const double pi = std::numbers::pi;
  std::vector<double> row_min(ntheta);
  parallel_for(ntheta, [&](std::size_t j) {
    const double theta = (static_cast<double>(j) + 0.5) * 2.0 * pi /
                         static_cast<double>(ntheta);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nk; ++i) {
      const double kx = (static_cast<double>(i) + 0.5) * pi / static_cast<double>(nk);
      best = std::min(best, bloch_field(p, kx, theta).norm());
    }
    row_min[j] = best;
  });
  double m = std::numeric_limits<double>::infinity();
  for (double v : row_min) m = std::min(m, v);
  return 2.0 * m;
}

namespace detail {

/// Exact gap over the whole zone from the per-theta closed form.
inline double exact_bulk_gap(const LatticeParams& p) {
  const std::size_t n = 4096;
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = static_cast<double>(j) * 2.0 * std::numbers::pi /
                         static_cast<double>(n);
    m = std::min(m, min_band_norm_at_theta(p, theta));
  }
  return 2.0 * m;
}

inline void require_gapped(const LatticeParams& p, const char* who) {
  const double scale = std::max({std::abs(p.J), std::abs(p.delta), p.Je});
  if (exact_bulk_gap(p) <= 1e-9 * scale)
    throw NumericalError(std::string(who) + ": gapless configuration, invariant undefined");
}

}  // namespace detail

/// Piecewise Chern number of the ground band: 1 for |2 delta| < Je, else 0.
/// The phase boundary |2 delta| = Je is a gap closing and is rejected.
inline int chern_analytic(const LatticeParams& p) {
  p.validate();
  const double margin = std::abs(2.0 * p.delta) - p.Je;
  if (std::abs(margin) <= 1e-9 * p.Je)
    throw NumericalError("chern_analytic: |2 delta| = Je is gapless, invariant undefined");
  return margin < 0.0 ? 1 : 0;
}

/// A Bloch model exposes the field and its analytic (kx, theta) derivatives.
/// Models must obey the sigma_z closure h(kx + pi) = (-hx, -hy, +hz) so the
/// zone kx in [0, pi), theta in [0, 2 pi) is a closed torus.
struct LatticeBlochModel {
  LatticeParams p;

  BlochVector field(double kx, double theta) const {
    return bloch_field(p, kx, theta);
  }

  /// d h / d kx and d h / d theta, closed form (no finite differences).
  std::pair<BlochVector, BlochVector> derivs(double kx, double theta) const {
    const double s = std::sin(theta), c = std::cos(theta);
    const double sk = std::sin(kx), ck = std::cos(kx);
    BlochVector dk{0.0, -2.0 * p.J * sk, (2.0 * p.delta - p.Je * s) * ck, 0.0};
    BlochVector dt{0.0, 0.0, -p.Je * c * sk, -p.Je * s};
    return {dk, dt};
  }
};

/// Berry curvature of the ground band at one zone point:
/// F = (1/2) h . (d_kx h x d_theta h) / |h|^3. Integrating F over the zone
/// gives 2 pi C.
template <class Model>
double berry_curvature_model(const Model& m, double kx, double theta) {
  const BlochVector h = m.field(kx, theta);
  const auto [dk, dt] = m.derivs(kx, theta);
  const double cx = dk.hy * dt.hz - dk.hz * dt.hy;
  const double cy = dk.hz * dt.hx - dk.hx * dt.hz;
  const double cz = dk.hx * dt.hy - dk.hy * dt.hx;
  const double r = h.norm();
  return 0.5 * (h.hx * cx + h.hy * cy + h.hz * cz) / (r * r * r);
}

inline double berry_curvature(const LatticeParams& p, double kx, double theta) {
  return berry_curvature_model(LatticeBlochModel{p}, kx, theta);
}

/// Midpoint quadrature of the solid-angle integrand over
/// kx in [0, kx_span), theta in [0, 2 pi).
template <class Model>
ChernResult chern_solid_angle_model(const Model& m, std::size_t nk,
                                    std::size_t ntheta,
                                    double kx_span = std::numbers::pi) {
  if (nk < 32 || ntheta < 32)
    throw ValidationError("chern_solid_angle: grid counts must be >= 32");
  const double pi = std::numbers::pi;
  const double dk = kx_span / static_cast<double>(nk);
  const double dt = 2.0 * pi / static_cast<double>(ntheta);
  std::vector<double> row(ntheta);
  parallel_for(ntheta, [&](std::size_t j) {
    const double theta = (static_cast<double>(j) + 0.5) * dt;
    double acc = 0.0, carry = 0.0;
    for (std::size_t i = 0; i < nk; ++i) {
      const double kx = (static_cast<double>(i) + 0.5) * dk;
      const double x = 2.0 * berry_curvature_model(m, kx, theta) - carry;
      const double t = acc + x;
      carry = (t - acc) - x;
      acc = t;
    }
    row[j] = acc;
  });
  ChernResult out;
  out.value = kahan_sum(row) * dk * dt / (4.0 * pi);
  out.rounded = static_cast<int>(std::lround(out.value));
  out.quantization_error = std::abs(out.value - out.rounded);
  out.nk = nk;
  out.ntheta = ntheta;
  return out;
}

inline ChernResult chern_solid_angle(const LatticeParams& p, std::size_t nk = 256,
                                     std::size_t ntheta = 256) {
  p.validate();
  detail::require_gapped(p, "chern_solid_angle");
  return chern_solid_angle_model(LatticeBlochModel{p}, nk, ntheta);
}

namespace detail {

/// Ground-band spinor of h . sigma, branch picked away from the degeneracy.
inline std::array<Complex, 2> lower_spinor(const BlochVector& h, const char* who) {
  const double r = h.norm();
  if (!(r > 0.0))
    throw NumericalError(std::string(who) + ": |h| = 0, gap closed on the grid");
  std::array<Complex, 2> u;
  if (h.hz <= 0.0) {
    u = {Complex{h.hz - r, 0.0}, Complex{h.hx, h.hy}};
  } else {
    u = {Complex{h.hx, -h.hy}, Complex{-(h.hz + r), 0.0}};
  }
  const double n = std::sqrt(std::norm(u[0]) + std::norm(u[1]));
  u[0] /= n;
  u[1] /= n;
  return u;
}

}  // namespace detail

/// Lattice field-strength (gauge-link) Chern number of the ground band.
///
/// Plaquette fluxes come from normalized link products of the ground-band
/// spinors; the kx = pi edge is closed with the sigma_z transition function
/// u(pi, theta) = sigma_z u(0, theta), so the plaquette sum is an exact
/// multiple of 2 pi. Orientation matches the solid-angle integral.
template <class Model>
ChernResult chern_gauge_link_model(const Model& m, std::size_t nk, std::size_t ntheta) {
  if (nk < 8 || ntheta < 8)
    throw ValidationError("chern_gauge_link: grid counts must be >= 8");
  const double pi = std::numbers::pi;
  const std::size_t cols = ntheta + 1;
  std::vector<std::array<Complex, 2>> u((nk + 1) * cols);
  auto at = [&](std::size_t i, std::size_t j) -> std::array<Complex, 2>& {
    return u[i * cols + j];
  };
  parallel_for(nk, [&](std::size_t i) {
    const double kx = static_cast<double>(i) * pi / static_cast<double>(nk);
    for (std::size_t j = 0; j < ntheta; ++j) {
      const double theta =
          static_cast<double>(j) * 2.0 * pi / static_cast<double>(ntheta);
      at(i, j) = detail::lower_spinor(m.field(kx, theta), "chern_gauge_link");
    }
    at(i, ntheta) = at(i, 0);
  });
  for (std::size_t j = 0; j <= ntheta; ++j) {
    const auto& base = at(0, j);
    at(nk, j) = {base[0], -base[1]};  // sigma_z closure at kx = pi
  }

  auto link = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    const auto& a = at(i0, j0);
    const auto& b = at(i1, j1);
    const Complex l = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
    if (std::abs(l) < 1e-12)
      throw NumericalError("chern_gauge_link: vanishing link norm, refine the grid");
    return l;
  };

  std::vector<double> row(nk);
  parallel_for(nk, [&](std::size_t i) {
    double acc = 0.0, carry = 0.0;
    for (std::size_t j = 0; j < ntheta; ++j) {
      const Complex plaq = link(i, j, i + 1, j) * link(i + 1, j, i + 1, j + 1) *
                           std::conj(link(i, j + 1, i + 1, j + 1)) *
                           std::conj(link(i, j, i, j + 1));
      const double x = std::arg(plaq) - carry;
      const double t = acc + x;
      carry = (t - acc) - x;
      acc = t;
    }
    row[i] = acc;
  });
  ChernResult out;
  // Standard field-strength orientation measures the opposite normal to the
  // solid-angle parametrization used here; flip so both report the same sign.
  out.value = -kahan_sum(row) / (2.0 * pi);
  out.rounded = static_cast<int>(std::lround(out.value));
  out.quantization_error = std::abs(out.value - out.rounded);
  out.nk = nk;
  out.ntheta = ntheta;
  return out;
}

inline ChernResult chern_gauge_link(const LatticeParams& p, std::size_t nk = 32,
                                    std::size_t ntheta = 32) {
  p.validate();
  detail::require_gapped(p, "chern_gauge_link");
  return chern_gauge_link_model(LatticeBlochModel{p}, nk, ntheta);
}

}  // namespace topochain
