#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "topochain/errors.hpp"
#include "topochain/linalg.hpp"

namespace topochain {

/// Sampled complex reflection coefficient over one pump cycle with its
/// unwrapped phase. `winding` counts encirclements of the origin;
/// `winding_residual` is the deviation of the endpoint phase difference
/// from a whole number of turns.
struct ReflectionTrace {
  std::vector<double> theta_grid;
  std::vector<Complex> r_values;
  std::vector<double> unwrapped_phase;
  int winding = 0;
  double winding_residual = 0.0;
  double max_step = 0.0;  ///< largest adjacent principal-value phase jump
};

namespace detail {

template <class Fn>
ReflectionTrace sample_trace(Fn&& reflection_at, std::size_t n) {
  const double two_pi = 2.0 * std::numbers::pi;
  ReflectionTrace t;
  t.theta_grid.resize(n + 1);
  t.r_values.resize(n + 1);
  t.unwrapped_phase.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    t.theta_grid[k] = two_pi * static_cast<double>(k) / static_cast<double>(n);
    t.r_values[k] = reflection_at(t.theta_grid[k]);
  }
  t.unwrapped_phase[0] = std::arg(t.r_values[0]);
  for (std::size_t k = 1; k <= n; ++k) {
    const double step = std::arg(t.r_values[k] / t.r_values[k - 1]);
    t.max_step = std::max(t.max_step, std::abs(step));
    t.unwrapped_phase[k] = t.unwrapped_phase[k - 1] + step;
  }
  const double turns = (t.unwrapped_phase.back() - t.unwrapped_phase.front()) / two_pi;
  t.winding = static_cast<int>(std::lround(turns));
  t.winding_residual = std::abs(turns - t.winding);
  return t;
}

}  // namespace detail

/// Samples reflection_at(theta) on a uniform grid over [0, 2 pi] including
/// both endpoints, unwraps the phase and counts the winding. The grid is
/// doubled (up to `cap` intervals) while any adjacent phase jump reaches
/// pi/2; a jump at pi after refinement marks the trace as under-sampled.
template <class Fn>
ReflectionTrace trace_winding(Fn&& reflection_at, std::size_t ntheta,
                              std::size_t cap = 4096) {
  if (ntheta < 64) throw ValidationError("trace_winding: ntheta must be >= 64");
  std::size_t n = ntheta;
  for (;;) {
    ReflectionTrace t = detail::sample_trace(reflection_at, n);
    if (t.max_step < std::numbers::pi / 2.0 || n >= cap) {
      if (t.max_step >= std::numbers::pi - 1e-9)
        throw NumericalError("trace_winding: trace under-sampled after refinement cap");
      return t;
    }
    n *= 2;
  }
}

}  // namespace topochain
