#pragma once

#include <vector>

#include "swarmcert/kernel.hpp"
#include "swarmcert/schedule.hpp"
#include "swarmcert/types.hpp"

namespace swarmcert {

/// Pointwise sample of all link weights M_ij(t). The integrator never
/// steps across a schedule breakpoint, so one mid-step sample is exact.
inline StateMatrix sample_weights(const ScheduleMatrix& matrix, double t) {
  const std::size_t n = static_cast<std::size_t>(matrix.size());
  StateMatrix w(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) w(i, j) = matrix.value(static_cast<int>(i), static_cast<int>(j), t);
  return w;
}

/// Shared drift of both model orders:
///
///   drift_i = (lambda_i / N) * sum_j w_ij phi(|x_i - x_j|) (u_j - u_i)
///
/// where the kernel is always evaluated on position gaps and the relative
/// state u is the positions themselves (first order) or the velocities
/// (second order). Normalized scaling recomputes lambda from the current
/// positions on every call.
inline StateMatrix alignment_drift(const SystemConfig& config, const InteractionKernel& kernel,
                                   const StateMatrix& weights, const StateMatrix& positions,
                                   const StateMatrix& coupled) {
  const std::size_t n = positions.rows();
  const std::size_t d = positions.cols();
  const auto phi = detail::pairwise_phi(kernel, positions);
  const auto lambda = detail::lambda_from_phi(config.scaling, phi, n);

  StateMatrix drift(n, d, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = lambda[i] * inv_n;
    for (std::size_t j = 0; j < n; ++j) {
      const double c = scale * weights(i, j) * phi[i * n + j];
      for (std::size_t k = 0; k < d; ++k)
        drift(i, k) += c * (coupled(j, k) - coupled(i, k));
    }
  }
  return drift;
}

inline FirstOrderState rhs_first_order(const SystemConfig& config,
                                       const InteractionKernel& kernel,
                                       const ScheduleMatrix& matrix, const FirstOrderState& state,
                                       double t) {
  const StateMatrix w = sample_weights(matrix, t);
  return {alignment_drift(config, kernel, w, state.positions, state.positions)};
}

/// xdot = v; vdot couples velocity gaps through position-gap kernels.
inline SecondOrderState rhs_second_order(const SystemConfig& config,
                                         const InteractionKernel& kernel,
                                         const ScheduleMatrix& matrix,
                                         const SecondOrderState& state, double t) {
  const StateMatrix w = sample_weights(matrix, t);
  return {state.velocities,
          alignment_drift(config, kernel, w, state.positions, state.velocities)};
}

}  // namespace swarmcert
