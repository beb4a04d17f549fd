#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "swarmcert/dynamics.hpp"

namespace swarmcert {

struct SimMetadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  double step = 0.0;
};

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  SimMetadata meta;

  std::size_t size() const { return times.size(); }
  double final_time() const { return times.back(); }

  std::size_t index_nearest(double t) const {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 0;
    if (it == times.end()) return times.size() - 1;
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    return (t - times[hi - 1] <= times[hi] - t) ? hi - 1 : hi;
  }

  const State& state_nearest(double t) const { return states[index_nearest(t)]; }
};

/// Step grid for a run: the uniform grid of pitch h merged with every
/// schedule breakpoint occurrence, so the weights are constant within each
/// step and the classical order of the integrator survives the
/// discontinuous-in-time right-hand side. Points closer than a relative
/// epsilon collapse onto the breakpoint.
inline std::vector<double> step_times(const ScheduleMatrix& matrix, double t_end, double h) {
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw std::invalid_argument("step_times: t_end must be positive");
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("step_times: step must be positive");

  struct Point {
    double t;
    bool forced;
  };
  std::vector<Point> points;
  for (std::int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * h;
    if (t >= t_end) break;
    points.push_back({t, false});
  }
  points.push_back({t_end, true});
  for (double b : matrix.breakpoint_times(t_end)) points.push_back({b, true});

  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) { return a.t < b.t; });

  const double merge_eps = 1e-9 * h;
  std::vector<double> grid;
  std::size_t i = 0;
  while (i < points.size()) {
    std::size_t j = i;
    double chosen = points[i].t;
    bool have_forced = points[i].forced;
    while (j + 1 < points.size() && points[j + 1].t - points[i].t <= merge_eps) {
      ++j;
      if (!have_forced && points[j].forced) {
        chosen = points[j].t;
        have_forced = true;
      }
    }
    grid.push_back(chosen);
    i = j + 1;
  }
  if (grid.front() != 0.0) grid.insert(grid.begin(), 0.0);
  grid.back() = t_end;  // the final step lands exactly on the requested horizon
  return grid;
}

namespace detail {

inline FirstOrderState axpy(FirstOrderState y, double c, const FirstOrderState& k) {
  y.positions.add_scaled(c, k.positions);
  return y;
}
inline SecondOrderState axpy(SecondOrderState y, double c, const SecondOrderState& k) {
  y.positions.add_scaled(c, k.positions);
  y.velocities.add_scaled(c, k.velocities);
  return y;
}
inline bool all_finite(const FirstOrderState& s) { return s.positions.all_finite(); }
inline bool all_finite(const SecondOrderState& s) {
  return s.positions.all_finite() && s.velocities.all_finite();
}

/// Classical fourth-order Runge-Kutta over a precomputed grid. Weights are
/// frozen at each step midpoint, which lies strictly inside the step's
/// schedule interval.
template <class State, class Drift>
Trajectory<State> rk4_integrate(const ScheduleMatrix& matrix, State initial, Drift&& drift,
                                double t_end, double h) {
  Trajectory<State> traj;
  traj.times = step_times(matrix, t_end, h);
  traj.meta.step = h;
  traj.states.reserve(traj.times.size());
  traj.states.push_back(initial);

  State y = std::move(initial);
  for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
    const double t0 = traj.times[k];
    const double t1 = traj.times[k + 1];
    const double dt = t1 - t0;
    try {
      const StateMatrix w = sample_weights(matrix, t0 + 0.5 * dt);
      const State k1 = drift(w, y);
      const State k2 = drift(w, axpy(y, 0.5 * dt, k1));
      const State k3 = drift(w, axpy(y, 0.5 * dt, k2));
      const State k4 = drift(w, axpy(y, dt, k3));

      State incr = k1;
      incr = axpy(std::move(incr), 2.0, k2);
      incr = axpy(std::move(incr), 2.0, k3);
      incr = axpy(std::move(incr), 1.0, k4);
      y = axpy(std::move(y), dt / 6.0, incr);
    } catch (const simulation_error& e) {
      throw simulation_error(std::string(e.what()) + " in the step ending at t=" +
                                 std::to_string(t1),
                             t1);
    }
    if (!all_finite(y))
      throw simulation_error("simulate: non-finite state at t=" + std::to_string(t1), t1);
    traj.states.push_back(y);
  }
  return traj;
}

}  // namespace detail

inline Trajectory<FirstOrderState> simulate(const SystemConfig& config,
                                            const InteractionKernel& kernel,
                                            const ScheduleMatrix& matrix,
                                            const FirstOrderState& initial, double t_end,
                                            double h) {
  config.validate();
  if (initial.positions.rows() != static_cast<std::size_t>(config.n_agents) ||
      initial.positions.cols() != static_cast<std::size_t>(config.dim))
    throw std::invalid_argument("simulate: initial state shape disagrees with config");
  if (!initial.positions.all_finite())
    throw std::invalid_argument("simulate: non-finite initial state");
  return detail::rk4_integrate(
      matrix, initial,
      [&](const StateMatrix& w, const FirstOrderState& s) -> FirstOrderState {
        return {alignment_drift(config, kernel, w, s.positions, s.positions)};
      },
      t_end, h);
}

inline Trajectory<SecondOrderState> simulate(const SystemConfig& config,
                                             const InteractionKernel& kernel,
                                             const ScheduleMatrix& matrix,
                                             const SecondOrderState& initial, double t_end,
                                             double h) {
  config.validate();
  if (initial.positions.rows() != static_cast<std::size_t>(config.n_agents) ||
      initial.positions.cols() != static_cast<std::size_t>(config.dim) ||
      initial.velocities.rows() != initial.positions.rows() ||
      initial.velocities.cols() != initial.positions.cols())
    throw std::invalid_argument("simulate: initial state shape disagrees with config");
  if (!initial.positions.all_finite() || !initial.velocities.all_finite())
    throw std::invalid_argument("simulate: non-finite initial state");
  return detail::rk4_integrate(
      matrix, initial,
      [&](const StateMatrix& w, const SecondOrderState& s) -> SecondOrderState {
        return {s.velocities, alignment_drift(config, kernel, w, s.positions, s.velocities)};
      },
      t_end, h);
}

}  // namespace swarmcert
