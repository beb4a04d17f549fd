#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "swarmcert/integrator.hpp"
#include "swarmcert/types.hpp"

namespace swarmcert {

/// Largest pairwise Euclidean gap; zero exactly at consensus.
inline double diameter(const StateMatrix& positions) {
  double best = 0.0;
  for (std::size_t i = 0; i < positions.rows(); ++i)
    for (std::size_t j = i + 1; j < positions.rows(); ++j)
      best = std::max(best, row_gap_norm(positions, i, j));
  return best;
}

struct GammaExtrema {
  double gamma_max = 0.0;                 // max_i |x_i| in any dimension
  std::optional<double> gamma_min;        // min_i x_i, defined on the line only
};

inline GammaExtrema gamma_extrema(const StateMatrix& positions) {
  GammaExtrema out;
  for (std::size_t i = 0; i < positions.rows(); ++i)
    out.gamma_max = std::max(out.gamma_max, row_norm(positions, i));
  if (positions.cols() == 1) {
    double lo = positions(0, 0);
    for (std::size_t i = 1; i < positions.rows(); ++i) lo = std::min(lo, positions(i, 0));
    out.gamma_min = lo;
  }
  return out;
}

/// y_i = (x_i - base) . direction for a unit direction.
inline std::vector<double> projected_positions(const StateMatrix& positions,
                                               std::span<const double> base_point,
                                               std::span<const double> direction) {
  const std::size_t d = positions.cols();
  if (base_point.size() != d || direction.size() != d)
    throw std::invalid_argument("projected_positions: dimension mismatch");
  double norm_sq = 0.0;
  for (double v : direction) norm_sq += v * v;
  if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-12)
    throw std::invalid_argument("projected_positions: direction must be a unit vector");

  std::vector<double> out(positions.rows(), 0.0);
  for (std::size_t i = 0; i < positions.rows(); ++i) {
    double dot = 0.0;
    for (std::size_t k = 0; k < d; ++k) dot += (positions(i, k) - base_point[k]) * direction[k];
    out[i] = dot;
  }
  return out;
}

struct DiameterPair {
  double dx = 0.0;
  double dv = 0.0;
};

/// Position and velocity diameters at the recorded time nearest t.
inline DiameterPair dx_dv(const Trajectory<SecondOrderState>& trajectory, double t) {
  const auto& s = trajectory.state_nearest(t);
  return {diameter(s.positions), diameter(s.velocities)};
}

/// First recorded time at which the diameter drops to eps, if any.
/// Sample-level detection only; the diameter is non-increasing, so this is
/// conservative by at most one step.
inline std::optional<double> detect_consensus(const Trajectory<FirstOrderState>& trajectory,
                                              double eps) {
  for (std::size_t k = 0; k < trajectory.size(); ++k)
    if (diameter(trajectory.states[k].positions) <= eps) return trajectory.times[k];
  return std::nullopt;
}

inline std::vector<double> diameter_series(const Trajectory<FirstOrderState>& trajectory) {
  std::vector<double> out;
  out.reserve(trajectory.size());
  for (const auto& s : trajectory.states) out.push_back(diameter(s.positions));
  return out;
}

inline std::vector<double> diameter_series(const Trajectory<SecondOrderState>& trajectory) {
  std::vector<double> out;
  out.reserve(trajectory.size());
  for (const auto& s : trajectory.states) out.push_back(diameter(s.positions));
  return out;
}

inline std::vector<double> velocity_diameter_series(
    const Trajectory<SecondOrderState>& trajectory) {
  std::vector<double> out;
  out.reserve(trajectory.size());
  for (const auto& s : trajectory.states) out.push_back(diameter(s.velocities));
  return out;
}

}  // namespace swarmcert
