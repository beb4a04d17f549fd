#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swarmcert/rng.hpp"

namespace swarmcert {

/// A communication-weight signal M(t) in [0, 1]: piecewise constant on
/// right-open intervals within [0, horizon), extended periodically with
/// period = horizon beyond that. Piecewise-constant signals admit exact
/// window integrals and an exact worst-window search, which is what the
/// validators and the integrator alignment rely on.
class PiecewiseConstantSignal {
 public:
  PiecewiseConstantSignal(std::vector<double> breakpoints, std::vector<double> values,
                          double horizon)
      : breaks_(std::move(breakpoints)), vals_(std::move(values)), horizon_(horizon) {
    if (breaks_.empty() || breaks_.size() != vals_.size())
      throw std::invalid_argument("signal: breakpoints/values size mismatch");
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
      throw std::invalid_argument("signal: horizon must be positive");
    if (breaks_.front() != 0.0)
      throw std::invalid_argument("signal: breakpoints must start at 0");
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
      if (!std::isfinite(breaks_[i]))
        throw std::invalid_argument("signal: non-finite breakpoint");
      if (i > 0 && !(breaks_[i] > breaks_[i - 1]))
        throw std::invalid_argument("signal: breakpoints must be strictly increasing");
      if (!(vals_[i] >= 0.0 && vals_[i] <= 1.0))
        throw std::invalid_argument("signal: values must lie in [0, 1]");
    }
    if (!(breaks_.back() < horizon_))
      throw std::invalid_argument("signal: breakpoints must lie inside [0, horizon)");

    prefix_.resize(breaks_.size(), 0.0);
    for (std::size_t i = 1; i < breaks_.size(); ++i)
      prefix_[i] = prefix_[i - 1] + vals_[i - 1] * (breaks_[i] - breaks_[i - 1]);
    full_ = prefix_.back() + vals_.back() * (horizon_ - breaks_.back());
  }

  static PiecewiseConstantSignal constant(double value, double horizon = 1.0) {
    return PiecewiseConstantSignal({0.0}, {value}, horizon);
  }

  double horizon() const { return horizon_; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return vals_; }

  /// Integral over one full period [0, horizon).
  double period_integral() const { return full_; }

  bool is_constant() const { return breaks_.size() == 1; }

  /// Value at time t >= 0 under periodic extension; intervals are
  /// right-open, so the value at a breakpoint belongs to the interval the
  /// breakpoint opens.
  double value_at(double t) const {
    const double r = fold(t);
    return vals_[interval_index(r)];
  }

  /// Exact integral of the periodic extension over [0, t], t >= 0.
  double integral_to(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t))
      throw std::invalid_argument("signal: integral endpoint must be finite and >= 0");
    double periods = std::floor(t / horizon_);
    double r = t - periods * horizon_;
    if (r < 0.0) {
      r += horizon_;
      periods -= 1.0;
    }
    if (r >= horizon_) {
      r -= horizon_;
      periods += 1.0;
    }
    const std::size_t k = interval_index(r);
    return periods * full_ + prefix_[k] + vals_[k] * (r - breaks_[k]);
  }

  /// Exact integral over the sliding window [t, t + window].
  double window_integral(double t, double window) const {
    if (!(t >= 0.0)) throw std::invalid_argument("signal: window start must be >= 0");
    if (!(window > 0.0) || !std::isfinite(window))
      throw std::invalid_argument("signal: window length must be positive");
    return integral_to(t + window) - integral_to(t);
  }

 private:
  double fold(double t) const {
    double r = std::fmod(t, horizon_);
    if (r < 0.0) r += horizon_;
    if (r >= horizon_) r = 0.0;
    return r;
  }

  std::size_t interval_index(double r) const {
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
  }

  std::vector<double> breaks_;
  std::vector<double> vals_;
  std::vector<double> prefix_;  // prefix_[k] = integral over [0, breaks_[k]]
  double horizon_ = 1.0;
  double full_ = 0.0;
};

inline double window_integral(const PiecewiseConstantSignal& signal, double t, double window) {
  return signal.window_integral(t, window);
}

/// Square matrix of link signals. M(i, j) weighs the influence of agent j
/// on agent i. The diagonal is pinned to the constant-one signal: it never
/// enters the drift (zero relative state) and it makes the hub search of
/// the scrambling validator admit k = i and k = j.
class ScheduleMatrix {
 public:
  explicit ScheduleMatrix(int n_agents)
      : n_(n_agents), cells_(static_cast<std::size_t>(n_agents) * n_agents,
                             PiecewiseConstantSignal::constant(1.0)) {
    if (n_agents < 1) throw std::invalid_argument("ScheduleMatrix: need at least one agent");
  }

  static ScheduleMatrix all_ones(int n_agents) { return ScheduleMatrix(n_agents); }

  int size() const { return n_; }

  const PiecewiseConstantSignal& at(int i, int j) const {
    check_index(i, j);
    return cells_[idx(i, j)];
  }

  void set(int i, int j, PiecewiseConstantSignal signal) {
    check_index(i, j);
    if (i == j)
      throw std::invalid_argument("ScheduleMatrix: diagonal is fixed to the constant 1 signal");
    cells_[idx(i, j)] = std::move(signal);
  }

  double value(int i, int j, double t) const { return at(i, j).value_at(t); }

  /// Every breakpoint occurrence (periodic extension included) of every
  /// non-constant cell within [0, t_end]. Sorted, exact duplicates removed.
  std::vector<double> breakpoint_times(double t_end) const {
    std::vector<double> times;
    for (const auto& cell : cells_) {
      if (cell.is_constant()) continue;  // no discontinuity, ever
      const double h = cell.horizon();
      for (std::int64_t m = 0;; ++m) {
        const double base = static_cast<double>(m) * h;
        if (base > t_end) break;
        for (double b : cell.breakpoints()) {
          const double occurrence = base + b;
          if (occurrence <= t_end) times.push_back(occurrence);
        }
      }
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j);
  }
  void check_index(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
      throw std::out_of_range("ScheduleMatrix: index out of range");
  }

  int n_;
  std::vector<PiecewiseConstantSignal> cells_;
};

namespace detail {

/// Comparison slack for service-level checks: window integrals are exact
/// up to floating-point rounding, so validators grant one part in 1e12.
inline double service_slack(double mu) { return 1e-12 * (1.0 + mu); }

struct WindowInfimum {
  double t = 0.0;
  double value = 0.0;
};

/// Infimum over t of the window integral of a periodic piecewise-constant
/// signal. The window integral is piecewise linear in t with kinks only
/// where t or t + window crosses a breakpoint, so the infimum over one
/// period is attained on the candidate set below; the uniform grid guards
/// externally supplied signals.
inline WindowInfimum window_infimum(const PiecewiseConstantSignal& signal, double window,
                                    double grid_step) {
  const double period = signal.horizon();
  std::vector<double> candidates;
  const auto fold = [&](double t) {
    double r = std::fmod(t, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;
    return r;
  };
  for (double b : signal.breakpoints()) {
    candidates.push_back(b);
    candidates.push_back(fold(b - window));
  }
  if (grid_step > 0.0)
    for (double t = 0.0; t < period; t += grid_step) candidates.push_back(t);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  WindowInfimum worst{0.0, signal.window_integral(0.0, window)};
  for (double t : candidates) {
    const double value = signal.window_integral(t, window);
    if (value < worst.value) worst = {t, value};
  }
  return worst;
}

inline double default_grid_step(double window, double grid_step) {
  return grid_step > 0.0 ? grid_step : window / 1000.0;
}

}  // namespace detail

struct PeCheck {
  bool holds = false;
  double worst_t = 0.0;
  double worst_value = 0.0;
};

/// Does every sliding window [t, t + window] carry at least `service`
/// integrated weight? Reports the worst window found.
inline PeCheck validate_pe(const PiecewiseConstantSignal& signal, double window, double service,
                           double grid_step = 0.0) {
  if (!(window > 0.0)) throw std::invalid_argument("validate_pe: window must be positive");
  const auto worst =
      detail::window_infimum(signal, window, detail::default_grid_step(window, grid_step));
  return {worst.value >= service - detail::service_slack(service), worst.t, worst.value};
}

struct IscPairWitness {
  int i = 0;
  int j = 0;
  int hub = -1;  // -1 when no hub serves the pair
};

struct IscCheck {
  bool holds = false;
  std::vector<IscPairWitness> witnesses;
};

/// Scrambling check: for every unordered pair (i, j) there must be one
/// fixed hub k whose links M(i, k) and M(j, k) both clear the service
/// level on every window. The hub is fixed per pair across all t, which is
/// why the per-link window infima decide the question.
inline IscCheck validate_isc(const ScheduleMatrix& matrix, double window, double service,
                             double grid_step = 0.0) {
  if (!(window > 0.0)) throw std::invalid_argument("validate_isc: window must be positive");
  const int n = matrix.size();
  const double step = detail::default_grid_step(window, grid_step);
  const double slack = detail::service_slack(service);

  std::vector<double> link_inf(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      link_inf[static_cast<std::size_t>(i) * n + j] =
          detail::window_infimum(matrix.at(i, j), window, step).value;

  const auto served = [&](int a, int k) {
    return link_inf[static_cast<std::size_t>(a) * n + k] >= service - slack;
  };

  IscCheck out;
  out.holds = true;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      IscPairWitness witness{i, j, -1};
      for (int k = 0; k < n; ++k) {
        if (served(i, k) && served(j, k)) {
          witness.hub = k;
          break;
        }
      }
      if (witness.hub < 0) out.holds = false;
      out.witnesses.push_back(witness);
    }
  }
  return out;
}

/// Period-T square wave delivering exactly `service` per period. When the
/// on-block fits contiguously inside the period and service <= window / 2,
/// the wave is emitted with its on-block starting at duty_phase * window;
/// otherwise the constant service/window signal (which meets the service
/// level with equality on every window) is returned.
inline PiecewiseConstantSignal gen_square_pe(double window, double service,
                                             double duty_phase = 0.0) {
  if (!(window > 0.0) || !std::isfinite(window))
    throw std::invalid_argument("gen_square_pe: window must be positive");
  if (!(service > 0.0) || service > window)
    throw std::invalid_argument("gen_square_pe: need 0 < service <= window");
  if (!(duty_phase >= 0.0 && duty_phase < 1.0))
    throw std::invalid_argument("gen_square_pe: duty_phase must lie in [0, 1)");

  const double start = duty_phase * window;
  const double stop = start + service;
  if (service <= 0.5 * window && stop <= window) {
    if (start == 0.0)
      return PiecewiseConstantSignal({0.0, service}, {1.0, 0.0}, window);
    if (stop == window)
      return PiecewiseConstantSignal({0.0, start}, {0.0, 1.0}, window);
    return PiecewiseConstantSignal({0.0, start, stop}, {0.0, 1.0, 0.0}, window);
  }
  return PiecewiseConstantSignal::constant(service / window, window);
}

/// Star topology: both links between the hub and every other agent carry a
/// square wave meeting the service level; all remaining links are dead.
/// The scrambling condition then holds with the hub serving every pair,
/// while per-link persistent excitation fails for every non-hub pair.
inline ScheduleMatrix gen_isc_star(int n_agents, double window, double service, int hub,
                                   std::uint64_t seed) {
  if (n_agents < 2) throw std::invalid_argument("gen_isc_star: need at least two agents");
  if (hub < 0 || hub >= n_agents) throw std::invalid_argument("gen_isc_star: hub out of range");
  if (!(service > 0.0) || service > window)
    throw std::invalid_argument("gen_isc_star: need 0 < service <= window");

  Rng rng(seed);
  const double max_phase = std::max(0.0, 1.0 - service / window);
  ScheduleMatrix matrix(n_agents);
  const auto dead = PiecewiseConstantSignal::constant(0.0, window);
  for (int i = 0; i < n_agents; ++i) {
    for (int j = 0; j < n_agents; ++j) {
      if (i == j) continue;
      if (i == hub || j == hub)
        matrix.set(i, j, gen_square_pe(window, service, rng.uniform(0.0, max_phase)));
      else
        matrix.set(i, j, dead);
    }
  }
  return matrix;
}

}  // namespace swarmcert
