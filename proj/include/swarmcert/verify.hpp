#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "swarmcert/integrator.hpp"
#include "swarmcert/metrics.hpp"
#include "swarmcert/schedule.hpp"
#include "swarmcert/theory.hpp"

namespace swarmcert {

struct CheckRecord {
  std::string name;
  double theoretical_bound = 0.0;
  double empirical_value = 0.0;
  double margin = 0.0;  // theoretical - empirical for upper bounds
  bool pass = false;
};

struct FlockingReport {
  TailClass classification = TailClass::inconclusive;
  double integral_value = 0.0;
  bool guaranteed = false;
  bool simulated = false;
  double max_dx = 0.0;
  double final_dv = 0.0;
  double late_growth = 0.0;  // D_X growth over the last 40% of the horizon
  bool empirical_ok = true;
};

struct VerificationReport {
  std::string config_hash;
  Condition condition = Condition::pe;
  ScalingMode scaling = ScalingMode::fixed;
  bool premise_valid = true;
  std::string premise_note;
  double gamma_tilde = 0.0;
  double gamma = 0.0;
  int eta = 1;
  std::vector<double> rate_sequence;
  std::vector<CheckRecord> checks;
  std::optional<FlockingReport> flocking;
  bool pass = false;
};

/// Does the schedule actually satisfy the declared service condition?
/// Bounds are only asserted on a valid premise.
inline bool schedule_meets_condition(Condition condition, const ScheduleMatrix& matrix,
                                     double window, double service,
                                     std::string* note = nullptr) {
  if (condition == Condition::pe) {
    for (int i = 0; i < matrix.size(); ++i) {
      for (int j = 0; j < matrix.size(); ++j) {
        if (i == j) continue;
        const auto check = validate_pe(matrix.at(i, j), window, service);
        if (!check.holds) {
          if (note)
            *note = "link (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                    ") fails PE: worst window integral " + std::to_string(check.worst_value);
          return false;
        }
      }
    }
    return true;
  }
  const auto check = validate_isc(matrix, window, service);
  if (!check.holds && note) {
    for (const auto& w : check.witnesses) {
      if (w.hub < 0) {
        *note = "pair (" + std::to_string(w.i + 1) + "," + std::to_string(w.j + 1) +
                ") has no serving hub";
        break;
      }
    }
  }
  return check.holds;
}

namespace detail {

inline int window_count(double horizon, double window) {
  return static_cast<int>(std::floor(horizon / window + 1e-9));
}

}  // namespace detail

/// Simulates the first-order system and checks the certified geometric
/// diameter decay D(nT) <= (1 - gamma)^n D(0) at every whole window, with
/// slack 1e-7 * D(0).
inline VerificationReport verify_first_order(const SystemConfig& config,
                                             const InteractionKernel& kernel,
                                             const ScheduleMatrix& matrix,
                                             const FirstOrderState& initial, double horizon,
                                             double h) {
  VerificationReport report;
  report.condition = config.condition;
  report.scaling = config.scaling;
  if (!schedule_meets_condition(config.condition, matrix, config.window, config.service,
                                &report.premise_note)) {
    report.premise_valid = false;
    return report;
  }

  const double d0 = diameter(initial.positions);
  const auto bounds = kernel_bounds(kernel, config.scaling, d0);
  const auto cc = contraction_factor(config.condition, config.n_agents, config.window,
                                     config.service, bounds.k_min, bounds.k_max);
  report.gamma_tilde = cc.gamma_tilde;
  report.gamma = cc.gamma;
  report.eta = cc.eta;

  const auto trajectory = simulate(config, kernel, matrix, initial, horizon, h);
  const double tol = 1e-7 * d0;
  report.pass = true;
  for (int n = 0; n <= detail::window_count(horizon, config.window); ++n) {
    const double t = static_cast<double>(n) * config.window;
    const double empirical = diameter(trajectory.state_nearest(t).positions);
    const double theoretical = rate_bound(cc, d0, n);
    CheckRecord rec;
    rec.name = "D(" + std::to_string(n) + "T)";
    rec.theoretical_bound = theoretical;
    rec.empirical_value = empirical;
    rec.margin = theoretical - empirical;
    rec.pass = empirical <= theoretical + tol;
    report.pass = report.pass && rec.pass;
    report.rate_sequence.push_back(theoretical);
    report.checks.push_back(std::move(rec));
  }
  return report;
}

/// Simulates the second-order system and checks, at every whole window,
/// the velocity-diameter estimate
///   D_V(nT) <= D_V(0) - (1/T) int_{D_X(0)+T D_V(0)}^{D_X(nT)+T D_V(nT)} f(phi) dx
/// plus step-level monotonicity of D_V. The kernel floor entering the
/// coefficients is taken over [0, D_X(0) + T D_V(0)].
inline VerificationReport verify_second_order(const SystemConfig& config,
                                              const InteractionKernel& kernel,
                                              const ScheduleMatrix& matrix,
                                              const SecondOrderState& initial, double horizon,
                                              double h) {
  VerificationReport report;
  report.condition = config.condition;
  report.scaling = config.scaling;
  if (!schedule_meets_condition(config.condition, matrix, config.window, config.service,
                                &report.premise_note)) {
    report.premise_valid = false;
    return report;
  }
  if (!kernel.non_increasing()) {
    report.premise_valid = false;
    report.premise_note = "velocity bounds require a non-increasing kernel";
    return report;
  }

  const double dx0 = diameter(initial.positions);
  const double dv0 = diameter(initial.velocities);
  const auto bounds = kernel_bounds(kernel, config.scaling, dx0 + config.window * dv0);
  const auto cc = contraction_factor(config.condition, config.n_agents, config.window,
                                     config.service, bounds.k_min, bounds.k_max);
  report.gamma_tilde = cc.gamma_tilde;
  report.gamma = cc.gamma;
  report.eta = cc.eta;

  const auto f_case = make_f_case(config.condition, config.scaling, kernel, config.n_agents,
                                  config.window, config.service);
  const auto trajectory = simulate(config, kernel, matrix, initial, horizon, h);
  const double tol = 1e-7 * dv0;
  report.pass = true;
  for (int n = 0; n <= detail::window_count(horizon, config.window); ++n) {
    const double t = static_cast<double>(n) * config.window;
    const auto& state = trajectory.state_nearest(t);
    const double dxn = diameter(state.positions);
    const double dvn = diameter(state.velocities);
    const double theoretical = dv_bound(f_case, kernel, dx0, dv0, dxn, dvn);
    CheckRecord rec;
    rec.name = "D_V(" + std::to_string(n) + "T)";
    rec.theoretical_bound = theoretical;
    rec.empirical_value = dvn;
    rec.margin = theoretical - dvn;
    rec.pass = dvn <= theoretical + tol;
    report.pass = report.pass && rec.pass;
    report.rate_sequence.push_back(theoretical);
    report.checks.push_back(std::move(rec));
  }

  const auto dv_series = velocity_diameter_series(trajectory);
  double worst_increase = 0.0;
  for (std::size_t k = 0; k + 1 < dv_series.size(); ++k)
    worst_increase = std::max(worst_increase, dv_series[k + 1] - dv_series[k]);
  CheckRecord mono;
  mono.name = "D_V monotone";
  mono.theoretical_bound = 0.0;
  mono.empirical_value = worst_increase;
  mono.margin = -worst_increase;
  mono.pass = worst_increase <= 1e-8;
  report.pass = report.pass && mono.pass;
  report.checks.push_back(std::move(mono));
  return report;
}

/// Flocking certificate plus an empirical boundedness probe: when the
/// certificate holds, the run must show a settled position diameter (no
/// growth beyond 1e-3 over the last 40% of the horizon).
inline VerificationReport verify_flocking(const SystemConfig& config,
                                          const InteractionKernel& kernel,
                                          const ScheduleMatrix& matrix,
                                          const SecondOrderState& initial, double horizon,
                                          double h) {
  VerificationReport report;
  report.condition = config.condition;
  report.scaling = config.scaling;
  if (!schedule_meets_condition(config.condition, matrix, config.window, config.service,
                                &report.premise_note)) {
    report.premise_valid = false;
    return report;
  }

  const double dx0 = diameter(initial.positions);
  const double dv0 = diameter(initial.velocities);
  const auto bounds = kernel_bounds(kernel, config.scaling, dx0 + config.window * dv0);
  const auto cc = contraction_factor(config.condition, config.n_agents, config.window,
                                     config.service, bounds.k_min, bounds.k_max);
  report.gamma_tilde = cc.gamma_tilde;
  report.gamma = cc.gamma;
  report.eta = cc.eta;

  const auto f_case = make_f_case(config.condition, config.scaling, kernel, config.n_agents,
                                  config.window, config.service);
  const auto check = flocking_check(f_case, kernel, dx0, dv0);

  FlockingReport flock;
  flock.classification = check.classification;
  flock.integral_value = check.integral_value;
  flock.guaranteed = check.guaranteed;

  report.pass = true;
  if (check.guaranteed) {
    const auto trajectory = simulate(config, kernel, matrix, initial, horizon, h);
    const auto dx_series = diameter_series(trajectory);
    flock.simulated = true;
    flock.max_dx = *std::max_element(dx_series.begin(), dx_series.end());
    flock.final_dv = diameter(trajectory.states.back().velocities);

    const std::size_t settle = trajectory.index_nearest(0.6 * horizon);
    double late_max = dx_series[settle];
    for (std::size_t k = settle; k < dx_series.size(); ++k)
      late_max = std::max(late_max, dx_series[k]);
    flock.late_growth = late_max - dx_series[settle];
    flock.empirical_ok = flock.late_growth <= 1e-3;
    report.pass = flock.empirical_ok;

    CheckRecord rec;
    rec.name = "D_X settled";
    rec.theoretical_bound = 1e-3;
    rec.empirical_value = flock.late_growth;
    rec.margin = 1e-3 - flock.late_growth;
    rec.pass = flock.empirical_ok;
    report.checks.push_back(std::move(rec));
  }
  report.flocking = flock;
  return report;
}

}  // namespace swarmcert
