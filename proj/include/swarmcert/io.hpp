#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmcert/schedule.hpp"
#include "swarmcert/verify.hpp"

namespace swarmcert {

/// Round-trip-exact decimal rendering for CSV cells.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string condition_name(Condition c) { return c == Condition::pe ? "pe" : "isc"; }
inline std::string scaling_name(ScalingMode s) {
  return s == ScalingMode::fixed ? "fixed" : "normalized";
}
inline std::string tail_class_name(TailClass t) {
  switch (t) {
    case TailClass::divergent: return "divergent";
    case TailClass::convergent: return "convergent";
    case TailClass::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

/// FNV-1a over the raw bytes of a file; the hash embedded in reports.
inline std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
  std::uint64_t hash = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

// ---------------------------------------------------------------------------
// Schedule files. On disk agents are 1-based; pairs absent from the file
// default to the constant-one signal; the diagonal is implicit.
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json schedule_to_json(const ScheduleMatrix& matrix) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (int i = 0; i < matrix.size(); ++i) {
    for (int j = 0; j < matrix.size(); ++j) {
      if (i == j) continue;
      const auto& cell = matrix.at(i, j);
      nlohmann::ordered_json e;
      e["i"] = i + 1;
      e["j"] = j + 1;
      e["breakpoints"] = cell.breakpoints();
      e["values"] = cell.values();
      e["horizon"] = cell.horizon();
      entries.push_back(std::move(e));
    }
  }
  return entries;
}

inline ScheduleMatrix schedule_from_json(const nlohmann::json& entries, int n_agents) {
  if (!entries.is_array()) throw std::invalid_argument("schedule: expected a JSON array");
  ScheduleMatrix matrix(n_agents);
  for (const auto& e : entries) {
    const int i = e.at("i").get<int>();
    const int j = e.at("j").get<int>();
    if (i < 1 || j < 1 || i > n_agents || j > n_agents)
      throw std::invalid_argument("schedule: agent index out of range");
    if (i == j) throw std::invalid_argument("schedule: diagonal entries are implicit");
    matrix.set(i - 1, j - 1,
               PiecewiseConstantSignal(e.at("breakpoints").get<std::vector<double>>(),
                                       e.at("values").get<std::vector<double>>(),
                                       e.at("horizon").get<double>()));
  }
  return matrix;
}

inline void write_schedule_json(const ScheduleMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write schedule file: " + path);
  out << schedule_to_json(matrix).dump(2) << "\n";
}

inline ScheduleMatrix read_schedule_json(const std::string& path, int n_agents) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read schedule file: " + path);
  nlohmann::json j;
  in >> j;
  return schedule_from_json(j, n_agents);
}

// ---------------------------------------------------------------------------
// CSV outputs. Agent indices are 1-based to match the schedule files.
// ---------------------------------------------------------------------------

inline void write_trajectory_csv(const Trajectory<FirstOrderState>& trajectory,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trajectory file: " + path);
  const std::size_t d = trajectory.states.front().positions.cols();
  out << "t,agent_index";
  for (std::size_t k = 0; k < d; ++k) out << ",x_" << (k + 1);
  out << "\n";
  for (std::size_t s = 0; s < trajectory.size(); ++s) {
    const auto& pos = trajectory.states[s].positions;
    for (std::size_t i = 0; i < pos.rows(); ++i) {
      out << format_double(trajectory.times[s]) << "," << (i + 1);
      for (std::size_t k = 0; k < d; ++k) out << "," << format_double(pos(i, k));
      out << "\n";
    }
  }
}

inline void write_trajectory_csv(const Trajectory<SecondOrderState>& trajectory,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trajectory file: " + path);
  const std::size_t d = trajectory.states.front().positions.cols();
  out << "t,agent_index";
  for (std::size_t k = 0; k < d; ++k) out << ",x_" << (k + 1);
  for (std::size_t k = 0; k < d; ++k) out << ",v_" << (k + 1);
  out << "\n";
  for (std::size_t s = 0; s < trajectory.size(); ++s) {
    const auto& pos = trajectory.states[s].positions;
    const auto& vel = trajectory.states[s].velocities;
    for (std::size_t i = 0; i < pos.rows(); ++i) {
      out << format_double(trajectory.times[s]) << "," << (i + 1);
      for (std::size_t k = 0; k < d; ++k) out << "," << format_double(pos(i, k));
      for (std::size_t k = 0; k < d; ++k) out << "," << format_double(vel(i, k));
      out << "\n";
    }
  }
}

inline void write_metrics_csv(const Trajectory<FirstOrderState>& trajectory,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics file: " + path);
  out << "t,diameter,gamma_max\n";
  for (std::size_t s = 0; s < trajectory.size(); ++s) {
    const auto& pos = trajectory.states[s].positions;
    out << format_double(trajectory.times[s]) << "," << format_double(diameter(pos)) << ","
        << format_double(gamma_extrema(pos).gamma_max) << "\n";
  }
}

inline void write_metrics_csv(const Trajectory<SecondOrderState>& trajectory,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metrics file: " + path);
  out << "t,diameter,D_X,D_V,gamma_max\n";
  for (std::size_t s = 0; s < trajectory.size(); ++s) {
    const auto& state = trajectory.states[s];
    const double dx = diameter(state.positions);
    out << format_double(trajectory.times[s]) << "," << format_double(dx) << ","
        << format_double(dx) << "," << format_double(diameter(state.velocities)) << ","
        << format_double(gamma_extrema(state.positions).gamma_max) << "\n";
  }
}

/// Sliding-window service diagnostics: one block per off-diagonal link,
/// sampling the window integral across one period of the link's signal.
inline void write_window_integral_csv(const ScheduleMatrix& matrix, double window,
                                      const std::string& path, int samples_per_period = 100) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write window-integral file: " + path);
  out << "t,i,j,integral\n";
  for (int i = 0; i < matrix.size(); ++i) {
    for (int j = 0; j < matrix.size(); ++j) {
      if (i == j) continue;
      const auto& cell = matrix.at(i, j);
      const double period = cell.horizon();
      for (int s = 0; s < samples_per_period; ++s) {
        const double t = period * static_cast<double>(s) / samples_per_period;
        out << format_double(t) << "," << (i + 1) << "," << (j + 1) << ","
            << format_double(cell.window_integral(t, window)) << "\n";
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Verification reports.
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json report_to_json(const VerificationReport& report) {
  nlohmann::ordered_json j;
  j["config_hash"] = report.config_hash;
  j["condition"] = condition_name(report.condition);
  j["scaling"] = scaling_name(report.scaling);
  j["premise_valid"] = report.premise_valid;
  j["premise_note"] = report.premise_note;
  j["gamma_tilde"] = report.gamma_tilde;
  j["gamma"] = report.gamma;
  j["eta"] = report.eta;
  j["rate_sequence"] = report.rate_sequence;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json rec;
    rec["name"] = c.name;
    rec["theoretical_bound"] = c.theoretical_bound;
    rec["empirical_value"] = c.empirical_value;
    rec["margin"] = c.margin;
    rec["pass"] = c.pass;
    checks.push_back(std::move(rec));
  }
  j["checks"] = std::move(checks);
  if (report.flocking) {
    nlohmann::ordered_json f;
    f["classification"] = tail_class_name(report.flocking->classification);
    f["integral"] = report.flocking->integral_value;
    f["guaranteed"] = report.flocking->guaranteed;
    f["simulated"] = report.flocking->simulated;
    f["max_dx"] = report.flocking->max_dx;
    f["final_dv"] = report.flocking->final_dv;
    f["late_growth"] = report.flocking->late_growth;
    f["empirical_ok"] = report.flocking->empirical_ok;
    j["flocking"] = std::move(f);
  }
  j["pass"] = report.pass;
  return j;
}

inline void write_report_json(const VerificationReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report file: " + path);
  out << report_to_json(report).dump(2) << "\n";
}

}  // namespace swarmcert
