#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmcert/io.hpp"
#include "swarmcert/kernel.hpp"
#include "swarmcert/rng.hpp"
#include "swarmcert/schedule.hpp"
#include "swarmcert/types.hpp"

namespace swarmcert {

/// Anything wrong with an experiment description: malformed JSON, missing
/// fields, broken invariants, unreadable referenced files.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputPaths {
  std::string trajectory_csv = "trajectory.csv";
  std::string metrics_csv = "metrics.csv";
  std::string report_json = "report.json";
  std::string window_integral_csv;  // empty: skip the diagnostic dump
};

struct ScheduleSpec {
  enum class Kind { full, inline_entries, file, pe_square, isc_star };
  Kind kind = Kind::full;
  nlohmann::json entries;
  std::string path;
  double duty_phase = -1.0;  // < 0: randomize per link (seed required)
  int hub = 0;               // 0-based
  std::uint64_t seed = 0;
  bool has_seed = false;
};

struct InitialStateSpec {
  enum class Kind { explicit_rows, random_box };
  Kind kind = Kind::explicit_rows;
  std::vector<std::vector<double>> positions;
  std::vector<std::vector<double>> velocities;
  std::vector<double> low, high, velocity_low, velocity_high;
  std::uint64_t seed = 0;
  bool has_seed = false;
  bool second_order = false;
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                           const char* where) {
  const auto it = j.find(key);
  if (it == j.end())
    throw config_error(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

inline std::vector<double> box_edge(const nlohmann::json& j, int dim, const char* what) {
  std::vector<double> edge;
  if (j.is_number()) {
    edge.assign(static_cast<std::size_t>(dim), j.get<double>());
  } else {
    edge = j.get<std::vector<double>>();
    if (edge.size() != static_cast<std::size_t>(dim))
      throw config_error(std::string("initial_state: '") + what + "' must have one entry per dimension");
  }
  return edge;
}

}  // namespace detail

struct ExperimentConfig {
  SystemConfig system;
  InteractionKernel kernel = InteractionKernel::constant(1.0);
  ScheduleSpec schedule;
  InitialStateSpec initial;
  double horizon = 1.0;
  double step = 0.0;  // <= 0: default to window / 1000
  OutputPaths outputs;
  std::string config_hash;
  std::string base_dir = ".";

  double effective_step() const { return step > 0.0 ? step : 1e-3 * system.window; }
  bool second_order() const { return initial.second_order; }

  static ExperimentConfig load_file(const std::string& path);
  static ExperimentConfig parse(const nlohmann::json& j, std::string base_dir,
                                std::string hash);

  ScheduleMatrix build_schedule() const;
  FirstOrderState build_first_order() const;
  SecondOrderState build_second_order() const;
};

inline InteractionKernel kernel_from_json(const nlohmann::json& j) {
  const std::string family = detail::require_field(j, "family", "kernel").get<std::string>();
  InteractionKernel kernel = InteractionKernel::constant(1.0);
  try {
    if (family == "constant") {
      kernel = InteractionKernel::constant(detail::require_field(j, "c", "kernel").get<double>());
    } else if (family == "powerlaw") {
      kernel = InteractionKernel::power_law(detail::require_field(j, "c", "kernel").get<double>(),
                                            detail::require_field(j, "beta", "kernel").get<double>());
    } else if (family == "tabulated") {
      kernel = InteractionKernel::tabulated(
          detail::require_field(j, "breakpoints", "kernel").get<std::vector<double>>(),
          detail::require_field(j, "values", "kernel").get<std::vector<double>>());
    } else {
      throw config_error("kernel: unknown family '" + family + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("kernel: ") + e.what());
  }
  if (j.contains("lipschitz_hint")) kernel.lipschitz_hint = j["lipschitz_hint"].get<double>();
  return kernel;
}

inline ExperimentConfig ExperimentConfig::parse(const nlohmann::json& j, std::string base_dir,
                                                std::string hash) {
  ExperimentConfig cfg;
  cfg.base_dir = std::move(base_dir);
  cfg.config_hash = std::move(hash);

  const auto& sys = detail::require_field(j, "system", "config");
  cfg.system.n_agents = detail::require_field(sys, "n_agents", "system").get<int>();
  cfg.system.dim = detail::require_field(sys, "dim", "system").get<int>();
  const std::string scaling = detail::require_field(sys, "scaling", "system").get<std::string>();
  if (scaling == "fixed")
    cfg.system.scaling = ScalingMode::fixed;
  else if (scaling == "normalized")
    cfg.system.scaling = ScalingMode::normalized;
  else
    throw config_error("system: scaling must be 'fixed' or 'normalized'");
  const std::string condition =
      detail::require_field(sys, "condition", "system").get<std::string>();
  if (condition == "pe")
    cfg.system.condition = Condition::pe;
  else if (condition == "isc")
    cfg.system.condition = Condition::isc;
  else
    throw config_error("system: condition must be 'pe' or 'isc'");
  cfg.system.window = detail::require_field(sys, "window", "system").get<double>();
  cfg.system.service = detail::require_field(sys, "service", "system").get<double>();
  try {
    cfg.system.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }

  cfg.kernel = kernel_from_json(detail::require_field(j, "kernel", "config"));

  const auto& sched = detail::require_field(j, "schedule", "config");
  const std::string kind = detail::require_field(sched, "kind", "schedule").get<std::string>();
  if (kind == "full") {
    cfg.schedule.kind = ScheduleSpec::Kind::full;
  } else if (kind == "inline") {
    cfg.schedule.kind = ScheduleSpec::Kind::inline_entries;
    cfg.schedule.entries = detail::require_field(sched, "entries", "schedule");
  } else if (kind == "file") {
    cfg.schedule.kind = ScheduleSpec::Kind::file;
    cfg.schedule.path = detail::require_field(sched, "path", "schedule").get<std::string>();
  } else if (kind == "generator") {
    const std::string gen =
        detail::require_field(sched, "generator", "schedule").get<std::string>();
    if (sched.contains("seed")) {
      cfg.schedule.seed = sched["seed"].get<std::uint64_t>();
      cfg.schedule.has_seed = true;
    }
    if (gen == "pe-square") {
      cfg.schedule.kind = ScheduleSpec::Kind::pe_square;
      if (sched.contains("duty_phase")) {
        cfg.schedule.duty_phase = sched["duty_phase"].get<double>();
        if (!(cfg.schedule.duty_phase >= 0.0 && cfg.schedule.duty_phase < 1.0))
          throw config_error("schedule: duty_phase must lie in [0, 1)");
      } else if (!cfg.schedule.has_seed) {
        throw config_error("schedule: pe-square with random phases requires a seed");
      }
    } else if (gen == "isc-star") {
      cfg.schedule.kind = ScheduleSpec::Kind::isc_star;
      const int hub = detail::require_field(sched, "hub", "schedule").get<int>();
      if (hub < 1 || hub > cfg.system.n_agents)
        throw config_error("schedule: hub must lie in [1, n_agents]");
      cfg.schedule.hub = hub - 1;
      if (!cfg.schedule.has_seed)
        throw config_error("schedule: isc-star requires a seed");
    } else {
      throw config_error("schedule: unknown generator '" + gen + "'");
    }
  } else {
    throw config_error("schedule: unknown kind '" + kind + "'");
  }

  const auto& init = detail::require_field(j, "initial_state", "config");
  const std::string ikind = detail::require_field(init, "kind", "initial_state").get<std::string>();
  if (ikind == "explicit") {
    cfg.initial.kind = InitialStateSpec::Kind::explicit_rows;
    cfg.initial.positions = detail::require_field(init, "positions", "initial_state")
                                .get<std::vector<std::vector<double>>>();
    if (init.contains("velocities")) {
      cfg.initial.velocities = init["velocities"].get<std::vector<std::vector<double>>>();
      cfg.initial.second_order = true;
    }
  } else if (ikind == "random-box") {
    cfg.initial.kind = InitialStateSpec::Kind::random_box;
    cfg.initial.low =
        detail::box_edge(detail::require_field(init, "low", "initial_state"), cfg.system.dim, "low");
    cfg.initial.high = detail::box_edge(detail::require_field(init, "high", "initial_state"),
                                        cfg.system.dim, "high");
    if (!init.contains("seed"))
      throw config_error("initial_state: random-box requires a seed");
    cfg.initial.seed = init["seed"].get<std::uint64_t>();
    cfg.initial.has_seed = true;
    if (init.contains("velocity_low") != init.contains("velocity_high"))
      throw config_error("initial_state: velocity_low and velocity_high come together");
    if (init.contains("velocity_low")) {
      cfg.initial.velocity_low =
          detail::box_edge(init["velocity_low"], cfg.system.dim, "velocity_low");
      cfg.initial.velocity_high =
          detail::box_edge(init["velocity_high"], cfg.system.dim, "velocity_high");
      cfg.initial.second_order = true;
    }
    for (int k = 0; k < cfg.system.dim; ++k) {
      if (cfg.initial.low[k] > cfg.initial.high[k])
        throw config_error("initial_state: low exceeds high");
      if (cfg.initial.second_order &&
          cfg.initial.velocity_low[k] > cfg.initial.velocity_high[k])
        throw config_error("initial_state: velocity_low exceeds velocity_high");
    }
  } else {
    throw config_error("initial_state: unknown kind '" + ikind + "'");
  }

  cfg.horizon = detail::require_field(j, "horizon", "config").get<double>();
  if (!(cfg.horizon > 0.0)) throw config_error("config: horizon must be positive");
  if (j.contains("step")) {
    cfg.step = j["step"].get<double>();
    if (!(cfg.step > 0.0)) throw config_error("config: step must be positive");
  }

  if (j.contains("outputs")) {
    const auto& out = j["outputs"];
    if (out.contains("trajectory_csv"))
      cfg.outputs.trajectory_csv = out["trajectory_csv"].get<std::string>();
    if (out.contains("metrics_csv")) cfg.outputs.metrics_csv = out["metrics_csv"].get<std::string>();
    if (out.contains("report_json")) cfg.outputs.report_json = out["report_json"].get<std::string>();
    if (out.contains("window_integral_csv"))
      cfg.outputs.window_integral_csv = out["window_integral_csv"].get<std::string>();
  }
  return cfg;
}

inline ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  try {
    return parse(j, std::filesystem::path(path).parent_path().string(), file_hash_hex(path));
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config field error: ") + e.what());
  }
}

inline ScheduleMatrix ExperimentConfig::build_schedule() const {
  const int n = system.n_agents;
  switch (schedule.kind) {
    case ScheduleSpec::Kind::full:
      return ScheduleMatrix::all_ones(n);
    case ScheduleSpec::Kind::inline_entries:
      try {
        return schedule_from_json(schedule.entries, n);
      } catch (const std::exception& e) {
        throw config_error(std::string("schedule: ") + e.what());
      }
    case ScheduleSpec::Kind::file: {
      const auto resolved =
          std::filesystem::path(base_dir).empty()
              ? std::filesystem::path(schedule.path)
              : std::filesystem::path(base_dir) / schedule.path;
      if (!std::filesystem::exists(resolved))
        throw config_error("schedule file not found: " + resolved.string());
      try {
        return read_schedule_json(resolved.string(), n);
      } catch (const std::exception& e) {
        throw config_error(std::string("schedule: ") + e.what());
      }
    }
    case ScheduleSpec::Kind::pe_square: {
      ScheduleMatrix matrix(n);
      Rng rng(schedule.seed);
      const double max_phase = std::max(0.0, 1.0 - system.service / system.window);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const double phase =
              schedule.duty_phase >= 0.0 ? schedule.duty_phase : rng.uniform(0.0, max_phase);
          matrix.set(i, j, gen_square_pe(system.window, system.service, phase));
        }
      }
      return matrix;
    }
    case ScheduleSpec::Kind::isc_star:
      return gen_isc_star(n, system.window, system.service, schedule.hub, schedule.seed);
  }
  throw config_error("schedule: unhandled kind");
}

inline FirstOrderState ExperimentConfig::build_first_order() const {
  if (initial.kind == InitialStateSpec::Kind::explicit_rows) {
    StateMatrix m;
    try {
      m = StateMatrix::from_rows(initial.positions);
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("initial_state: ") + e.what());
    }
    if (m.rows() != static_cast<std::size_t>(system.n_agents) ||
        m.cols() != static_cast<std::size_t>(system.dim))
      throw config_error("initial_state: positions shape disagrees with system");
    return {std::move(m)};
  }
  Rng rng(initial.seed);
  StateMatrix m(static_cast<std::size_t>(system.n_agents), static_cast<std::size_t>(system.dim));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k)
      m(i, k) = rng.uniform(initial.low[k], initial.high[k]);
  return {std::move(m)};
}

inline SecondOrderState ExperimentConfig::build_second_order() const {
  if (!initial.second_order)
    throw config_error("initial_state: no velocity data for a second-order run");
  if (initial.kind == InitialStateSpec::Kind::explicit_rows) {
    StateMatrix x, v;
    try {
      x = StateMatrix::from_rows(initial.positions);
      v = StateMatrix::from_rows(initial.velocities);
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("initial_state: ") + e.what());
    }
    if (x.rows() != static_cast<std::size_t>(system.n_agents) ||
        x.cols() != static_cast<std::size_t>(system.dim) || v.rows() != x.rows() ||
        v.cols() != x.cols())
      throw config_error("initial_state: state shape disagrees with system");
    return {std::move(x), std::move(v)};
  }
  Rng rng(initial.seed);
  StateMatrix x(static_cast<std::size_t>(system.n_agents), static_cast<std::size_t>(system.dim));
  StateMatrix v = x;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k)
      x(i, k) = rng.uniform(initial.low[k], initial.high[k]);
  for (std::size_t i = 0; i < v.rows(); ++i)
    for (std::size_t k = 0; k < v.cols(); ++k)
      v(i, k) = rng.uniform(initial.velocity_low[k], initial.velocity_high[k]);
  return {std::move(x), std::move(v)};
}

}  // namespace swarmcert
