// Experiment runner: simulate trajectories, verify the certified decay
// bounds against them, test flocking certificates, and generate service
// schedules.
//
// Exit codes: 0 ok, 1 verification failed, 2 config error, 3 numeric failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "swarmcert/swarmcert.hpp"

namespace {

namespace fs = std::filesystem;
using namespace swarmcert;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericFailure = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  double step_override = 0.0;
  std::int64_t seed_override = -1;
};

std::string resolve_output(const std::string& out_dir, const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return name;
  return (fs::path(out_dir) / p).string();
}

ExperimentConfig load_config(const CommonOptions& opts) {
  auto cfg = ExperimentConfig::load_file(opts.config_path);
  if (opts.step_override > 0.0) cfg.step = opts.step_override;
  if (opts.seed_override >= 0) {
    const auto seed = static_cast<std::uint64_t>(opts.seed_override);
    cfg.schedule.seed = seed;
    cfg.schedule.has_seed = true;
    cfg.initial.seed = seed;
    cfg.initial.has_seed = true;
  }
  return cfg;
}

void print_report_summary(const VerificationReport& report) {
  if (!report.premise_valid) {
    std::cout << "premise: INVALID (" << report.premise_note << ")\n";
    return;
  }
  std::cout << "premise: valid  gamma_tilde=" << report.gamma_tilde << " gamma=" << report.gamma
            << " eta=" << report.eta << "\n";
  for (const auto& c : report.checks)
    std::cout << (c.pass ? "  [ok]   " : "  [FAIL] ") << c.name << "  empirical="
              << c.empirical_value << " bound=" << c.theoretical_bound << "\n";
  if (report.flocking) {
    const auto& f = *report.flocking;
    std::cout << "flocking: classification=" << tail_class_name(f.classification)
              << " guaranteed=" << (f.guaranteed ? "true" : "false");
    if (f.simulated)
      std::cout << " max_dx=" << f.max_dx << " final_dv=" << f.final_dv;
    std::cout << "\n";
  }
  std::cout << (report.pass ? "overall: PASS" : "overall: FAIL") << "\n";
}

int cmd_simulate(const CommonOptions& opts) {
  const auto cfg = load_config(opts);
  const auto matrix = cfg.build_schedule();
  fs::create_directories(opts.out_dir);
  const auto stamp = [&](auto& traj) {
    traj.meta.config_hash = cfg.config_hash;
    traj.meta.seed = cfg.initial.seed;
  };
  if (cfg.second_order()) {
    auto traj = simulate(cfg.system, cfg.kernel, matrix, cfg.build_second_order(), cfg.horizon,
                         cfg.effective_step());
    stamp(traj);
    write_trajectory_csv(traj, resolve_output(opts.out_dir, cfg.outputs.trajectory_csv));
    write_metrics_csv(traj, resolve_output(opts.out_dir, cfg.outputs.metrics_csv));
  } else {
    auto traj = simulate(cfg.system, cfg.kernel, matrix, cfg.build_first_order(), cfg.horizon,
                         cfg.effective_step());
    stamp(traj);
    write_trajectory_csv(traj, resolve_output(opts.out_dir, cfg.outputs.trajectory_csv));
    write_metrics_csv(traj, resolve_output(opts.out_dir, cfg.outputs.metrics_csv));
  }
  std::cout << "wrote " << resolve_output(opts.out_dir, cfg.outputs.trajectory_csv) << " and "
            << resolve_output(opts.out_dir, cfg.outputs.metrics_csv) << "\n";
  return kExitOk;
}

int cmd_verify(const CommonOptions& opts) {
  const auto cfg = load_config(opts);
  const auto matrix = cfg.build_schedule();
  fs::create_directories(opts.out_dir);
  VerificationReport report;
  if (cfg.second_order())
    report = verify_second_order(cfg.system, cfg.kernel, matrix, cfg.build_second_order(),
                                 cfg.horizon, cfg.effective_step());
  else
    report = verify_first_order(cfg.system, cfg.kernel, matrix, cfg.build_first_order(),
                                cfg.horizon, cfg.effective_step());
  report.config_hash = cfg.config_hash;
  write_report_json(report, resolve_output(opts.out_dir, cfg.outputs.report_json));
  if (!cfg.outputs.window_integral_csv.empty())
    write_window_integral_csv(matrix, cfg.system.window,
                              resolve_output(opts.out_dir, cfg.outputs.window_integral_csv));
  print_report_summary(report);
  return (report.premise_valid && report.pass) ? kExitOk : kExitVerificationFailed;
}

int cmd_flocking(const CommonOptions& opts) {
  const auto cfg = load_config(opts);
  if (!cfg.second_order())
    throw config_error("flocking: config must describe a second-order system (velocities)");
  const auto matrix = cfg.build_schedule();
  fs::create_directories(opts.out_dir);
  auto report = verify_flocking(cfg.system, cfg.kernel, matrix, cfg.build_second_order(),
                                cfg.horizon, cfg.effective_step());
  report.config_hash = cfg.config_hash;
  write_report_json(report, resolve_output(opts.out_dir, cfg.outputs.report_json));
  print_report_summary(report);
  return (report.premise_valid && report.pass) ? kExitOk : kExitVerificationFailed;
}

struct GenOptions {
  std::string kind;
  int n_agents = 2;
  double window = 1.0;
  double service = 1.0;
  double phase = -1.0;
  int hub = 1;  // 1-based on the command line
  std::int64_t seed = 0;
  std::string out_file = "schedule.json";
};

int cmd_gen_schedule(const GenOptions& gen) {
  if (gen.service > gen.window || gen.service <= 0.0)
    throw config_error("gen-schedule: need 0 < service <= window");
  if (gen.n_agents < 2) throw config_error("gen-schedule: need at least two agents");

  ScheduleMatrix matrix(gen.n_agents);
  bool valid = false;
  if (gen.kind == "pe") {
    Rng rng(static_cast<std::uint64_t>(gen.seed));
    const double max_phase = std::max(0.0, 1.0 - gen.service / gen.window);
    for (int i = 0; i < gen.n_agents; ++i) {
      for (int j = 0; j < gen.n_agents; ++j) {
        if (i == j) continue;
        const double phase = gen.phase >= 0.0 ? gen.phase : rng.uniform(0.0, max_phase);
        matrix.set(i, j, gen_square_pe(gen.window, gen.service, phase));
      }
    }
    valid = true;
    for (int i = 0; i < gen.n_agents && valid; ++i)
      for (int j = 0; j < gen.n_agents && valid; ++j)
        if (i != j) valid = validate_pe(matrix.at(i, j), gen.window, gen.service).holds;
  } else if (gen.kind == "isc-star") {
    if (gen.hub < 1 || gen.hub > gen.n_agents)
      throw config_error("gen-schedule: hub must lie in [1, n_agents]");
    matrix = gen_isc_star(gen.n_agents, gen.window, gen.service, gen.hub - 1,
                          static_cast<std::uint64_t>(gen.seed));
    valid = validate_isc(matrix, gen.window, gen.service).holds;
  } else {
    throw config_error("gen-schedule: kind must be 'pe' or 'isc-star'");
  }

  if (!valid) {
    std::cerr << "generated schedule failed its own validator; refusing to write\n";
    return kExitVerificationFailed;
  }
  write_schedule_json(matrix, gen.out_file);
  std::cout << "wrote " << gen.out_file << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consensus/flocking simulator and bound verifier"};
  app.require_subcommand(1);

  CommonOptions opts;
  GenOptions gen;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", opts.config_path, "experiment config JSON")->required();
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--step", opts.step_override, "override the integration step");
    sub->add_option("--seed", opts.seed_override, "override all seeds");
  };

  auto* sim = app.add_subcommand("simulate", "integrate the system and dump trajectory/metrics");
  add_common(sim, true);
  auto* ver = app.add_subcommand("verify", "check the certified decay bounds against a run");
  add_common(ver, true);
  auto* flock = app.add_subcommand("flocking", "evaluate the flocking certificate");
  add_common(flock, true);

  auto* gsch = app.add_subcommand("gen-schedule", "generate a service schedule file");
  gsch->add_option("--kind", gen.kind, "pe | isc-star")->required();
  gsch->add_option("--agents", gen.n_agents, "number of agents")->required();
  gsch->add_option("--window", gen.window, "window length T")->required();
  gsch->add_option("--service", gen.service, "service level mu")->required();
  gsch->add_option("--phase", gen.phase, "duty phase in [0,1); omit for seeded random phases");
  gsch->add_option("--hub", gen.hub, "hub agent (1-based, isc-star only)");
  gsch->add_option("--seed", gen.seed, "seed for random phases");
  gsch->add_option("--out-file", gen.out_file, "output schedule path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(opts);
    if (ver->parsed()) return cmd_verify(opts);
    if (flock->parsed()) return cmd_flocking(opts);
    if (gsch->parsed()) return cmd_gen_schedule(gen);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const simulation_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumericFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
