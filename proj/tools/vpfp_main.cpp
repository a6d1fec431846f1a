// vpfp: command-line driver for the low-rank VPFP solver and its studies.

#include "vpfp/artifacts.hpp"
#include "vpfp/config.hpp"
#include "vpfp/scenarios.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace vpfp;

namespace {

struct Flags {
  std::string config;
  std::string scenario;
  std::optional<int> nx, nv, rank, order, levels;
  std::optional<double> dt, t_final, eps;
  std::string solver;
  std::string out;
  std::optional<long long> seed;
  bool zero_field = false;
  bool no_transport = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value config file (or a run manifest)");
  cmd->add_option("--scenario", f.scenario, "noneq | eq | ap | mixed | bump");
  cmd->add_option("--nx", f.nx, "spatial cells");
  cmd->add_option("--nv", f.nv, "velocity cells");
  cmd->add_option("--rank", f.rank, "low-rank r");
  cmd->add_option("--dt", f.dt, "time step (coarsest ladder step for convergence)");
  cmd->add_option("--t-final", f.t_final, "final time");
  cmd->add_option("--eps", f.eps, "eps, or eps_0 for the mixed profile");
  cmd->add_option("--order", f.order, "1 or 2")->check(CLI::IsMember({1, 2}));
  cmd->add_option("--levels", f.levels, "convergence ladder runs");
  cmd->add_option("--solver", f.solver, "lowrank | full")
      ->check(CLI::IsMember({"lowrank", "full"}));
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "seed for randomized verification trials");
  cmd->add_flag("--zero-field", f.zero_field, "impose E = 0 instead of solving Poisson");
  cmd->add_flag("--no-transport", f.no_transport, "switch off the transport term");
}

// Comparison subcommands pin their scenario; the others default to `fallback`.
ScenarioConfig resolve(const Flags& f, ScenarioKind fallback, bool pinned) {
  ConfigMap file;
  if (!f.config.empty()) file = load_config_file(f.config);

  ScenarioKind kind = fallback;
  if (auto it = file.find("scenario"); it != file.end()) kind = parse_scenario(it->second);
  if (!f.scenario.empty()) kind = parse_scenario(f.scenario);
  if (pinned) kind = fallback;

  ScenarioConfig cfg = default_config(kind);
  apply_config(file, cfg);
  cfg.kind = kind;
  if (const char* env = std::getenv("VPFP_OUT"); env && *env) cfg.out_dir = env;
  if (f.nx) cfg.nx = *f.nx;
  if (f.nv) cfg.nv = *f.nv;
  if (f.rank) cfg.rank = *f.rank;
  if (f.order) cfg.order = *f.order;
  if (f.levels) cfg.levels = *f.levels;
  if (f.dt) cfg.dt = *f.dt;
  if (f.t_final) cfg.t_final = *f.t_final;
  if (f.eps) cfg.eps = *f.eps;
  if (!f.solver.empty()) cfg.solver = parse_solver(f.solver);
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.seed) {
    if (*f.seed < 0) throw ConfigError("cli", "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(*f.seed);
  }
  if (f.zero_field) cfg.zero_field = true;
  if (f.no_transport) cfg.transport = false;
  validate(cfg);
  return cfg;
}

nlohmann::json base_manifest(const std::string& command, const ScenarioConfig& cfg) {
  const PhaseGrid grid = make_grid(cfg);
  const InitialData init = build_initial(cfg, grid);
  nlohmann::json m;
  m["command"] = command;
  m["version"] = "1.0.0";
  m["config"] = to_config_map(cfg);
  m["grid"] = grid_json(grid);
  m["rank"] = cfg.rank;
  m["cfl"] = cfg.dt > 0.0 ? cfl_number(cfg.dt, grid) : 0.0;
  m["neutrality_residual"] = init.neutrality_residual;
  m["initial_field_neutrality_warning"] = solve_poisson(init.rho0, init.eta, grid).neutrality_warning;
  if (cfg.solver == SolverKind::LowRank) {
    const LowRankState st = init_from_function(init.f0, cfg.rank, grid);
    m["initial_compression_error_l1"] = norm1_xv(reconstruct(st) - init.f0, grid);
  }
  return m;
}

void warn_cfl(const ScenarioConfig& cfg) {
  const double cfl = cfg.dt > 0.0 ? cfl_number(cfg.dt, make_grid(cfg)) : 0.0;
  if (cfl > 1.0) {
    std::cerr << "warning: CFL number " << format_double(cfl)
              << " exceeds 1 for the explicit transport\n";
  }
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish(const fs::path& dir, nlohmann::json manifest, const Timer& timer) {
  manifest["elapsed_seconds"] = timer.seconds();
  write_json(dir / "manifest.json", manifest);
  write_done(dir);
}

int cmd_run(const ScenarioConfig& cfg) {
  Timer timer;
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  nlohmann::json manifest = base_manifest("run", cfg);
  write_json(dir / "manifest.json", manifest);
  warn_cfl(cfg);

  const PhaseGrid grid = make_grid(cfg);
  const InitialData init = build_initial(cfg, grid);
  Simulation sim(cfg, grid, init, cfg.solver);
  std::vector<Snapshot> snaps{take_snapshot(sim)};
  TimeSeries ap;
  ap.t.push_back(0.0);
  ap.value.push_back(sim.ap_error());
  for (double h : step_sizes(cfg.dt, cfg.t_final)) {
    sim.step(h);
    ap.t.push_back(sim.time());
    ap.value.push_back(sim.ap_error());
  }
  if (sim.time() > 0.0) snaps.push_back(take_snapshot(sim));

  write_ap_csv(dir / "ap.csv", ap);
  write_fields_csv(dir / "fields.csv", snaps, grid);
  write_phase_csv(dir / "phase.csv", snaps, grid);
  write_pointwise_ap_csv(dir / "pointwise_ap.csv", snaps, init.eps, grid);
  if (cfg.solver == SolverKind::LowRank) {
    write_lowrank_factors(dir / "factors", sim.lowrank_state(), grid, sim.time());
  }
  manifest["steps"] = ap.t.size() - 1;
  manifest["final_time"] = sim.time();
  manifest["final_mass"] = sim.mass();
  manifest["neutrality_warning"] = sim.neutrality_warning_seen();
  finish(dir, manifest, timer);
  std::cout << "run: " << ap.t.size() - 1 << " steps, t = " << format_double(sim.time())
            << ", E_AP = " << format_double(ap.value.back()) << "\n";
  return 0;
}

int cmd_convergence(const ScenarioConfig& cfg) {
  Timer timer;
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  nlohmann::json manifest = base_manifest("convergence", cfg);
  write_json(dir / "manifest.json", manifest);
  warn_cfl(cfg);

  const ConvergenceResult res = run_convergence(cfg);
  write_convergence_csv(dir / "convergence.csv", res);
  manifest["slope"] = res.slope;
  finish(dir, manifest, timer);
  for (std::size_t k = 0; k < res.dts.size(); ++k) {
    std::cout << format_double(res.dts[k]) << "  " << format_double(res.errors[k]) << "\n";
  }
  std::cout << "slope " << format_double(res.slope) << "\n";
  return 0;
}

int cmd_ap(const ScenarioConfig& cfg) {
  Timer timer;
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  nlohmann::json manifest = base_manifest("ap", cfg);
  write_json(dir / "manifest.json", manifest);
  warn_cfl(cfg);

  const TimeSeries ts = run_ap_study(cfg);
  write_ap_csv(dir / "ap.csv", ts);
  manifest["final_ap_error"] = ts.value.back();
  finish(dir, manifest, timer);
  std::cout << "E_AP(T) = " << format_double(ts.value.back()) << "\n";
  return 0;
}

int cmd_comparison(const std::string& name, const ScenarioConfig& cfg) {
  Timer timer;
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  nlohmann::json manifest = base_manifest(name, cfg);
  write_json(dir / "manifest.json", manifest);
  warn_cfl(cfg);

  const ComparisonResult res =
      cfg.kind == ScenarioKind::Mixed ? run_mixed(cfg) : run_bump_on_tail(cfg);
  const PhaseGrid grid = make_grid(cfg);
  for (const auto& [sub, snaps, ap] :
       {std::tuple{"lowrank", &res.lowrank, &res.ap_lowrank},
        std::tuple{"full", &res.full, &res.ap_full}}) {
    const fs::path d = dir / sub;
    write_fields_csv(d / "fields.csv", *snaps, grid);
    write_phase_csv(d / "phase.csv", *snaps, grid);
    write_pointwise_ap_csv(d / "pointwise_ap.csv", *snaps, res.eps, grid);
    write_ap_csv(d / "ap.csv", *ap);
  }
  write_phase_diff_csv(dir / "diff" / "phase.csv", res.full, res.lowrank, grid);

  manifest["rho_gap_l1_relative"] = res.rho_gap;
  manifest["f_gap_l1_relative"] = res.f_gap;
  manifest["initial_compression_error_l1_relative"] = res.init_compression_error;
  if (cfg.kind == ScenarioKind::Mixed) {
    manifest["log_eps_ap_correlation"] =
        log_correlation(res.lowrank.back().ap_pointwise, res.eps);
  }
  finish(dir, manifest, timer);
  std::cout << name << ": rho gap " << format_double(res.rho_gap) << ", f gap "
            << format_double(res.f_gap) << "\n";
  return 0;
}

int cmd_verify(const ScenarioConfig& cfg) {
  Timer timer;
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  nlohmann::json manifest = base_manifest("verify", cfg);
  write_json(dir / "manifest.json", manifest);

  const VerificationResult res = run_verification(cfg);
  auto case_json = [](const VerificationCase& c) {
    return nlohmann::json{{"steps", c.steps},
                          {"constants", to_json(c.residual.constants)},
                          {"coercivity", to_json(c.coercivity)},
                          {"projection", to_json(c.projection)},
                          {"residual", to_json(c.residual)},
                          {"passed", c.passed}};
  };
  nlohmann::json cert;
  cert["zero_field"] = case_json(res.zero_field);
  cert["self_consistent"] = case_json(res.self_consistent);
  cert["passed"] = res.passed;
  write_json(dir / "certificate.json", cert);
  finish(dir, manifest, timer);
  std::cout << "verify: zero field " << (res.zero_field.passed ? "PASS" : "FAIL")
            << " (assumption_ok = " << res.zero_field.residual.constants.assumption_ok
            << "), self-consistent " << (res.self_consistent.passed ? "PASS" : "FAIL")
            << " (assumption_ok = " << res.self_consistent.residual.constants.assumption_ok
            << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank Vlasov-Poisson-Fokker-Planck solver"};
  app.require_subcommand(1);
  Flags flags;
  struct Sub {
    const char* name;
    const char* help;
    ScenarioKind fallback;
  };
  const Sub subs[] = {
      {"run", "single simulation", ScenarioKind::NoneqConv},
      {"convergence", "time-step convergence ladder", ScenarioKind::NoneqConv},
      {"ap", "AP error time series", ScenarioKind::ApTest},
      {"mixed", "mixed-regime comparison of both solvers", ScenarioKind::Mixed},
      {"bump", "bump-on-tail comparison of both solvers", ScenarioKind::BumpOnTail},
      {"verify", "coercivity, projection and residual audits", ScenarioKind::NoneqConv},
  };
  std::vector<std::pair<CLI::App*, Sub>> commands;
  for (const Sub& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, flags);
    commands.emplace_back(cmd, s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& [cmd, sub] : commands) {
      if (!cmd->parsed()) continue;
      const std::string name = sub.name;
      const ScenarioConfig cfg =
          resolve(flags, sub.fallback, name == "mixed" || name == "bump");
      if (name == "run") return cmd_run(cfg);
      if (name == "convergence") return cmd_convergence(cfg);
      if (name == "ap") return cmd_ap(cfg);
      if (name == "mixed" || name == "bump") return cmd_comparison(name, cfg);
      if (name == "verify") return cmd_verify(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.module() << "]: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error [" << e.module() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
