#pragma once

#include "vpfp/diagnostics.hpp"
#include "vpfp/fulltensor.hpp"
#include "vpfp/steppers.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vpfp {

enum class ScenarioKind { NoneqConv, EqConv, ApTest, Mixed, BumpOnTail };
enum class SolverKind { LowRank, Full };

ScenarioKind parse_scenario(const std::string& name);
std::string scenario_name(ScenarioKind kind);
SolverKind parse_solver(const std::string& name);
std::string solver_name(SolverKind kind);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::NoneqConv;
  int nx = 64;
  int nv = 64;
  double v_min = -6.0;
  double v_max = 6.0;
  int rank = 10;
  /// Time step, or the coarsest step of a convergence ladder.
  double dt = 1e-3;
  /// Number of ladder runs (each halving dt); yields levels - 1 errors.
  int levels = 6;
  double t_final = 5e-3;
  /// Scalar eps, or eps_0 of the mixed-regime profile.
  double eps = 1.0;
  int order = 1;
  SolverKind solver = SolverKind::LowRank;
  /// Impose E = 0 instead of solving Poisson.
  bool zero_field = false;
  /// Switch transport off (A_h = 0).
  bool transport = true;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
};

/// Reference defaults for each scenario kind.
ScenarioConfig default_config(ScenarioKind kind);
void validate(const ScenarioConfig& cfg);

/// x domain: [0, 1] except the mixed regime ([-1, 1]).
PhaseGrid make_grid(const ScenarioConfig& cfg);

struct InitialData {
  Mat f0;
  Vec rho0;
  Vec eta;
  Vec eps;
  Vec e0;  // discrete Poisson field of rho0 - eta
  double neutrality_residual = 0.0;  // sum (rho0 - eta) dx
};

InitialData build_initial(const ScenarioConfig& cfg, const PhaseGrid& grid);

/// eps_0 + (tanh(5 - 10x) + tanh(5 + 10x)) / 2 for x <= 0.3, else eps_0.
double mixed_eps(double x, double eps0);
/// C such that sum (C e^{cos pi x_p} - rho0_p) dx = 0 on the grid.
double mixed_c_eta(const PhaseGrid& grid);

/// Number of steps of size dt that reach t_final; the last step may be
/// shortened so the run ends exactly at t_final.
std::vector<double> step_sizes(double dt, double t_final);

/// One simulation (either solver) advanced step by step.
class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, const PhaseGrid& grid, const InitialData& init,
             SolverKind solver);

  void step(double dt);
  double time() const { return time_; }
  SolverKind solver() const { return solver_; }
  const PhaseGrid& grid() const { return grid_; }

  Mat distribution() const;
  Vec density() const;
  /// Field carried by the scheme: E^{n+1} from the predicted density of the
  /// last step (the Poisson field of rho^0 before any step).
  const FieldState& field() const { return field_; }
  /// Weights for that field.
  FPWeights weights() const;
  double ap_error() const;
  Vec ap_error_pointwise() const;
  double mass() const;
  const LowRankState& lowrank_state() const { return lr_; }
  const StepReport& last_report() const { return report_; }
  bool neutrality_warning_seen() const { return warn_; }

 private:
  StepConfig step_config(double dt) const;
  FieldState solve_for(const Vec& rho) const;

  PhaseGrid grid_;
  SolverKind solver_;
  int order_;
  Vec eta_;
  Vec eps_;
  bool zero_field_;
  bool transport_;
  LowRankState lr_;
  Mat dense_;
  double time_ = 0.0;
  StepReport report_;
  FieldState field_;
  bool warn_ = false;
};

// ---------------------------------------------------------------------------
// Study drivers.

struct ConvergenceResult {
  std::vector<double> dts;     // one per error: dt_k
  std::vector<double> errors;  // ||f^{dt_k}(T) - f^{dt_{k+1}}(T)||_{L1}
  double slope = 0.0;          // least squares on (log dt, log error)
};

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

ConvergenceResult run_convergence(const ScenarioConfig& cfg);

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> value;
};

/// E_AP(t^n) for n = 0..N.
TimeSeries run_ap_study(const ScenarioConfig& cfg);

struct Snapshot {
  double t = 0.0;
  Vec rho;
  Vec efield;
  Mat f;
  Vec ap_pointwise;
};

Snapshot take_snapshot(const Simulation& sim);

struct ComparisonResult {
  std::vector<Snapshot> lowrank;
  std::vector<Snapshot> full;
  TimeSeries ap_lowrank;
  TimeSeries ap_full;
  Vec eps;
  double rho_gap = 0.0;   // relative L1 gap of rho at the last snapshot
  double f_gap = 0.0;     // relative L1 gap of f at the last snapshot
  double init_compression_error = 0.0;  // ||f0 - f0_r||_{L1} / ||f0||_{L1}
};

/// Runs both solvers side by side and snapshots them at `times` (which must be
/// reachable multiples of dt; t_final is always included).
ComparisonResult run_comparison(const ScenarioConfig& cfg, std::vector<double> times);

/// Mixed regime: snapshots at t = 0.1 and t_final.
ComparisonResult run_mixed(const ScenarioConfig& cfg);
/// Bump-on-tail: snapshots at t = 0 and t_final.
ComparisonResult run_bump_on_tail(const ScenarioConfig& cfg);

/// Pearson correlation of log(a) and log(b).
double log_correlation(const Vec& a, const Vec& b);
double relative_l1_gap(const Vec& a, const Vec& ref);
double relative_l1_gap(const Mat& a, const Mat& ref);

/// max over the final quarter <= factor * max over everything before it.
bool bounded_in_final_quarter(const std::vector<double>& series, double factor);

struct VerificationCase {
  bool zero_field = false;
  int steps = 0;  // first-order steps taken; the last one is certified
  CoercivityReport coercivity;
  ProjectionReport projection;
  ResidualCertificate residual;
  bool passed = false;
};

struct VerificationResult {
  VerificationCase zero_field;       // E = 0 imposed
  VerificationCase self_consistent;  // E from Poisson
  bool passed = false;
};

/// Runs `steps` first-order low-rank steps of the configured scenario and
/// audits the last one (coercivity, projection bound, residual certificate)
/// with the field of that step.
VerificationCase run_verification_case(const ScenarioConfig& cfg, bool zero_field, int steps);
VerificationResult run_verification(const ScenarioConfig& cfg, int steps = 10);

}  // namespace vpfp
