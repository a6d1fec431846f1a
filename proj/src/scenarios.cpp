#include "vpfp/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vpfp {

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

ScenarioKind parse_scenario(const std::string& name) {
  if (name == "noneq" || name == "noneq_conv") return ScenarioKind::NoneqConv;
  if (name == "eq" || name == "eq_conv") return ScenarioKind::EqConv;
  if (name == "ap" || name == "ap_test") return ScenarioKind::ApTest;
  if (name == "mixed" || name == "mixed_regime") return ScenarioKind::Mixed;
  if (name == "bump" || name == "bump_on_tail") return ScenarioKind::BumpOnTail;
  throw ConfigError("scenarios", "unknown scenario '" + name + "'");
}

std::string scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::NoneqConv: return "noneq_conv";
    case ScenarioKind::EqConv: return "eq_conv";
    case ScenarioKind::ApTest: return "ap_test";
    case ScenarioKind::Mixed: return "mixed_regime";
    case ScenarioKind::BumpOnTail: return "bump_on_tail";
  }
  return "unknown";
}

SolverKind parse_solver(const std::string& name) {
  if (name == "lowrank") return SolverKind::LowRank;
  if (name == "full") return SolverKind::Full;
  throw ConfigError("scenarios", "unknown solver '" + name + "' (expected lowrank or full)");
}

std::string solver_name(SolverKind kind) {
  return kind == SolverKind::Full ? "full" : "lowrank";
}

ScenarioConfig default_config(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  switch (kind) {
    case ScenarioKind::NoneqConv:
      break;
    case ScenarioKind::EqConv:
      c.rank = 15;
      c.dt = 5e-5;
      c.t_final = 5e-4;
      c.order = 2;
      break;
    case ScenarioKind::ApTest:
      c.dt = 2.5e-3;
      c.t_final = 0.1;
      c.eps = 1e-6;
      break;
    case ScenarioKind::Mixed:
      c.nx = 100;
      c.nv = 128;
      c.rank = 13;
      c.dt = 1e-4;
      c.t_final = 0.3;
      c.eps = 1e-3;
      break;
    case ScenarioKind::BumpOnTail:
      c.nx = 100;
      c.nv = 128;
      c.rank = 6;
      c.dt = 1e-3;
      c.t_final = 0.5;
      c.eps = 1e-6;
      break;
  }
  return c;
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.nx < 2 || cfg.nv < 2) throw ConfigError("scenarios", "nx and nv must be at least 2");
  if (cfg.rank < 1 || cfg.rank > std::min(cfg.nx, cfg.nv)) {
    throw ConfigError("scenarios", "rank must lie in [1, min(nx, nv)]");
  }
  if (!(cfg.dt >= 0.0) || !std::isfinite(cfg.dt)) {
    throw ConfigError("scenarios", "dt must be finite and non-negative");
  }
  if (!(cfg.t_final >= 0.0) || !std::isfinite(cfg.t_final)) {
    throw ConfigError("scenarios", "t_final must be finite and non-negative");
  }
  if (!(cfg.eps > 0.0)) throw ConfigError("scenarios", "eps must be positive");
  if (cfg.order != 1 && cfg.order != 2) throw ConfigError("scenarios", "order must be 1 or 2");
  if (cfg.levels < 2) throw ConfigError("scenarios", "a ladder needs at least 2 levels");
  if (!(cfg.v_max > cfg.v_min)) throw ConfigError("scenarios", "v_max must exceed v_min");
}

PhaseGrid make_grid(const ScenarioConfig& cfg) {
  const bool mixed = cfg.kind == ScenarioKind::Mixed;
  return PhaseGrid::make(mixed ? -1.0 : 0.0, 1.0, cfg.nx, cfg.v_min, cfg.v_max, cfg.nv);
}

double mixed_eps(double x, double eps0) {
  if (x <= 0.3) return eps0 + 0.5 * (std::tanh(5.0 - 10.0 * x) + std::tanh(5.0 + 10.0 * x));
  return eps0;
}

namespace {

Vec mixed_rho0(const PhaseGrid& grid) {
  return (kSqrt2Pi / 6.0) *
         (2.0 + (std::numbers::pi * grid.x().array()).sin()).matrix();
}

// rho0(x) / sqrt(2 pi) exp(-(v - shift(x))^2 / 2)
Mat shifted_gaussian(const Vec& rho0, const Vec& shift, const PhaseGrid& grid) {
  Mat f(grid.nx(), grid.nv());
  for (int q = 0; q < grid.nv(); ++q) {
    for (int p = 0; p < grid.nx(); ++p) {
      const double d = grid.v()[q] - shift[p];
      f(p, q) = rho0[p] / kSqrt2Pi * std::exp(-0.5 * d * d);
    }
  }
  return f;
}

}  // namespace

double mixed_c_eta(const PhaseGrid& grid) {
  const Vec rho0 = mixed_rho0(grid);
  const double shape = (std::numbers::pi * grid.x().array()).cos().exp().sum();
  return rho0.sum() / shape;
}

InitialData build_initial(const ScenarioConfig& cfg, const PhaseGrid& grid) {
  validate(cfg);
  const Vec& x = grid.x();
  const int nx = grid.nx();
  InitialData d;
  d.eps = Vec::Constant(nx, cfg.eps);

  const double two_pi = 2.0 * std::numbers::pi;
  bool equilibrium = false;
  switch (cfg.kind) {
    case ScenarioKind::NoneqConv:
    case ScenarioKind::EqConv:
    case ScenarioKind::ApTest: {
      d.rho0 = kSqrt2Pi * (2.0 + (two_pi * x.array()).cos()).matrix();
      const double i0 = std::cyl_bessel_i(0.0, 1.0);
      d.eta = (2.0 * kSqrt2Pi / i0) * (two_pi * x.array()).cos().exp().matrix();
      equilibrium = cfg.kind == ScenarioKind::EqConv ||
                    (cfg.kind == ScenarioKind::ApTest && cfg.order == 2);
      break;
    }
    case ScenarioKind::Mixed: {
      d.rho0 = mixed_rho0(grid);
      d.eta = mixed_c_eta(grid) * (std::numbers::pi * x.array()).cos().exp().matrix();
      for (int p = 0; p < nx; ++p) d.eps[p] = mixed_eps(x[p], cfg.eps);
      equilibrium = true;
      break;
    }
    case ScenarioKind::BumpOnTail: {
      d.rho0 = (0.3 + (-(x.array() - 0.3).square() / 0.01).exp()).matrix();
      d.eta = (0.3 + (-(x.array() - 0.6).square() / 0.01).exp()).matrix();
      break;
    }
  }

  d.neutrality_residual = (d.rho0 - d.eta).sum() * grid.dx();
  d.e0 = solve_poisson(d.rho0, d.eta, grid).efield;
  if (cfg.zero_field) d.e0.setZero();

  if (cfg.kind == ScenarioKind::BumpOnTail) {
    const double t_cold = 5e-3;
    d.f0.resize(nx, grid.nv());
    for (int q = 0; q < grid.nv(); ++q) {
      const double v = grid.v()[q];
      const double shape =
          std::exp(-0.5 * v * v) + std::exp(-(v - 1.5) * (v - 1.5) / (2.0 * t_cold));
      d.f0.col(q) = d.rho0 * (shape / kSqrt2Pi);
    }
  } else if (equilibrium) {
    d.f0 = shifted_gaussian(d.rho0, d.e0, grid);
  } else {
    d.f0 = shifted_gaussian(d.rho0, Vec::Constant(nx, 1.5), grid);
  }
  return d;
}

std::vector<double> step_sizes(double dt, double t_final) {
  std::vector<double> out;
  if (!(dt > 0.0) || !(t_final > 0.0)) return out;
  const long long n = std::llround(t_final / dt);
  if (n >= 1 && std::abs(static_cast<double>(n) * dt - t_final) <= 1e-9 * t_final) {
    out.assign(static_cast<std::size_t>(n), dt);
    return out;
  }
  const auto full = static_cast<long long>(std::floor(t_final / dt));
  out.assign(static_cast<std::size_t>(full), dt);
  const double rest = t_final - static_cast<double>(full) * dt;
  if (rest > 1e-12 * t_final) out.push_back(rest);
  return out;
}

// ---------------------------------------------------------------------------

Simulation::Simulation(const ScenarioConfig& cfg, const PhaseGrid& grid, const InitialData& init,
                       SolverKind solver)
    : grid_(grid),
      solver_(solver),
      order_(cfg.order),
      eta_(init.eta),
      eps_(init.eps),
      zero_field_(cfg.zero_field),
      transport_(cfg.transport) {
  if (solver_ == SolverKind::LowRank) {
    lr_ = init_from_function(init.f0, cfg.rank, grid_);
  } else {
    dense_ = init.f0;
  }
  field_ = solve_for(density());
}

FieldState Simulation::solve_for(const Vec& rho) const {
  if (!zero_field_) return solve_poisson(rho, eta_, grid_);
  FieldState fs;
  fs.rho = rho;
  fs.eta = eta_;
  fs.phi = Vec::Zero(grid_.nx());
  fs.efield = Vec::Zero(grid_.nx());
  return fs;
}

StepConfig Simulation::step_config(double dt) const {
  StepConfig sc;
  sc.dt = dt;
  sc.order = order_;
  sc.eps = eps_;
  sc.transport = transport_;
  if (zero_field_) sc.fixed_field = Vec::Zero(grid_.nx());
  return sc;
}

void Simulation::step(double dt) {
  const StepConfig sc = step_config(dt);
  if (solver_ == SolverKind::LowRank) {
    auto [next, rep] = step_lowrank(lr_, eta_, grid_, sc);
    lr_ = std::move(next);
    report_ = std::move(rep);
  } else {
    auto [next, rep] = full_step(dense_, eta_, grid_, sc);
    dense_ = std::move(next);
    report_ = std::move(rep);
  }
  report_.time = time_ + dt;
  time_ += dt;
  field_ = solve_for(report_.rho_hat);
  warn_ = warn_ || report_.neutrality_warning;
}

Mat Simulation::distribution() const {
  return solver_ == SolverKind::LowRank ? reconstruct(lr_) : dense_;
}

Vec Simulation::density() const {
  return solver_ == SolverKind::LowRank ? vpfp::density(lr_, grid_) : velocity_sum(dense_, grid_);
}

FPWeights Simulation::weights() const { return compute_weights(field_.efield, eps_, grid_); }

double Simulation::ap_error() const { return ap_error_global(distribution(), weights(), grid_); }

Vec Simulation::ap_error_pointwise() const {
  return vpfp::ap_error_pointwise(distribution(), weights(), grid_);
}

double Simulation::mass() const { return density().sum() * grid_.dx(); }

// ---------------------------------------------------------------------------

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DimensionError("scenarios", "slope fit needs two or more matching points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw NumericalError("scenarios", "slope fit needs positive data");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult run_convergence(const ScenarioConfig& cfg) {
  validate(cfg);
  if (!(cfg.dt > 0.0)) throw ConfigError("scenarios", "convergence ladder needs dt > 0");
  const PhaseGrid grid = make_grid(cfg);
  const InitialData init = build_initial(cfg, grid);

  std::vector<Mat> finals;
  std::vector<double> dts;
  double dt = cfg.dt;
  for (int k = 0; k < cfg.levels; ++k, dt *= 0.5) {
    Simulation sim(cfg, grid, init, cfg.solver);
    for (double h : step_sizes(dt, cfg.t_final)) sim.step(h);
    finals.push_back(sim.distribution());
    dts.push_back(dt);
  }
  ConvergenceResult res;
  for (int k = 0; k + 1 < cfg.levels; ++k) {
    res.dts.push_back(dts[k]);
    res.errors.push_back(norm1_xv(finals[k] - finals[k + 1], grid));
  }
  res.slope = loglog_slope(res.dts, res.errors);
  return res;
}

TimeSeries run_ap_study(const ScenarioConfig& cfg) {
  validate(cfg);
  const PhaseGrid grid = make_grid(cfg);
  const InitialData init = build_initial(cfg, grid);
  Simulation sim(cfg, grid, init, cfg.solver);
  TimeSeries ts;
  ts.t.push_back(0.0);
  ts.value.push_back(sim.ap_error());
  for (double h : step_sizes(cfg.dt, cfg.t_final)) {
    sim.step(h);
    ts.t.push_back(sim.time());
    ts.value.push_back(sim.ap_error());
  }
  return ts;
}

Snapshot take_snapshot(const Simulation& sim) {
  Snapshot s;
  s.t = sim.time();
  s.f = sim.distribution();
  s.rho = sim.density();
  s.efield = sim.field().efield;
  s.ap_pointwise = sim.ap_error_pointwise();
  return s;
}

double relative_l1_gap(const Vec& a, const Vec& ref) {
  const double den = ref.cwiseAbs().sum();
  if (den == 0.0) throw NumericalError("scenarios", "relative gap against a zero reference");
  return (a - ref).cwiseAbs().sum() / den;
}

double relative_l1_gap(const Mat& a, const Mat& ref) {
  const double den = ref.cwiseAbs().sum();
  if (den == 0.0) throw NumericalError("scenarios", "relative gap against a zero reference");
  return (a - ref).cwiseAbs().sum() / den;
}

ComparisonResult run_comparison(const ScenarioConfig& cfg, std::vector<double> times) {
  validate(cfg);
  const PhaseGrid grid = make_grid(cfg);
  const InitialData init = build_initial(cfg, grid);
  Simulation lr(cfg, grid, init, SolverKind::LowRank);
  Simulation full(cfg, grid, init, SolverKind::Full);

  times.push_back(cfg.t_final);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(), same_time), times.end());

  ComparisonResult res;
  res.eps = init.eps;
  res.init_compression_error =
      (lr.distribution() - init.f0).cwiseAbs().sum() / init.f0.cwiseAbs().sum();

  std::size_t next = 0;
  auto record = [&]() {
    res.ap_lowrank.t.push_back(lr.time());
    res.ap_lowrank.value.push_back(lr.ap_error());
    res.ap_full.t.push_back(full.time());
    res.ap_full.value.push_back(full.ap_error());
    while (next < times.size() && same_time(lr.time(), times[next])) {
      res.lowrank.push_back(take_snapshot(lr));
      res.full.push_back(take_snapshot(full));
      ++next;
    }
  };
  record();
  for (double h : step_sizes(cfg.dt, cfg.t_final)) {
    lr.step(h);
    full.step(h);
    record();
  }
  if (res.lowrank.empty()) throw NumericalError("scenarios", "no snapshot time was reached");
  res.rho_gap = relative_l1_gap(res.lowrank.back().rho, res.full.back().rho);
  res.f_gap = relative_l1_gap(res.lowrank.back().f, res.full.back().f);
  return res;
}

ComparisonResult run_mixed(const ScenarioConfig& cfg) {
  return run_comparison(cfg, {0.1});
}

ComparisonResult run_bump_on_tail(const ScenarioConfig& cfg) {
  return run_comparison(cfg, {0.0});
}

double log_correlation(const Vec& a, const Vec& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw DimensionError("scenarios", "correlation needs two or more matching points");
  }
  if (a.minCoeff() <= 0.0 || b.minCoeff() <= 0.0) {
    throw NumericalError("scenarios", "log correlation needs positive data");
  }
  const Eigen::ArrayXd la = a.array().log();
  const Eigen::ArrayXd lb = b.array().log();
  const Eigen::ArrayXd da = la - la.mean();
  const Eigen::ArrayXd db = lb - lb.mean();
  const double den = std::sqrt((da * da).sum() * (db * db).sum());
  if (den == 0.0) return 0.0;
  return (da * db).sum() / den;
}

bool bounded_in_final_quarter(const std::vector<double>& series, double factor) {
  if (series.size() < 4) return true;
  const std::size_t cut = series.size() - series.size() / 4;
  double before = 0.0;
  for (std::size_t i = 0; i < cut; ++i) {
    if (!std::isfinite(series[i])) return false;
    before = std::max(before, series[i]);
  }
  for (std::size_t i = cut; i < series.size(); ++i) {
    if (!std::isfinite(series[i]) || series[i] > factor * before) return false;
  }
  return true;
}

}  // namespace vpfp

namespace vpfp {

VerificationCase run_verification_case(const ScenarioConfig& cfg, bool zero_field, int steps) {
  validate(cfg);
  if (!(cfg.dt > 0.0)) throw ConfigError("scenarios", "verification needs dt > 0");
  if (steps < 1) throw ConfigError("scenarios", "verification needs at least one step");
  ScenarioConfig c = cfg;
  c.zero_field = zero_field;
  const PhaseGrid grid = make_grid(c);
  const InitialData init = build_initial(c, grid);

  StepConfig sc;
  sc.dt = c.dt;
  sc.order = 1;
  sc.eps = init.eps;
  sc.transport = c.transport;
  if (zero_field) sc.fixed_field = Vec::Zero(grid.nx());

  LowRankState state = init_from_function(init.f0, c.rank, grid);
  for (int n = 0; n + 1 < steps; ++n) state = step_first_order(state, init.eta, grid, sc).first;
  FirstOrderTrace trace;
  state = step_first_order(state, init.eta, grid, sc, &trace).first;

  VerificationCase vc;
  vc.zero_field = zero_field;
  vc.steps = steps;
  const FPWeights& w = trace.next.weights;
  vc.residual = residual_certificate(state, trace.before_l, trace.adv_l, w, c.dt, grid);
  vc.coercivity = verify_coercivity(w, grid, 100, c.seed);
  vc.projection = verify_projection_bound(state.x, w, grid, 100, c.seed + 1);
  vc.passed = vc.residual.passed && vc.coercivity.passed && vc.projection.passed;
  return vc;
}

VerificationResult run_verification(const ScenarioConfig& cfg, int steps) {
  VerificationResult res;
  res.zero_field = run_verification_case(cfg, true, steps);
  res.self_consistent = run_verification_case(cfg, false, steps);
  res.passed = res.zero_field.passed && res.self_consistent.passed;
  return res;
}

}  // namespace vpfp
