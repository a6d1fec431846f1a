#include "vpfp/fulltensor.hpp"

#include "vpfp/diagnostics.hpp"

namespace vpfp {

Mat solve_implicit_full(const Mat& rhs, const FPWeights& weights, const FPVelocityOps& ops,
                        double c) {
  const Eigen::Index nx = rhs.rows();
  const int nv = ops.t_alpha.size();
  Mat out(nx, nv);
  Vec lower(nv), diag(nv), upper(nv);
  for (Eigen::Index p = 0; p < nx; ++p) {
    const double b = weights.beta[p];
    const double s = c / weights.eps[p];
    lower = -s * (b * ops.t_alpha.lower + ops.t_inv_alpha.lower / b);
    diag = Vec::Ones(nv) - s * (b * ops.t_alpha.diag + ops.t_inv_alpha.diag / b);
    upper = -s * (b * ops.t_alpha.upper + ops.t_inv_alpha.upper / b);
    out.row(p) = solve_tridiagonal(lower, diag, upper, rhs.row(p).transpose(),
                                   "full-tensor point p=" + std::to_string(p))
                     .transpose();
  }
  return out;
}

Mat apply_collision_full(const Mat& f, const FPWeights& weights, const PhaseGrid& grid) {
  return weights.eps.cwiseInverse().asDiagonal() * apply_fp_full(f, weights, grid);
}

namespace {

Mat transport(const Mat& f, const PhaseGrid& grid, const StepConfig& cfg) {
  if (!cfg.transport) return Mat::Zero(f.rows(), f.cols());
  return apply_advection_full(f, grid);
}

StepReport make_report(const Mat& f_new, const Vec& rho_hat, const FieldAndWeights& next,
                       const PhaseGrid& grid) {
  StepReport rep;
  rep.mass = velocity_sum(f_new, grid).sum() * grid.dx();
  rep.rho_hat = rho_hat;
  rep.efield = next.field.efield;
  rep.field_energy = field_energy(next.field.efield, grid);
  rep.ap_error = ap_error_global(f_new, next.weights, grid);
  rep.neutrality_warning = next.field.neutrality_warning;
  return rep;
}

}  // namespace

std::pair<Mat, StepReport> full_step_first(const Mat& f, const Vec& eta, const PhaseGrid& grid,
                                           const StepConfig& cfg) {
  validate(cfg, grid);
  check_phase(f, grid, "full-tensor state");
  const double dt = cfg.dt;
  const Mat adv = transport(f, grid, cfg);
  const Vec rho_hat = velocity_sum(f + dt * adv, grid);
  const FieldAndWeights next = field_from_density(rho_hat, eta, grid, cfg);
  const FPVelocityOps ops = velocity_ops(next.weights, grid);
  Mat f_new = solve_implicit_full(f + dt * adv, next.weights, ops, dt);
  StepReport rep = make_report(f_new, rho_hat, next, grid);
  return {std::move(f_new), std::move(rep)};
}

std::pair<Mat, StepReport> full_step_second(const Mat& f, const Vec& eta, const PhaseGrid& grid,
                                            const StepConfig& cfg) {
  validate(cfg, grid);
  check_phase(f, grid, "full-tensor state");
  const double dt = cfg.dt;

  const Vec rho_n = velocity_sum(f, grid);
  const FieldAndWeights now = field_from_density(rho_n, eta, grid, cfg);
  const FPVelocityOps ops = velocity_ops(now.weights, grid);

  // Stage: (f* - f) / (dt/2) = A f + L^{n+1/2} f* / eps.
  const Mat adv = transport(f, grid, cfg);
  const Vec rho_half = rho_n + 0.5 * dt * velocity_sum(adv, grid);
  const FieldAndWeights half = field_from_density(rho_half, eta, grid, cfg);
  const Mat f_half = solve_implicit_full(f + 0.5 * dt * adv, half.weights, ops, 0.5 * dt);

  // Step: (f' - f) / dt = A f* + (L^n f + L^{n+1} f') / (2 eps).
  const Mat adv_half = transport(f_half, grid, cfg);
  const Vec rho_hat = rho_n + dt * velocity_sum(adv_half, grid);
  const FieldAndWeights next = field_from_density(rho_hat, eta, grid, cfg);
  const Mat rhs = f + dt * adv_half + 0.5 * dt * apply_collision_full(f, now.weights, grid);
  Mat f_new = solve_implicit_full(rhs, next.weights, ops, 0.5 * dt);

  StepReport rep = make_report(f_new, rho_hat, next, grid);
  return {std::move(f_new), std::move(rep)};
}

std::pair<Mat, StepReport> full_step(const Mat& f, const Vec& eta, const PhaseGrid& grid,
                                     const StepConfig& cfg) {
  return cfg.order == 2 ? full_step_second(f, eta, grid, cfg)
                        : full_step_first(f, eta, grid, cfg);
}

}  // namespace vpfp
