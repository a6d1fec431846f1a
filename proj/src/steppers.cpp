#include "vpfp/steppers.hpp"

#include "vpfp/diagnostics.hpp"

#include <cmath>
#include <sstream>

namespace vpfp {

void validate(const StepConfig& cfg, const PhaseGrid& grid) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw ConfigError("steppers", "time step must be positive and finite");
  }
  if (cfg.order != 1 && cfg.order != 2) {
    throw ConfigError("steppers", "order must be 1 or 2");
  }
  if (cfg.eps.size() != grid.nx()) {
    throw ConfigError("steppers", "eps field length must equal nx");
  }
  for (int p = 0; p < grid.nx(); ++p) {
    if (!(cfg.eps[p] > 0.0)) {
      throw ConfigError("steppers", "eps must be positive (cell p=" + std::to_string(p) + ")");
    }
  }
  if (cfg.fixed_field && cfg.fixed_field->size() != grid.nx()) {
    throw ConfigError("steppers", "fixed field length must equal nx");
  }
}

FieldAndWeights field_from_density(const Vec& rho, const Vec& eta, const PhaseGrid& grid,
                                   const StepConfig& cfg) {
  FieldAndWeights fw;
  if (cfg.fixed_field) {
    fw.field.rho = rho;
    fw.field.eta = eta;
    fw.field.phi = Vec::Zero(grid.nx());
    fw.field.efield = *cfg.fixed_field;
  } else {
    fw.field = solve_poisson(rho, eta, grid);
  }
  fw.weights = compute_weights(fw.field.efield, cfg.eps, grid);
  return fw;
}

// ---------------------------------------------------------------------------

Mat fp_action_K(const Mat& k, const VelocityGram& vg, const FPWeights& weights) {
  const Vec inv_eps = weights.eps.cwiseInverse();
  const Vec wa = weights.beta.cwiseProduct(inv_eps);
  const Vec wb = weights.beta.cwiseInverse().cwiseProduct(inv_eps);
  return wa.asDiagonal() * (k * vg.a.transpose()) + wb.asDiagonal() * (k * vg.b.transpose());
}

Mat fp_action_S(const Mat& s, const SpatialGram& xg, const VelocityGram& vg) {
  return xg.p * s * vg.a.transpose() + xg.q * s * vg.b.transpose();
}

Mat fp_action_L(const Mat& l, const SpatialGram& xg, const FPVelocityOps& ops) {
  return ops.t_alpha.apply_columns(l) * xg.p.transpose() +
         ops.t_inv_alpha.apply_columns(l) * xg.q.transpose();
}

Mat solve_implicit_K(const Mat& rhs, const VelocityGram& vg, const FPWeights& weights, double c) {
  const Eigen::Index nx = rhs.rows();
  const Eigen::Index r = rhs.cols();
  Mat out(nx, r);
  const Mat id = Mat::Identity(r, r);
  for (Eigen::Index p = 0; p < nx; ++p) {
    const double beta = weights.beta[p];
    const double scale = c / weights.eps[p];
    const Mat sys = id - scale * (beta * vg.a + vg.b / beta);
    out.row(p) = solve_dense(sys, rhs.row(p).transpose(),
                             "K-step point p=" + std::to_string(p))
                     .transpose();
  }
  return out;
}

Mat solve_implicit_L(const Mat& rhs, const SpatialGram& xg, const FPVelocityOps& ops, double c) {
  const int nv = ops.t_alpha.size();
  const Eigen::Index r = rhs.cols();
  std::vector<Mat> lower(nv), diag(nv), upper(nv);
  const Mat id = Mat::Identity(r, r);
  for (int q = 0; q < nv; ++q) {
    diag[q] = id - c * (ops.t_alpha.diag[q] * xg.p + ops.t_inv_alpha.diag[q] * xg.q);
    lower[q] = -c * (ops.t_alpha.lower[q] * xg.p + ops.t_inv_alpha.lower[q] * xg.q);
    upper[q] = -c * (ops.t_alpha.upper[q] * xg.p + ops.t_inv_alpha.upper[q] * xg.q);
  }
  return solve_block_tridiagonal(lower, diag, upper, rhs, "L-step");
}

namespace {

// Column-major vec: vec(P S A^T) = (A kron P) vec(S).
Mat kron_sum(const Mat& a, const Mat& p, const Mat& b, const Mat& q) {
  const Eigen::Index r = p.rows();
  Mat out(r * r, r * r);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) {
      out.block(i * r, j * r, r, r) = a(i, j) * p + b(i, j) * q;
    }
  }
  return out;
}

}  // namespace

Mat solve_implicit_S(const Mat& rhs, const SpatialGram& xg, const VelocityGram& vg, double c) {
  const Eigen::Index r = rhs.rows();
  const Eigen::Index n = r * r;
  const Mat sys = Mat::Identity(n, n) + c * kron_sum(vg.a, xg.p, vg.b, xg.q);
  const Vec b = Eigen::Map<const Vec>(rhs.data(), n);
  const Vec x = solve_dense(sys, b, "S-step");
  return Eigen::Map<const Mat>(x.data(), r, r);
}

// ---------------------------------------------------------------------------

Vec predict_density(const LowRankState& state, const PhaseGrid& grid, double dt_fraction,
                    bool transport) {
  Vec rho = density(state, grid);
  if (transport && dt_fraction != 0.0) {
    rho += dt_fraction * advection_density_moment(to_K(state), state.v, grid);
  }
  return rho;
}

KStepResult k_step_implicit(const LowRankState& state, const FPWeights& weights, const Mat& adv_k,
                            double h, const PhaseGrid& grid) {
  const FPVelocityOps ops = velocity_ops(weights, grid);
  const VelocityGram vg = gram_velocity(state.v, ops, grid);
  const Mat k_new = solve_implicit_K(to_K(state) + h * adv_k, vg, weights, h);
  WeightedQR qr = weighted_qr(k_new, grid.dx());
  return KStepResult{std::move(qr.q), std::move(qr.r)};
}

Mat s_step_explicit(const Mat& s1, const Mat& x_new, const Mat& v_old, const FPWeights& weights,
                    double h, const PhaseGrid& grid, bool transport) {
  const FPVelocityOps ops = velocity_ops(weights, grid);
  const VelocityGram vg = gram_velocity(v_old, ops, grid);
  const SpatialGram xg = gram_spatial(x_new, weights, grid);
  Mat rate = fp_action_S(s1, xg, vg);
  if (transport) rate += project_advection_S(s1, x_new, v_old, grid);
  return s1 - h * rate;
}

LStepResult l_step_implicit(const Mat& s2, const Mat& x_new, const Mat& v_old,
                            const FPWeights& weights, const Mat& adv_l, double h,
                            const PhaseGrid& grid) {
  const FPVelocityOps ops = velocity_ops(weights, grid);
  const SpatialGram xg = gram_spatial(x_new, weights, grid);
  const Mat l2 = v_old * s2.transpose();
  LStepResult out;
  out.l_new = solve_implicit_L(l2 + h * adv_l, xg, ops, h);
  WeightedQR qr = weighted_qr(out.l_new, grid.dv());
  out.v = std::move(qr.q);
  out.s = qr.r.transpose();
  return out;
}

namespace {

// Diagnostics are taken against the field the step itself used (E^{n+1} from
// the predicted density), not a field re-solved from the new moment.
StepReport make_report(const LowRankState& out, const Vec& rho_hat, const FieldAndWeights& next,
                       const PhaseGrid& grid) {
  StepReport rep;
  rep.mass = mass(out, grid);
  rep.rho_hat = rho_hat;
  rep.efield = next.field.efield;
  rep.field_energy = field_energy(next.field.efield, grid);
  rep.ap_error = ap_error_global(reconstruct(out), next.weights, grid);
  rep.neutrality_warning = next.field.neutrality_warning;
  return rep;
}

}  // namespace

std::pair<LowRankState, StepReport> step_first_order(const LowRankState& state, const Vec& eta,
                                                     const PhaseGrid& grid,
                                                     const StepConfig& cfg,
                                                     FirstOrderTrace* trace) {
  validate(cfg, grid);
  check_state(state, grid);
  const double dt = cfg.dt;

  // Step 1: density prediction and the field at t^{n+1}.
  const Vec rho_hat = predict_density(state, grid, dt, cfg.transport);
  FieldAndWeights next = field_from_density(rho_hat, eta, grid, cfg);
  const FPWeights& w = next.weights;

  // K-step.
  const Mat k = to_K(state);
  Mat adv_k = Mat::Zero(k.rows(), k.cols());
  if (cfg.transport) adv_k = project_advection_K(k, state.v, grid);
  const KStepResult ks = k_step_implicit(state, w, adv_k, dt, grid);

  // S-step (explicit, backward in time).
  const Mat s2 = s_step_explicit(ks.s1, ks.x, state.v, w, dt, grid, cfg.transport);

  // L-step.
  const Mat l2 = state.v * s2.transpose();
  Mat adv_l = Mat::Zero(l2.rows(), l2.cols());
  if (cfg.transport) adv_l = project_advection_L(l2, ks.x, grid);
  LStepResult ls = l_step_implicit(s2, ks.x, state.v, w, adv_l, dt, grid);

  LowRankState out{ks.x, std::move(ls.s), std::move(ls.v)};
  StepReport rep = make_report(out, rho_hat, next, grid);
  if (trace) {
    trace->before_l = LowRankState{ks.x, s2, state.v};
    trace->adv_l = std::move(adv_l);
    trace->next = std::move(next);
  }
  return {std::move(out), std::move(rep)};
}

// ---------------------------------------------------------------------------

Mat imex2_k_substep(const Mat& k, const Mat& v_basis, const ThreeLevels& w, double h,
                    const PhaseGrid& grid, bool transport) {
  const FPVelocityOps ops = velocity_ops(w.next, grid);
  const VelocityGram vg = gram_velocity(v_basis, ops, grid);
  const VelocityMoments mom = velocity_moment_mats(v_basis, grid);

  Mat rhs = k;
  if (transport) rhs += 0.5 * h * project_advection_K(k, mom, grid);
  const Mat k_stage = solve_implicit_K(rhs, vg, w.half, 0.5 * h);

  rhs = k + 0.5 * h * fp_action_K(k, vg, w.now);
  if (transport) rhs += h * project_advection_K(k_stage, mom, grid);
  return solve_implicit_K(rhs, vg, w.next, 0.5 * h);
}

Mat imex2_s_substep(const Mat& s, const Mat& x_basis, const Mat& v_basis, const ThreeLevels& w,
                    double h, const PhaseGrid& grid, bool transport) {
  const FPVelocityOps ops = velocity_ops(w.next, grid);
  const VelocityGram vg = gram_velocity(v_basis, ops, grid);
  const SpatialGram g_now = gram_spatial(x_basis, w.now, grid);
  const SpatialGram g_half = gram_spatial(x_basis, w.half, grid);
  const SpatialGram g_next = gram_spatial(x_basis, w.next, grid);
  const SpatialDifferenceGram dg = spatial_difference_gram(x_basis, grid);
  const VelocityMoments mom = velocity_moment_mats(v_basis, grid);

  Mat rhs = s;
  if (transport) rhs -= 0.5 * h * project_advection_S(s, dg, mom);
  const Mat s_stage = solve_implicit_S(rhs, g_half, vg, 0.5 * h);

  rhs = s - 0.5 * h * fp_action_S(s, g_now, vg);
  if (transport) rhs -= h * project_advection_S(s_stage, dg, mom);
  return solve_implicit_S(rhs, g_next, vg, 0.5 * h);
}

Mat imex2_l_substep(const Mat& l, const Mat& x_basis, const ThreeLevels& w, double h,
                    const PhaseGrid& grid, bool transport) {
  const FPVelocityOps ops = velocity_ops(w.next, grid);
  const SpatialGram g_now = gram_spatial(x_basis, w.now, grid);
  const SpatialGram g_half = gram_spatial(x_basis, w.half, grid);
  const SpatialGram g_next = gram_spatial(x_basis, w.next, grid);
  const SpatialDifferenceGram dg = spatial_difference_gram(x_basis, grid);

  Mat rhs = l;
  if (transport) rhs += 0.5 * h * project_advection_L(l, dg, grid);
  const Mat l_stage = solve_implicit_L(rhs, g_half, ops, 0.5 * h);

  rhs = l + 0.5 * h * fp_action_L(l, g_now, ops);
  if (transport) rhs += h * project_advection_L(l_stage, dg, grid);
  return solve_implicit_L(rhs, g_next, ops, 0.5 * h);
}

std::pair<LowRankState, StepReport> step_second_order(const LowRankState& state, const Vec& eta,
                                                      const PhaseGrid& grid,
                                                      const StepConfig& cfg) {
  validate(cfg, grid);
  check_state(state, grid);
  const double dt = cfg.dt;

  // Step 1: fields at t^n, t^{n+1/2}, t^{n+1}.
  const Vec rho_n = density(state, grid);
  const FieldAndWeights now = field_from_density(rho_n, eta, grid, cfg);
  const Vec rho_half = predict_density(state, grid, 0.5 * dt, cfg.transport);
  const FieldAndWeights half = field_from_density(rho_half, eta, grid, cfg);

  StepConfig half_cfg = cfg;
  half_cfg.dt = 0.5 * dt;
  half_cfg.order = 1;
  const LowRankState f_half = step_first_order(state, eta, grid, half_cfg).first;
  Vec rho_hat = rho_n;
  if (cfg.transport) {
    rho_hat += dt * advection_density_moment(to_K(f_half), f_half.v, grid);
  }
  const FieldAndWeights next = field_from_density(rho_hat, eta, grid, cfg);
  const ThreeLevels w{now.weights, half.weights, next.weights};

  // Step 2: K(dt/2) S(dt/2) L(dt) S(dt/2) K(dt/2).
  const Mat k1 = imex2_k_substep(to_K(state), state.v, w, 0.5 * dt, grid, cfg.transport);
  WeightedQR qr = weighted_qr(k1, grid.dx());
  const Mat x1 = std::move(qr.q);
  const Mat s1 = std::move(qr.r);

  const Mat s2 = imex2_s_substep(s1, x1, state.v, w, 0.5 * dt, grid, cfg.transport);

  const Mat l3 = imex2_l_substep(state.v * s2.transpose(), x1, w, dt, grid, cfg.transport);
  qr = weighted_qr(l3, grid.dv());
  const Mat v_new = std::move(qr.q);
  const Mat s3 = qr.r.transpose();

  const Mat s4 = imex2_s_substep(s3, x1, v_new, w, 0.5 * dt, grid, cfg.transport);

  const Mat k5 = imex2_k_substep(x1 * s4, v_new, w, 0.5 * dt, grid, cfg.transport);
  qr = weighted_qr(k5, grid.dx());

  LowRankState out{std::move(qr.q), std::move(qr.r), v_new};
  StepReport rep = make_report(out, rho_hat, next, grid);
  return {std::move(out), std::move(rep)};
}

std::pair<LowRankState, StepReport> step_lowrank(const LowRankState& state, const Vec& eta,
                                                 const PhaseGrid& grid, const StepConfig& cfg) {
  return cfg.order == 2 ? step_second_order(state, eta, grid, cfg)
                        : step_first_order(state, eta, grid, cfg);
}

}  // namespace vpfp
