#pragma once

#include "vpfp/advection.hpp"
#include "vpfp/field.hpp"
#include "vpfp/fokker_planck.hpp"
#include "vpfp/lowrank.hpp"

#include <optional>

namespace vpfp {

struct StepConfig {
  double dt = 0.0;
  int order = 1;
  /// Local relaxation scale per x cell; a constant vector encodes scalar eps.
  Vec eps;
  /// When set, this field is used at every time level instead of solving
  /// Poisson (used to impose E = 0 or a constant field).
  std::optional<Vec> fixed_field;
  /// Disables the transport term entirely (A_h = 0).
  bool transport = true;
};

void validate(const StepConfig& cfg, const PhaseGrid& grid);

struct StepReport {
  double time = 0.0;
  double mass = 0.0;
  Vec rho_hat;              // predicted density used for E^{n+1}
  Vec efield;               // E^{n+1} as used by the step
  double field_energy = 0.0;
  double ap_error = 0.0;    // ||f^{n+1} - rho^{n+1} M[E^{n+1}]||_{L1_xv}
  bool neutrality_warning = false;
};

/// Field and stencil weights belonging to one density.
struct FieldAndWeights {
  FieldState field;
  FPWeights weights;
};

FieldAndWeights field_from_density(const Vec& rho, const Vec& eta, const PhaseGrid& grid,
                                   const StepConfig& cfg);

// ---------------------------------------------------------------------------
// Projected Fokker-Planck actions (1/eps included).

/// Row p: (beta_p A + B / beta_p) K_p / eps_p, i.e. <L_h(K V^T), V_j>_v / eps.
Mat fp_action_K(const Mat& k, const VelocityGram& vg, const FPWeights& weights);
/// P S A^T + Q S B^T, i.e. <L_h(X S V^T), X_i V_j>_xv / eps.
Mat fp_action_S(const Mat& s, const SpatialGram& xg, const VelocityGram& vg);
/// T_alpha L P^T + T_inv_alpha L Q^T, i.e. <L_h(X L^T), X_i>_x / eps.
Mat fp_action_L(const Mat& l, const SpatialGram& xg, const FPVelocityOps& ops);

/// Solves (I - c (beta_p A + B / beta_p) / eps_p) K_p = rhs_p for every p.
Mat solve_implicit_K(const Mat& rhs, const VelocityGram& vg, const FPWeights& weights, double c);
/// Solves (I - c (P (x) T_alpha + Q (x) T_inv_alpha)) L = rhs by block Thomas.
Mat solve_implicit_L(const Mat& rhs, const SpatialGram& xg, const FPVelocityOps& ops, double c);
/// Solves (I + c F_S) S = rhs where F_S(S) = P S A^T + Q S B^T (dense r^2 system).
Mat solve_implicit_S(const Mat& rhs, const SpatialGram& xg, const VelocityGram& vg, double c);

// ---------------------------------------------------------------------------
// First-order hybrid IMEX (K, L implicit; S explicit).

/// rho^n + fraction * <A_h f^n, 1>_v from the factors alone.
Vec predict_density(const LowRankState& state, const PhaseGrid& grid, double dt_fraction,
                    bool transport = true);

struct KStepResult {
  Mat x;   // new spatial basis
  Mat s1;  // coefficients after the K-step
};

/// adv_k = project_advection_K(X^n S^n, V^n) at the old time.
KStepResult k_step_implicit(const LowRankState& state, const FPWeights& weights, const Mat& adv_k,
                            double h, const PhaseGrid& grid);

Mat s_step_explicit(const Mat& s1, const Mat& x_new, const Mat& v_old, const FPWeights& weights,
                    double h, const PhaseGrid& grid, bool transport = true);

struct LStepResult {
  Mat v;      // new velocity basis
  Mat s;      // final coefficients
  Mat l_new;  // L^{n+1} before orthogonalisation
};

/// adv_l = project_advection_L(V_old S2^T, X_new).
LStepResult l_step_implicit(const Mat& s2, const Mat& x_new, const Mat& v_old,
                            const FPWeights& weights, const Mat& adv_l, double h,
                            const PhaseGrid& grid);

/// Intermediate quantities of one first-order step, kept for certificates.
struct FirstOrderTrace {
  LowRankState before_l;  // (X^{n+1}, S^(2), V^n)
  Mat adv_l;              // <A_h f^(2), X_i>_x
  FieldAndWeights next;   // field and weights at t^{n+1}
};

std::pair<LowRankState, StepReport> step_first_order(const LowRankState& state, const Vec& eta,
                                                     const PhaseGrid& grid,
                                                     const StepConfig& cfg,
                                                     FirstOrderTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Second-order IMEX Strang splitting.

/// Weights at t^n, t^{n+1/2}, t^{n+1}.
struct ThreeLevels {
  const FPWeights& now;
  const FPWeights& half;
  const FPWeights& next;
};

/// One trapezoidal IMEX substep of length h for the K unknown (frozen V):
///   K*  = K + h/2 [adv(K) + F^{n+1/2}(K*)]
///   K'  = K + h [adv(K*) + (F^n(K) + F^{n+1}(K')) / 2]
Mat imex2_k_substep(const Mat& k, const Mat& v_basis, const ThreeLevels& w, double h,
                    const PhaseGrid& grid, bool transport = true);
/// Same for S with frozen X, V; the right-hand side carries the minus sign of
/// the backward S flow, so both solves are implicit in S.
Mat imex2_s_substep(const Mat& s, const Mat& x_basis, const Mat& v_basis, const ThreeLevels& w,
                    double h, const PhaseGrid& grid, bool transport = true);
/// Same for L with frozen X.
Mat imex2_l_substep(const Mat& l, const Mat& x_basis, const ThreeLevels& w, double h,
                    const PhaseGrid& grid, bool transport = true);

std::pair<LowRankState, StepReport> step_second_order(const LowRankState& state, const Vec& eta,
                                                      const PhaseGrid& grid,
                                                      const StepConfig& cfg);

/// Dispatches on cfg.order.
std::pair<LowRankState, StepReport> step_lowrank(const LowRankState& state, const Vec& eta,
                                                 const PhaseGrid& grid, const StepConfig& cfg);

}  // namespace vpfp
