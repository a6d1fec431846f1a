#pragma once

#include "vpfp/fokker_planck.hpp"
#include "vpfp/lowrank.hpp"

#include <cstdint>

namespace vpfp {

/// f = rho * M_tilde + g with <g_p, 1>_v = 0 for every p.
struct MicroMacro {
  Vec rho;
  Mat g;
};

MicroMacro micro_macro(const Mat& f, const FPWeights& weights, const PhaseGrid& grid);

/// ||f - rho M||_{L1_xv} with the analytic Maxwellian and rho = <f, 1>_v.
double ap_error_global(const Mat& f, const FPWeights& weights, const PhaseGrid& grid);
/// ||f(x_p, .) - rho_p M_p||_{L1_v} for every p.
Vec ap_error_pointwise(const Mat& f, const FPWeights& weights, const PhaseGrid& grid);

/// Closed-form constants of the discrete coercivity and fluctuation bounds.
/// Face values M_{p,q+1/2} = sqrt(M_{p,q} M_{p,q+1}) use the renormalised
/// Maxwellian (unit discrete mass per cell).
struct APConstants {
  double lambda_n = 0.0;  // (4 / dv^2) sin^2(pi / (2 nv))
  double gamma_h = 0.0;   // M_min lambda_n / (1 + sqrt(L_v M_max))^2
  double kappa_h = 0.0;   // |dbeta|_inf (2 a_max / dv^2 + C_beta 2 / (a_min dv^2))
  double theta = 0.0;     // gamma_h / (gamma_h - kappa_h M_max), +inf if not ok
  double m_min = 0.0;
  double m_max = 0.0;
  double delta_beta_inf = 0.0;
  double beta_bar = 0.0;
  double c_beta = 0.0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  bool assumption_ok = false;  // kappa_h M_max < gamma_h
};

APConstants ap_constants(const FPWeights& weights, const PhaseGrid& grid);

/// -<L_h g, g / M_tilde>_xv / (gamma_h ||g / M_tilde||^2_xv). Values >= 1
/// confirm the coercivity estimate for this g.
double coercivity_ratio(const Mat& g, const FPWeights& weights, const APConstants& constants,
                        const PhaseGrid& grid);

struct CoercivityReport {
  int trials = 0;
  int violations = 0;
  double min_ratio = 0.0;
  double gamma_h = 0.0;
  bool passed = false;
};

/// Random g with zero velocity mean in every cell.
CoercivityReport verify_coercivity(const FPWeights& weights, const PhaseGrid& grid, int trials,
                                   std::uint64_t seed);

struct ProjectionReport {
  int trials = 0;
  int violations = 0;
  double kappa_h = 0.0;
  double max_lhs = 0.0;    // max ||(I - P_X) L_h f|| / ||f||
  double max_ratio = 0.0;  // max lhs / (kappa_h ||f||), 0 when kappa_h = 0
  bool passed = false;
};

/// Random f = X C in the range of P_X; checks ||(I - P_X) L_h f|| <= kappa_h ||f||.
ProjectionReport verify_projection_bound(const Mat& x_basis, const FPWeights& weights,
                                         const PhaseGrid& grid, int trials, std::uint64_t seed);

/// Projector onto span{X_i} under <.,.>_x applied to each velocity column.
Mat apply_spatial_projector(const Mat& x_basis, const Mat& f, const PhaseGrid& grid);

/// Residual bounds for the state produced by an L-step.
struct ResidualCertificate {
  APConstants constants;
  double eps = 0.0;
  double g_norm = 0.0;          // ||G^{n+1}||_xv
  double residual = 0.0;        // ||L_h f^{n+1}||_xv
  double residual_bound = 0.0;  // Theta (eps ||G|| + kappa M_max sqrt(L_v) ||rho||)
  double distance = 0.0;        // ||f^{n+1} - rho^{n+1} M_tilde||_xv
  double distance_bound = 0.0;  // (M_max / gamma_h) residual_bound
  double projected_defect = 0.0;  // ||P_X L_h f^{n+1} - eps G||_xv
  bool residual_ok = false;
  bool distance_ok = false;
  /// Both bounds hold (vacuously true when assumption_ok is false).
  bool passed = false;
};

/// G = (f^{n+1} - f^(2)) / dt - P_X A_h f^(2), where P_X A_h f^(2) = X adv_l^T.
/// Requires a spatially uniform eps.
ResidualCertificate residual_certificate(const LowRankState& after_l, const LowRankState& before_l,
                                         const Mat& adv_l, const FPWeights& weights, double dt,
                                         const PhaseGrid& grid);

}  // namespace vpfp
