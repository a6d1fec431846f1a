#pragma once

#include "vpfp/grid.hpp"
#include "vpfp/linalg.hpp"

namespace vpfp {

/// Data of the separable Fokker-Planck stencil for one field E.
///
/// The face weight between velocity cells q and q+1 factors as
///   sqrt(M_{p,q} / M_{p,q+1}) = alpha_{q+1/2} * beta_p,
///   alpha_{q+1/2} = exp(dv (v_q + v_{q+1}) / 4),  beta_p = exp(-dv E_p / 2),
/// so the operator is a sum of two tensor products (space weight x velocity
/// stencil). The relaxation scale eps is carried along but never enters
/// alpha or beta.
struct FPWeights {
  Vec alpha_half;        // nv - 1 interior faces
  Vec beta;              // nx
  Vec eps;               // nx, strictly positive (may be +inf)
  Mat maxwellian;        // nx x nv, (2 pi)^{-1/2} exp(-(v - E)^2 / 2)
  Mat maxwellian_tilde;  // rows renormalised to unit discrete mass
};

/// Velocity stencils of L_h = beta (x) T_alpha + beta^{-1} (x) T_inv_alpha with
/// zero-flux closure:
///   (T_alpha w)_q     = (alpha_{q+1/2} w_{q+1} - alpha_{q-1/2} w_q) / dv^2
///   (T_inv_alpha w)_q = (w_{q-1} / alpha_{q-1/2} - w_q / alpha_{q+1/2}) / dv^2
/// where terms on the two boundary faces are dropped.
struct FPVelocityOps {
  Tridiagonal t_alpha;
  Tridiagonal t_inv_alpha;
};

/// <T V_l, V_j>_v for both stencils: a(j, l), b(j, l).
struct VelocityGram {
  Mat a;
  Mat b;
};

/// sum_p (beta_p / eps_p) X_k X_i dx and sum_p X_k X_i / (beta_p eps_p) dx.
struct SpatialGram {
  Mat p;
  Mat q;
};

FPWeights compute_weights(const Vec& efield, const Vec& eps, const PhaseGrid& grid);

/// Full-tensor application of the separable stencil.
Mat apply_fp_full(const Mat& f, const FPWeights& weights, const PhaseGrid& grid);

/// Row p of L_h f only, i.e. (beta_p T_alpha + T_inv_alpha / beta_p) f_p.
Vec apply_fp_row(const Vec& fp, double beta_p, const FPVelocityOps& ops);

FPVelocityOps velocity_ops(const FPWeights& weights, const PhaseGrid& grid);

VelocityGram gram_velocity(const Mat& v_basis, const FPVelocityOps& ops, const PhaseGrid& grid);
SpatialGram gram_spatial(const Mat& x_basis, const FPWeights& weights, const PhaseGrid& grid);

/// Max |B^T B w - I| for a basis B with columns orthonormal under weight w.
double orthonormality_defect(const Mat& basis, double weight);

}  // namespace vpfp
