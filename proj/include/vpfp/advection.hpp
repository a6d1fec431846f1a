#pragma once

#include "vpfp/grid.hpp"

namespace vpfp {

/// First-order periodic upwind transport A_h f = -(v+ D_- f + v- D_+ f).
///
/// D_- and D_+ are the periodic backward/forward differences in x (1/dx scale);
/// v+ = max(v, 0), v- = min(v, 0).

/// Periodic backward difference of every column (rows index x).
Mat d_minus(const Mat& a, double dx);
/// Periodic forward difference of every column.
Mat d_plus(const Mat& a, double dx);

Vec v_plus(const PhaseGrid& grid);
Vec v_minus(const PhaseGrid& grid);

Mat apply_advection_full(const Mat& f, const PhaseGrid& grid);

/// c_plus(l, j) = <v+ V_l, V_j>_v, m_plus(l) = <v+ V_l, 1>_v (same for minus).
struct VelocityMoments {
  Mat c_plus, c_minus;
  Vec m_plus, m_minus;
};

VelocityMoments velocity_moment_mats(const Mat& v_basis, const PhaseGrid& grid);

/// g_minus(i, k) = <D_- X_k, X_i>_x, g_plus(i, k) = <D_+ X_k, X_i>_x.
struct SpatialDifferenceGram {
  Mat g_minus, g_plus;
};

SpatialDifferenceGram spatial_difference_gram(const Mat& x_basis, const PhaseGrid& grid);

/// <A_h(sum_l K_l V_l), V_j>_v for each j; result is nx x r.
Mat project_advection_K(const Mat& k, const Mat& v_basis, const PhaseGrid& grid);
Mat project_advection_K(const Mat& k, const VelocityMoments& moments, const PhaseGrid& grid);

/// <A_h(X S V^T), X_i V_j>_xv; the S-step consumer applies the minus sign.
Mat project_advection_S(const Mat& s, const Mat& x_basis, const Mat& v_basis,
                        const PhaseGrid& grid);
Mat project_advection_S(const Mat& s, const SpatialDifferenceGram& xg,
                        const VelocityMoments& moments);

/// <A_h(sum_k X_k L_k), X_i>_x for each i; result is nv x r.
Mat project_advection_L(const Mat& l, const Mat& x_basis, const PhaseGrid& grid);
Mat project_advection_L(const Mat& l, const SpatialDifferenceGram& xg, const PhaseGrid& grid);

/// <A_h(K V^T), 1>_v without forming the tensor.
Vec advection_density_moment(const Mat& k, const Mat& v_basis, const PhaseGrid& grid);

/// dt * max|v| / dx
double cfl_number(double dt, const PhaseGrid& grid);

}  // namespace vpfp
