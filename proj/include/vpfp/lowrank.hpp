#pragma once

#include "vpfp/grid.hpp"

namespace vpfp {

/// Rank-r factorisation f_{p,q} = sum_ij X(p,i) S(i,j) V(q,j) with columns of
/// X orthonormal under <.,.>_x^h and columns of V orthonormal under <.,.>_v^h.
struct LowRankState {
  Mat x;  // nx x r
  Mat s;  // r x r
  Mat v;  // nv x r

  int rank() const { return static_cast<int>(s.rows()); }
};

/// Q R = columns with Q orthonormal under the weight (Q^T Q weight = I) and R
/// upper triangular with a nonnegative diagonal.
struct WeightedQR {
  Mat q;
  Mat r;
};

/// Modified Gram-Schmidt with one reorthogonalisation pass. A column that is
/// numerically dependent on its predecessors gets R(j, j) = 0 and is replaced
/// in Q by the first canonical unit vector that survives orthogonalisation.
WeightedQR weighted_qr(const Mat& columns, double weight);

/// Best rank-r approximation in the weighted Frobenius norm (truncated SVD of
/// sqrt(dx) f0 sqrt(dv)).
LowRankState init_from_function(const Mat& f0, int r, const PhaseGrid& grid);

/// K = X S
Mat to_K(const LowRankState& state);
/// L = V S^T, so that f = sum_i X_i L_i^T
Mat to_L(const LowRankState& state);
LowRankState from_K(const Mat& k, const Mat& v_basis, const PhaseGrid& grid);
LowRankState from_L(const Mat& l, const Mat& x_basis, const PhaseGrid& grid);

Vec density(const LowRankState& state, const PhaseGrid& grid);
Vec current(const LowRankState& state, const PhaseGrid& grid);
double mass(const LowRankState& state, const PhaseGrid& grid);

/// Dense tensor, O(nx nv r). Used by diagnostics and oracles only.
Mat reconstruct(const LowRankState& state);

void check_state(const LowRankState& state, const PhaseGrid& grid);

}  // namespace vpfp
