#include "vpfp/lowrank.hpp"

#include <cmath>
#include <sstream>

namespace vpfp {

namespace {

// Size, relative to the column's own norm, below which the orthogonalised
// remainder is roundoff and the column counts as dependent.
constexpr double kDependentTolerance = 1e-14;

// Two passes of modified Gram-Schmidt of `col` against q.leftCols(j).
// Projection coefficients are accumulated into `coeff` when non-null.
void orthogonalise(Eigen::Ref<Vec> col, const Mat& q, Eigen::Index j, double weight,
                   Vec* coeff) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double c = q.col(i).dot(col) * weight;
      col -= c * q.col(i);
      if (coeff) (*coeff)[i] += c;
    }
  }
}

}  // namespace

WeightedQR weighted_qr(const Mat& columns, double weight) {
  const Eigen::Index n = columns.rows();
  const Eigen::Index r = columns.cols();
  if (r > n) throw DimensionError("lowrank", "QR needs at least as many rows as columns");

  WeightedQR out{Mat::Zero(n, r), Mat::Zero(r, r)};
  for (Eigen::Index j = 0; j < r; ++j) {
    Vec col = columns.col(j);
    const double scale = std::sqrt(col.squaredNorm() * weight);
    Vec coeff = Vec::Zero(r);
    orthogonalise(col, out.q, j, weight, &coeff);
    const double nrm = std::sqrt(col.squaredNorm() * weight);
    out.r.col(j).head(j) = coeff.head(j);
    if (nrm > kDependentTolerance * scale && nrm > 0.0) {
      out.q.col(j) = col / nrm;
      out.r(j, j) = nrm;
      continue;
    }
    // Rank deficiency: complete the basis deterministically. The discarded
    // residual is below roundoff of the column, so Q R still reproduces it.
    out.r(j, j) = 0.0;
    bool found = false;
    for (Eigen::Index e = 0; e < n && !found; ++e) {
      Vec cand = Vec::Zero(n);
      cand[e] = 1.0;
      orthogonalise(cand, out.q, j, weight, nullptr);
      const double cn = std::sqrt(cand.squaredNorm() * weight);
      if (cn > 0.5 * std::sqrt(weight)) {
        out.q.col(j) = cand / cn;
        found = true;
      }
    }
    if (!found) throw NumericalError("lowrank", "failed to complete orthonormal basis");
  }
  return out;
}

LowRankState init_from_function(const Mat& f0, int r, const PhaseGrid& grid) {
  check_phase(f0, grid, "initial data");
  if (r < 1 || r > std::min(grid.nx(), grid.nv())) {
    std::ostringstream msg;
    msg << "rank " << r << " must lie in [1, min(nx, nv)=" << std::min(grid.nx(), grid.nv())
        << "]";
    throw ConfigError("lowrank", msg.str());
  }
  const double sx = std::sqrt(grid.dx());
  const double sv = std::sqrt(grid.dv());
  const Mat weighted = f0 * (sx * sv);
  Eigen::BDCSVD<Mat> svd(weighted, Eigen::ComputeThinU | Eigen::ComputeThinV);
  LowRankState st;
  st.x = svd.matrixU().leftCols(r) / sx;
  st.v = svd.matrixV().leftCols(r) / sv;
  st.s = svd.singularValues().head(r).asDiagonal();
  return st;
}

Mat to_K(const LowRankState& state) { return state.x * state.s; }

Mat to_L(const LowRankState& state) { return state.v * state.s.transpose(); }

LowRankState from_K(const Mat& k, const Mat& v_basis, const PhaseGrid& grid) {
  if (k.rows() != grid.nx()) throw DimensionError("lowrank", "K rows != nx");
  WeightedQR qr = weighted_qr(k, grid.dx());
  return LowRankState{std::move(qr.q), std::move(qr.r), v_basis};
}

LowRankState from_L(const Mat& l, const Mat& x_basis, const PhaseGrid& grid) {
  if (l.rows() != grid.nv()) throw DimensionError("lowrank", "L rows != nv");
  WeightedQR qr = weighted_qr(l, grid.dv());
  return LowRankState{x_basis, qr.r.transpose(), std::move(qr.q)};
}

void check_state(const LowRankState& state, const PhaseGrid& grid) {
  const auto r = state.s.rows();
  if (state.s.cols() != r || state.x.rows() != grid.nx() || state.x.cols() != r ||
      state.v.rows() != grid.nv() || state.v.cols() != r) {
    throw DimensionError("lowrank", "factor shapes do not match grid and rank");
  }
}

Vec density(const LowRankState& state, const PhaseGrid& grid) {
  check_state(state, grid);
  const Vec vmass = state.v.transpose() * Vec::Ones(grid.nv()) * grid.dv();
  return state.x * (state.s * vmass);
}

Vec current(const LowRankState& state, const PhaseGrid& grid) {
  check_state(state, grid);
  const Vec vmom = state.v.transpose() * grid.v() * grid.dv();
  return state.x * (state.s * vmom);
}

double mass(const LowRankState& state, const PhaseGrid& grid) {
  return density(state, grid).sum() * grid.dx();
}

Mat reconstruct(const LowRankState& state) {
  return state.x * state.s * state.v.transpose();
}

}  // namespace vpfp
