#include "vpfp/advection.hpp"

#include <cmath>

namespace vpfp {

Mat d_minus(const Mat& a, double dx) {
  const Eigen::Index n = a.rows();
  Mat out(a.rows(), a.cols());
  out.bottomRows(n - 1) = a.bottomRows(n - 1) - a.topRows(n - 1);
  out.row(0) = a.row(0) - a.row(n - 1);
  return out / dx;
}

Mat d_plus(const Mat& a, double dx) {
  const Eigen::Index n = a.rows();
  Mat out(a.rows(), a.cols());
  out.topRows(n - 1) = a.bottomRows(n - 1) - a.topRows(n - 1);
  out.row(n - 1) = a.row(0) - a.row(n - 1);
  return out / dx;
}

Vec v_plus(const PhaseGrid& grid) { return grid.v().cwiseMax(0.0); }
Vec v_minus(const PhaseGrid& grid) { return grid.v().cwiseMin(0.0); }

Mat apply_advection_full(const Mat& f, const PhaseGrid& grid) {
  check_phase(f, grid, "apply_advection_full input");
  return -(d_minus(f, grid.dx()) * v_plus(grid).asDiagonal() +
           d_plus(f, grid.dx()) * v_minus(grid).asDiagonal());
}

VelocityMoments velocity_moment_mats(const Mat& v_basis, const PhaseGrid& grid) {
  if (v_basis.rows() != grid.nv()) {
    throw DimensionError("advection", "velocity basis rows != nv");
  }
  const double dv = grid.dv();
  const Vec vp = v_plus(grid);
  const Vec vm = v_minus(grid);
  VelocityMoments m;
  m.c_plus = v_basis.transpose() * vp.asDiagonal() * v_basis * dv;
  m.c_minus = v_basis.transpose() * vm.asDiagonal() * v_basis * dv;
  m.m_plus = v_basis.transpose() * vp * dv;
  m.m_minus = v_basis.transpose() * vm * dv;
  return m;
}

SpatialDifferenceGram spatial_difference_gram(const Mat& x_basis, const PhaseGrid& grid) {
  if (x_basis.rows() != grid.nx()) {
    throw DimensionError("advection", "spatial basis rows != nx");
  }
  const double dx = grid.dx();
  SpatialDifferenceGram g;
  g.g_minus = x_basis.transpose() * d_minus(x_basis, dx) * dx;
  g.g_plus = x_basis.transpose() * d_plus(x_basis, dx) * dx;
  return g;
}

Mat project_advection_K(const Mat& k, const VelocityMoments& moments, const PhaseGrid& grid) {
  if (k.rows() != grid.nx()) throw DimensionError("advection", "K rows != nx");
  const double dx = grid.dx();
  return -(d_minus(k, dx) * moments.c_plus + d_plus(k, dx) * moments.c_minus);
}

Mat project_advection_K(const Mat& k, const Mat& v_basis, const PhaseGrid& grid) {
  return project_advection_K(k, velocity_moment_mats(v_basis, grid), grid);
}

Mat project_advection_S(const Mat& s, const SpatialDifferenceGram& xg,
                        const VelocityMoments& moments) {
  return -(xg.g_minus * s * moments.c_plus + xg.g_plus * s * moments.c_minus);
}

Mat project_advection_S(const Mat& s, const Mat& x_basis, const Mat& v_basis,
                        const PhaseGrid& grid) {
  return project_advection_S(s, spatial_difference_gram(x_basis, grid),
                             velocity_moment_mats(v_basis, grid));
}

Mat project_advection_L(const Mat& l, const SpatialDifferenceGram& xg, const PhaseGrid& grid) {
  if (l.rows() != grid.nv()) throw DimensionError("advection", "L rows != nv");
  return -(v_plus(grid).asDiagonal() * l * xg.g_minus.transpose() +
           v_minus(grid).asDiagonal() * l * xg.g_plus.transpose());
}

Mat project_advection_L(const Mat& l, const Mat& x_basis, const PhaseGrid& grid) {
  return project_advection_L(l, spatial_difference_gram(x_basis, grid), grid);
}

Vec advection_density_moment(const Mat& k, const Mat& v_basis, const PhaseGrid& grid) {
  if (k.rows() != grid.nx()) throw DimensionError("advection", "K rows != nx");
  const VelocityMoments m = velocity_moment_mats(v_basis, grid);
  const double dx = grid.dx();
  return -(d_minus(k, dx) * m.m_plus + d_plus(k, dx) * m.m_minus);
}

double cfl_number(double dt, const PhaseGrid& grid) {
  return dt * grid.v().cwiseAbs().maxCoeff() / grid.dx();
}

}  // namespace vpfp
