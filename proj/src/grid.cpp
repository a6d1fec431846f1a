#include "vpfp/grid.hpp"

#include <cmath>
#include <sstream>

namespace vpfp {

PhaseGrid PhaseGrid::make(double x_min, double x_max, int nx, double v_min, double v_max, int nv) {
  if (nx < 2 || nv < 2) {
    std::ostringstream msg;
    msg << "cell counts must be at least 2 (got nx=" << nx << ", nv=" << nv << ")";
    throw ConfigError("grid", msg.str());
  }
  if (!(x_max > x_min) || !(v_max > v_min) || !std::isfinite(x_max - x_min) ||
      !std::isfinite(v_max - v_min)) {
    throw ConfigError("grid", "domain bounds must be finite with max > min");
  }
  PhaseGrid g;
  g.x_min_ = x_min;
  g.x_max_ = x_max;
  g.v_min_ = v_min;
  g.v_max_ = v_max;
  g.nx_ = nx;
  g.nv_ = nv;
  g.dx_ = (x_max - x_min) / nx;
  g.dv_ = (v_max - v_min) / nv;
  g.x_.resize(nx);
  g.v_.resize(nv);
  for (int p = 0; p < nx; ++p) g.x_[p] = x_min + (p + 0.5) * g.dx_;
  for (int q = 0; q < nv; ++q) g.v_[q] = v_min + (q + 0.5) * g.dv_;
  return g;
}

void check_x_vector(const Vec& a, const PhaseGrid& grid, const char* what) {
  if (a.size() != grid.nx()) {
    std::ostringstream msg;
    msg << what << " has length " << a.size() << ", expected nx=" << grid.nx();
    throw DimensionError("grid", msg.str());
  }
}

void check_v_vector(const Vec& a, const PhaseGrid& grid, const char* what) {
  if (a.size() != grid.nv()) {
    std::ostringstream msg;
    msg << what << " has length " << a.size() << ", expected nv=" << grid.nv();
    throw DimensionError("grid", msg.str());
  }
}

void check_phase(const Mat& f, const PhaseGrid& grid, const char* what) {
  if (f.rows() != grid.nx() || f.cols() != grid.nv()) {
    std::ostringstream msg;
    msg << what << " is " << f.rows() << "x" << f.cols() << ", expected " << grid.nx() << "x"
        << grid.nv();
    throw DimensionError("grid", msg.str());
  }
}

double inner_x(const Vec& a, const Vec& b, const PhaseGrid& grid) {
  check_x_vector(a, grid, "inner_x lhs");
  check_x_vector(b, grid, "inner_x rhs");
  return a.dot(b) * grid.dx();
}

double inner_v(const Vec& a, const Vec& b, const PhaseGrid& grid) {
  check_v_vector(a, grid, "inner_v lhs");
  check_v_vector(b, grid, "inner_v rhs");
  return a.dot(b) * grid.dv();
}

double inner_xv(const Mat& a, const Mat& b, const PhaseGrid& grid) {
  check_phase(a, grid, "inner_xv lhs");
  check_phase(b, grid, "inner_xv rhs");
  return a.cwiseProduct(b).sum() * grid.dx() * grid.dv();
}

double norm2_x(const Vec& a, const PhaseGrid& grid) { return std::sqrt(inner_x(a, a, grid)); }
double norm2_v(const Vec& a, const PhaseGrid& grid) { return std::sqrt(inner_v(a, a, grid)); }
double norm2_xv(const Mat& a, const PhaseGrid& grid) { return std::sqrt(inner_xv(a, a, grid)); }

double norm1_x(const Vec& a, const PhaseGrid& grid) {
  check_x_vector(a, grid, "norm1_x");
  return a.cwiseAbs().sum() * grid.dx();
}

double norm1_v(const Vec& a, const PhaseGrid& grid) {
  check_v_vector(a, grid, "norm1_v");
  return a.cwiseAbs().sum() * grid.dv();
}

double norm1_xv(const Mat& a, const PhaseGrid& grid) {
  check_phase(a, grid, "norm1_xv");
  return a.cwiseAbs().sum() * grid.dx() * grid.dv();
}

Vec velocity_sum(const Mat& f, const PhaseGrid& grid) {
  check_phase(f, grid, "velocity_sum input");
  return f.rowwise().sum() * grid.dv();
}

}  // namespace vpfp
