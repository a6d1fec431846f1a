#pragma once

#include "vpfp/common.hpp"

namespace vpfp {

/// Uniform cell-centred grids on [x_min, x_max] (periodic) and
/// [v_min, v_max] (zero-flux). Immutable once built.
///
/// Storage is 0-based: x(p) is the centre of cell p+1 in 1-based notation.
class PhaseGrid {
 public:
  static PhaseGrid make(double x_min, double x_max, int nx, double v_min, double v_max, int nv);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  int nx() const { return nx_; }
  int nv() const { return nv_; }
  double dx() const { return dx_; }
  double dv() const { return dv_; }
  /// Length of the velocity domain.
  double lv() const { return v_max_ - v_min_; }
  double lx() const { return x_max_ - x_min_; }

  const Vec& x() const { return x_; }
  const Vec& v() const { return v_; }

 private:
  PhaseGrid() = default;

  double x_min_ = 0, x_max_ = 0, v_min_ = 0, v_max_ = 0;
  int nx_ = 0, nv_ = 0;
  double dx_ = 0, dv_ = 0;
  Vec x_, v_;
};

// Discrete inner products and norms. Every weight is the cell size of the
// corresponding axis (dx, dv, or dx*dv).
double inner_x(const Vec& a, const Vec& b, const PhaseGrid& grid);
double inner_v(const Vec& a, const Vec& b, const PhaseGrid& grid);
double inner_xv(const Mat& a, const Mat& b, const PhaseGrid& grid);

double norm2_x(const Vec& a, const PhaseGrid& grid);
double norm2_v(const Vec& a, const PhaseGrid& grid);
double norm2_xv(const Mat& a, const PhaseGrid& grid);

double norm1_x(const Vec& a, const PhaseGrid& grid);
double norm1_v(const Vec& a, const PhaseGrid& grid);
double norm1_xv(const Mat& a, const PhaseGrid& grid);

/// Velocity moment <f_p, 1>_v for every p.
Vec velocity_sum(const Mat& f, const PhaseGrid& grid);

void check_x_vector(const Vec& a, const PhaseGrid& grid, const char* what);
void check_v_vector(const Vec& a, const PhaseGrid& grid, const char* what);
void check_phase(const Mat& f, const PhaseGrid& grid, const char* what);

}  // namespace vpfp
