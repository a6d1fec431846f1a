#include "vpfp/fokker_planck.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace vpfp {

namespace {

constexpr double kExpLimit = 700.0;
constexpr double kBasisTolerance = 1e-8;

void require_orthonormal(const Mat& basis, double weight, const char* what) {
  const double defect = orthonormality_defect(basis, weight);
  if (!(defect <= kBasisTolerance)) {
    std::ostringstream msg;
    msg << what << " basis is not orthonormal (Gram deviation " << defect << ")";
    throw NumericalError("fokker_planck", msg.str());
  }
}

}  // namespace

double orthonormality_defect(const Mat& basis, double weight) {
  const Mat gram = basis.transpose() * basis * weight;
  return (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

FPWeights compute_weights(const Vec& efield, const Vec& eps, const PhaseGrid& grid) {
  check_x_vector(efield, grid, "electric field");
  check_x_vector(eps, grid, "eps field");
  const int nx = grid.nx();
  const int nv = grid.nv();
  const double dv = grid.dv();
  const Vec& v = grid.v();

  FPWeights w;
  w.alpha_half.resize(nv - 1);
  for (int q = 0; q + 1 < nv; ++q) {
    const double arg = dv * (v[q] + v[q + 1]) / 4.0;
    if (std::abs(arg) > kExpLimit) {
      throw NumericalError("fokker_planck", "alpha exponent overflow at face q=" +
                                                std::to_string(q) + "+1/2");
    }
    w.alpha_half[q] = std::exp(arg);
  }

  w.beta.resize(nx);
  for (int p = 0; p < nx; ++p) {
    const double arg = -dv * efield[p] / 2.0;
    if (!std::isfinite(arg) || std::abs(arg) > kExpLimit) {
      std::ostringstream msg;
      msg << "beta exponent overflow at cell p=" << p << " (E=" << efield[p] << ")";
      throw NumericalError("fokker_planck", msg.str());
    }
    if (!(eps[p] > 0.0)) {
      std::ostringstream msg;
      msg << "eps must be positive, got " << eps[p] << " at cell p=" << p;
      throw ConfigError("fokker_planck", msg.str());
    }
    w.beta[p] = std::exp(arg);
  }
  w.eps = eps;

  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  w.maxwellian.resize(nx, nv);
  for (int q = 0; q < nv; ++q) {
    for (int p = 0; p < nx; ++p) {
      const double d = v[q] - efield[p];
      w.maxwellian(p, q) = norm * std::exp(-0.5 * d * d);
    }
  }
  const Vec mass = w.maxwellian.rowwise().sum() * dv;
  w.maxwellian_tilde = mass.cwiseInverse().asDiagonal() * w.maxwellian;
  return w;
}

FPVelocityOps velocity_ops(const FPWeights& weights, const PhaseGrid& grid) {
  const int nv = grid.nv();
  if (weights.alpha_half.size() != nv - 1) {
    throw DimensionError("fokker_planck", "weights were built on a different velocity grid");
  }
  const double inv_dv2 = 1.0 / (grid.dv() * grid.dv());
  const Vec& a = weights.alpha_half;
  FPVelocityOps ops{Tridiagonal(nv), Tridiagonal(nv)};
  for (int q = 0; q < nv; ++q) {
    if (q + 1 < nv) {
      ops.t_alpha.upper[q] = a[q] * inv_dv2;
      ops.t_inv_alpha.diag[q] -= inv_dv2 / a[q];
    }
    if (q > 0) {
      ops.t_alpha.diag[q] -= a[q - 1] * inv_dv2;
      ops.t_inv_alpha.lower[q] = inv_dv2 / a[q - 1];
    }
  }
  return ops;
}

Mat apply_fp_full(const Mat& f, const FPWeights& weights, const PhaseGrid& grid) {
  check_phase(f, grid, "apply_fp_full input");
  check_x_vector(weights.beta, grid, "beta");
  const FPVelocityOps ops = velocity_ops(weights, grid);
  const Mat ft = f.transpose();
  // Column p of the transposed result is row p of L_h f.
  Mat out = ops.t_alpha.apply_columns(ft) * weights.beta.asDiagonal();
  out += ops.t_inv_alpha.apply_columns(ft) * weights.beta.cwiseInverse().asDiagonal();
  return out.transpose();
}

Vec apply_fp_row(const Vec& fp, double beta_p, const FPVelocityOps& ops) {
  return beta_p * ops.t_alpha.apply(fp) + ops.t_inv_alpha.apply(fp) / beta_p;
}

VelocityGram gram_velocity(const Mat& v_basis, const FPVelocityOps& ops, const PhaseGrid& grid) {
  if (v_basis.rows() != grid.nv()) {
    throw DimensionError("fokker_planck", "velocity basis rows != nv");
  }
  require_orthonormal(v_basis, grid.dv(), "velocity");
  VelocityGram g;
  g.a = v_basis.transpose() * ops.t_alpha.apply_columns(v_basis) * grid.dv();
  g.b = v_basis.transpose() * ops.t_inv_alpha.apply_columns(v_basis) * grid.dv();
  return g;
}

SpatialGram gram_spatial(const Mat& x_basis, const FPWeights& weights, const PhaseGrid& grid) {
  if (x_basis.rows() != grid.nx()) {
    throw DimensionError("fokker_planck", "spatial basis rows != nx");
  }
  require_orthonormal(x_basis, grid.dx(), "spatial");
  const Vec inv_eps = weights.eps.cwiseInverse();
  const Vec wp = weights.beta.cwiseProduct(inv_eps) * grid.dx();
  const Vec wq = weights.beta.cwiseInverse().cwiseProduct(inv_eps) * grid.dx();
  SpatialGram g;
  g.p = x_basis.transpose() * wp.asDiagonal() * x_basis;
  g.q = x_basis.transpose() * wq.asDiagonal() * x_basis;
  return g;
}

}  // namespace vpfp
