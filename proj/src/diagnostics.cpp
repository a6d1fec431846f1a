#include "vpfp/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace vpfp {

namespace {

constexpr double kAbsSlack = 1e-10;
constexpr double kRelSlack = 1e-10;

Mat random_normal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Mat out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = dist(rng);
  }
  return out;
}

}  // namespace

MicroMacro micro_macro(const Mat& f, const FPWeights& weights, const PhaseGrid& grid) {
  check_phase(f, grid, "micro_macro input");
  MicroMacro mm;
  mm.rho = velocity_sum(f, grid);
  mm.g = f - mm.rho.asDiagonal() * weights.maxwellian_tilde;
  return mm;
}

Vec ap_error_pointwise(const Mat& f, const FPWeights& weights, const PhaseGrid& grid) {
  check_phase(f, grid, "AP error input");
  const Vec rho = velocity_sum(f, grid);
  const Mat diff = f - rho.asDiagonal() * weights.maxwellian;
  return diff.cwiseAbs().rowwise().sum() * grid.dv();
}

double ap_error_global(const Mat& f, const FPWeights& weights, const PhaseGrid& grid) {
  return ap_error_pointwise(f, weights, grid).sum() * grid.dx();
}

APConstants ap_constants(const FPWeights& weights, const PhaseGrid& grid) {
  const int nv = grid.nv();
  const double dv = grid.dv();
  const Mat& mt = weights.maxwellian_tilde;

  APConstants c;
  // Face values of the renormalised Maxwellian.
  c.m_min = std::numeric_limits<double>::infinity();
  c.m_max = 0.0;
  for (int q = 0; q + 1 < nv; ++q) {
    const Vec face = mt.col(q).cwiseProduct(mt.col(q + 1)).cwiseSqrt();
    c.m_min = std::min(c.m_min, face.minCoeff());
    c.m_max = std::max(c.m_max, face.maxCoeff());
  }
  const double s = std::sin(std::numbers::pi / (2.0 * nv));
  c.lambda_n = 4.0 / (dv * dv) * s * s;
  const double denom = 1.0 + std::sqrt(grid.lv() * c.m_max);
  c.gamma_h = c.m_min * c.lambda_n / (denom * denom);

  c.beta_bar = weights.beta.mean();
  c.delta_beta_inf = (weights.beta.array() - c.beta_bar).abs().maxCoeff();
  c.c_beta = (weights.beta * c.beta_bar).cwiseInverse().maxCoeff();
  c.alpha_min = weights.alpha_half.minCoeff();
  c.alpha_max = weights.alpha_half.maxCoeff();
  c.kappa_h = c.delta_beta_inf *
              (2.0 * c.alpha_max / (dv * dv) + c.c_beta * 2.0 / (c.alpha_min * dv * dv));

  c.assumption_ok = c.kappa_h * c.m_max < c.gamma_h;
  c.theta = c.assumption_ok ? c.gamma_h / (c.gamma_h - c.kappa_h * c.m_max)
                            : std::numeric_limits<double>::infinity();
  return c;
}

double coercivity_ratio(const Mat& g, const FPWeights& weights, const APConstants& constants,
                        const PhaseGrid& grid) {
  const Mat u = g.cwiseQuotient(weights.maxwellian_tilde);
  const double lhs = -inner_xv(apply_fp_full(g, weights, grid), u, grid);
  const double rhs = constants.gamma_h * inner_xv(u, u, grid);
  if (rhs == 0.0) return lhs >= 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return lhs / rhs;
}

CoercivityReport verify_coercivity(const FPWeights& weights, const PhaseGrid& grid, int trials,
                                   std::uint64_t seed) {
  const APConstants c = ap_constants(weights, grid);
  std::mt19937_64 rng(seed);
  CoercivityReport rep;
  rep.trials = trials;
  rep.gamma_h = c.gamma_h;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Mat g = random_normal(grid.nx(), grid.nv(), rng);
    // Remove the velocity mean so that <g_p, 1>_v = 0.
    const Vec mean = g.rowwise().mean();
    g.colwise() -= mean;
    const double ratio = coercivity_ratio(g, weights, c, grid);
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    if (ratio < 1.0 - kRelSlack) ++rep.violations;
  }
  rep.passed = rep.violations == 0;
  return rep;
}

Mat apply_spatial_projector(const Mat& x_basis, const Mat& f, const PhaseGrid& grid) {
  return x_basis * (x_basis.transpose() * f * grid.dx());
}

ProjectionReport verify_projection_bound(const Mat& x_basis, const FPWeights& weights,
                                         const PhaseGrid& grid, int trials, std::uint64_t seed) {
  if (x_basis.rows() != grid.nx()) {
    throw DimensionError("diagnostics", "X basis rows != nx");
  }
  const APConstants c = ap_constants(weights, grid);
  std::mt19937_64 rng(seed);
  ProjectionReport rep;
  rep.trials = trials;
  rep.kappa_h = c.kappa_h;
  for (int t = 0; t < trials; ++t) {
    Mat f = x_basis * random_normal(x_basis.cols(), grid.nv(), rng);
    f /= norm2_xv(f, grid);
    const Mat lf = apply_fp_full(f, weights, grid);
    const double lhs = norm2_xv(lf - apply_spatial_projector(x_basis, lf, grid), grid);
    rep.max_lhs = std::max(rep.max_lhs, lhs);
    if (c.kappa_h > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / c.kappa_h);
    if (lhs > c.kappa_h + kAbsSlack) ++rep.violations;
  }
  rep.passed = rep.violations == 0;
  return rep;
}

ResidualCertificate residual_certificate(const LowRankState& after_l, const LowRankState& before_l,
                                         const Mat& adv_l, const FPWeights& weights, double dt,
                                         const PhaseGrid& grid) {
  check_state(after_l, grid);
  check_state(before_l, grid);
  if (!(dt > 0.0)) throw ConfigError("diagnostics", "certificate needs dt > 0");
  const double eps = weights.eps[0];
  if (weights.eps.maxCoeff() - weights.eps.minCoeff() > 1e-14 * weights.eps.maxCoeff()) {
    throw ConfigError("diagnostics", "residual certificate requires uniform eps");
  }

  ResidualCertificate cert;
  cert.constants = ap_constants(weights, grid);
  cert.eps = eps;
  const APConstants& c = cert.constants;

  const Mat f_new = reconstruct(after_l);
  const Mat f_mid = reconstruct(before_l);
  const Mat g = (f_new - f_mid) / dt - after_l.x * adv_l.transpose();
  const Mat lf = apply_fp_full(f_new, weights, grid);
  const Vec rho = velocity_sum(f_new, grid);

  cert.g_norm = norm2_xv(g, grid);
  cert.residual = norm2_xv(lf, grid);
  cert.distance = norm2_xv(f_new - rho.asDiagonal() * weights.maxwellian_tilde, grid);
  cert.projected_defect =
      norm2_xv(apply_spatial_projector(after_l.x, lf, grid) - eps * g, grid);

  if (c.assumption_ok) {
    const double inner =
        eps * cert.g_norm + c.kappa_h * c.m_max * std::sqrt(grid.lv()) * norm2_x(rho, grid);
    cert.residual_bound = c.theta * inner;
    cert.distance_bound = c.m_max / c.gamma_h * cert.residual_bound;
    cert.residual_ok = cert.residual <= cert.residual_bound + kAbsSlack;
    cert.distance_ok = cert.distance <= cert.distance_bound + kAbsSlack;
  } else {
    cert.residual_bound = std::numeric_limits<double>::infinity();
    cert.distance_bound = std::numeric_limits<double>::infinity();
    cert.residual_ok = true;
    cert.distance_ok = true;
  }
  cert.passed = cert.residual_ok && cert.distance_ok;
  return cert;
}

}  // namespace vpfp
