#include "oracles.hpp"
#include "vpfp/fokker_planck.hpp"

#include <doctest.h>

using namespace vpfp;

namespace {

PhaseGrid grid32() { return PhaseGrid::make(0.0, 1.0, 32, -6.0, 6.0, 32); }

}  // namespace

TEST_CASE("separable factors reproduce the Maxwellian ratio") {
  std::mt19937_64 rng(1);
  const PhaseGrid g = grid32();
  for (int trial = 0; trial < 10; ++trial) {
    const Vec e = oracle::gaussian(g.nx(), rng, 2.0);
    const FPWeights w = compute_weights(e, Vec::Ones(g.nx()), g);
    double worst = 0.0;
    for (int p = 0; p < g.nx(); ++p) {
      for (int q = 0; q + 1 < g.nv(); ++q) {
        const double ref = std::sqrt(oracle::maxwellian(g.v()(q), e(p)) /
                                     oracle::maxwellian(g.v()(q + 1), e(p)));
        worst = std::max(worst, std::abs(w.alpha_half(q) * w.beta(p) / ref - 1.0));
      }
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("separable stencil equals the flux form") {
  std::mt19937_64 rng(2);
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 12, -6.0, 6.0, 20);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec e = oracle::gaussian(g.nx(), rng);
    const Mat f = oracle::gaussian(g.nx(), g.nv(), rng);
    const Mat lh = apply_fp_full(f, compute_weights(e, Vec::Ones(g.nx()), g), g);
    const Mat ref = oracle::fp_flux_form(f, e, g);
    const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
    CHECK((lh - ref).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("kernel and local conservation") {
  std::mt19937_64 rng(3);
  const PhaseGrid g = grid32();
  const Vec e = oracle::gaussian(g.nx(), rng);
  const FPWeights w = compute_weights(e, Vec::Ones(g.nx()), g);
  const Vec rho = oracle::gaussian(g.nx(), rng).array().abs() + 0.5;
  const Mat eq = rho.asDiagonal() * oracle::maxwellian_table(e, g);
  const FPVelocityOps ops = velocity_ops(w, g);
  const double scale = (ops.t_alpha.diag.cwiseAbs().maxCoeff() + 1.0) * eq.cwiseAbs().maxCoeff() *
                       w.beta.maxCoeff();
  CHECK(apply_fp_full(eq, w, g).cwiseAbs().maxCoeff() <= 1e-12 * scale);

  for (int trial = 0; trial < 100; ++trial) {
    const Mat f = oracle::gaussian(g.nx(), g.nv(), rng);
    const Mat lf = apply_fp_full(f, w, g);
    const Vec sums = velocity_sum(lf, g);
    CHECK(sums.cwiseAbs().maxCoeff() <= 1e-11 * std::max(1.0, lf.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("velocity operators: entries and row form") {
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 4, -2.0, 2.0, 5);
  const Vec e = Vec::Constant(4, 0.3);
  const FPWeights w = compute_weights(e, Vec::Ones(4), g);
  const FPVelocityOps ops = velocity_ops(w, g);
  const double dv2 = g.dv() * g.dv();
  // (T_alpha w)_q = (a_{q+1/2} w_{q+1} - a_{q-1/2} w_q) / dv^2, boundary faces dropped.
  CHECK(ops.t_alpha.diag(0) == 0.0);
  CHECK(ops.t_alpha.upper(0) == doctest::Approx(w.alpha_half(0) / dv2));
  CHECK(ops.t_alpha.diag(4) == doctest::Approx(-w.alpha_half(3) / dv2));
  CHECK(ops.t_inv_alpha.diag(4) == 0.0);
  CHECK(ops.t_inv_alpha.lower(4) == doctest::Approx(1.0 / (w.alpha_half(3) * dv2)));
  const Mat row = oracle::fp_row_matrix(0.3, g);
  const Mat sep = w.beta(0) * ops.t_alpha.to_dense() + ops.t_inv_alpha.to_dense() / w.beta(0);
  CHECK((row - sep).cwiseAbs().maxCoeff() < 1e-12 * row.cwiseAbs().maxCoeff());
  const Vec fp = Vec::LinSpaced(5, 1.0, 2.0);
  CHECK((apply_fp_row(fp, w.beta(0), ops) - row * fp).norm() < 1e-12 * (row * fp).norm() + 1e-14);
}

TEST_CASE("Maxwellian tables") {
  const PhaseGrid g = grid32();
  const Vec e = Vec::LinSpaced(g.nx(), -1.0, 1.0);
  const FPWeights w = compute_weights(e, Vec::Constant(g.nx(), 0.5), g);
  CHECK((w.maxwellian - oracle::maxwellian_table(e, g)).cwiseAbs().maxCoeff() < 1e-15);
  const Vec mass = velocity_sum(w.maxwellian_tilde, g);
  CHECK((mass.array() - 1.0).abs().maxCoeff() < 1e-14);
  CHECK(w.eps(3) == 0.5);
}

TEST_CASE("projected grams equal brute-force projections") {
  std::mt19937_64 rng(4);
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 16, -5.0, 5.0, 24);
  const int r = 4;
  const Vec e = oracle::gaussian(g.nx(), rng, 0.5);
  const Vec eps = oracle::gaussian(g.nx(), rng).array().abs() + 0.1;
  const FPWeights w = compute_weights(e, eps, g);
  const Mat x = oracle::orthonormal(g.nx(), r, g.dx(), rng);
  const Mat v = oracle::orthonormal(g.nv(), r, g.dv(), rng);
  const VelocityGram vg = gram_velocity(v, velocity_ops(w, g), g);
  const SpatialGram xg = gram_spatial(x, w, g);

  // <L_h(X_k V_l) / eps, X_i V_j>_xv split into the beta and 1/beta parts.
  const Vec ones = Vec::Ones(g.nx());
  const Vec zero = Vec::Zero(g.nx());
  for (int i = 0; i < r; ++i) {
    for (int k = 0; k < r; ++k) {
      for (int j = 0; j < r; ++j) {
        for (int l = 0; l < r; ++l) {
          const Mat fkl = x.col(k) * v.col(l).transpose();
          const Mat lf = oracle::fp_flux_form(fkl, e, g);
          const Mat proj = (eps.cwiseInverse().asDiagonal() * lf).cwiseProduct(
              x.col(i) * v.col(j).transpose());
          const double ref = proj.sum() * g.dx() * g.dv();
          const double sep = xg.p(i, k) * vg.a(j, l) + xg.q(i, k) * vg.b(j, l);
          CHECK(sep == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
        }
      }
    }
  }
  CHECK(xg.p.isApprox(xg.p.transpose()));
  CHECK(orthonormality_defect(x, g.dx()) < 1e-13);
}

TEST_CASE("grams reject non-orthonormal bases") {
  const PhaseGrid g = grid32();
  const FPWeights w = compute_weights(Vec::Zero(g.nx()), Vec::Ones(g.nx()), g);
  CHECK_THROWS_AS(gram_spatial(Mat::Ones(g.nx(), 2), w, g), NumericalError);
  CHECK_THROWS_AS(gram_velocity(Mat::Ones(g.nv(), 2), velocity_ops(w, g), g), NumericalError);
  CHECK_THROWS_AS(gram_spatial(Mat::Ones(3, 2), w, g), DimensionError);
}

TEST_CASE("weights reject bad eps and overflowing fields") {
  const PhaseGrid g = grid32();
  CHECK_THROWS_AS(compute_weights(Vec::Zero(g.nx()), Vec::Zero(g.nx()), g), ConfigError);
  CHECK_THROWS_AS(compute_weights(Vec::Constant(g.nx(), 1e5), Vec::Ones(g.nx()), g),
                  NumericalError);
  CHECK_THROWS_AS(compute_weights(Vec::Zero(3), Vec::Ones(g.nx()), g), DimensionError);
}
