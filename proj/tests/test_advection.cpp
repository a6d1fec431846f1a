#include "oracles.hpp"
#include "vpfp/advection.hpp"

#include <doctest.h>

using namespace vpfp;

TEST_CASE("upwind transport matches the per-entry formula") {
  std::mt19937_64 rng(5);
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 10, -3.0, 3.0, 7);
  const Mat f = oracle::gaussian(10, 7, rng);
  CHECK((apply_advection_full(f, g) - oracle::upwind(f, g)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("periodic differences") {
  Mat a(4, 1);
  a << 1, 2, 4, 8;
  const Mat dm = d_minus(a, 0.5);
  const Mat dp = d_plus(a, 0.5);
  CHECK(dm(0, 0) == doctest::Approx(-14.0));
  CHECK(dm(2, 0) == doctest::Approx(4.0));
  CHECK(dp(3, 0) == doctest::Approx(-14.0));
  CHECK(dp(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("transport conserves total mass and kills x-constant data") {
  std::mt19937_64 rng(6);
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 12, -4.0, 4.0, 9);
  const Mat f = oracle::gaussian(12, 9, rng);
  CHECK(std::abs(apply_advection_full(f, g).sum()) < 1e-10);
  const Mat flat = Vec::Ones(12) * oracle::gaussian(9, rng).transpose();
  CHECK(apply_advection_full(flat, g).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("K, S, L projections equal dense projections of A_h f") {
  std::mt19937_64 rng(7);
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 14, -5.0, 5.0, 18);
  const int r = 3;
  const Mat x = oracle::orthonormal(g.nx(), r, g.dx(), rng);
  const Mat v = oracle::orthonormal(g.nv(), r, g.dv(), rng);
  const Mat s = oracle::gaussian(r, r, rng);

  const Mat k = x * s;
  const Mat af_k = oracle::upwind(k * v.transpose(), g);
  CHECK((project_advection_K(k, v, g) - af_k * v * g.dv()).cwiseAbs().maxCoeff() < 1e-10);

  const Mat f = x * s * v.transpose();
  const Mat af = oracle::upwind(f, g);
  const Mat ref_s = x.transpose() * af * v * g.dx() * g.dv();
  CHECK((project_advection_S(s, x, v, g) - ref_s).cwiseAbs().maxCoeff() < 1e-10);

  const Mat l = v * s.transpose();
  const Mat ref_l = af.transpose() * x * g.dx();
  CHECK((project_advection_L(l, x, g) - ref_l).cwiseAbs().maxCoeff() < 1e-10);

  const Vec moment = velocity_sum(af_k, g);
  CHECK((advection_density_moment(k, v, g) - moment).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("moment matrices and CFL") {
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 10, -3.0, 3.0, 6);
  const Mat v = Vec::Constant(6, 1.0 / std::sqrt(6.0 * g.dv()));
  const VelocityMoments m = velocity_moment_mats(v, g);
  // <v+ c, c>_v with c^2 dv sum = 1: mean of v+ over the six cells
  CHECK(m.c_plus(0, 0) == doctest::Approx((0.5 + 1.5 + 2.5) / 6.0));
  CHECK(m.c_minus(0, 0) == doctest::Approx(-(0.5 + 1.5 + 2.5) / 6.0));
  CHECK(cfl_number(0.01, g) == doctest::Approx(0.01 * 2.5 / 0.1));
  CHECK(v_plus(g)(0) == 0.0);
  CHECK(v_minus(g)(5) == 0.0);
  CHECK_THROWS_AS(velocity_moment_mats(Mat::Ones(3, 1), g), DimensionError);
}
