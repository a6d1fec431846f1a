#include "oracles.hpp"
#include "vpfp/fokker_planck.hpp"
#include "vpfp/lowrank.hpp"

#include <doctest.h>

using namespace vpfp;

TEST_CASE("weighted QR: orthonormal Q, triangular R, exact product") {
  std::mt19937_64 rng(8);
  const double w = 0.125;
  const Mat a = oracle::gaussian(20, 5, rng);
  const WeightedQR qr = weighted_qr(a, w);
  CHECK(orthonormality_defect(qr.q, w) < 1e-13);
  CHECK((qr.q * qr.r - a).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 0; i < 5; ++i) {
    CHECK(qr.r(i, i) >= 0.0);
    for (int j = 0; j < i; ++j) CHECK(qr.r(i, j) == 0.0);
  }
}

TEST_CASE("weighted QR of dependent columns keeps Q orthonormal") {
  std::mt19937_64 rng(9);
  Mat a = oracle::gaussian(10, 4, rng);
  a.col(2) = 2.0 * a.col(0) - a.col(1);
  a.col(3).setZero();
  const WeightedQR qr = weighted_qr(a, 0.5);
  CHECK(orthonormality_defect(qr.q, 0.5) < 1e-12);
  CHECK(qr.r(2, 2) == 0.0);
  CHECK(qr.r(3, 3) == 0.0);
  CHECK((qr.q * qr.r - a).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(weighted_qr(Mat::Ones(2, 3), 1.0), DimensionError);
}

TEST_CASE("weighted QR keeps small but genuine columns") {
  Mat a = Mat::Zero(6, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1e-12;
  const WeightedQR qr = weighted_qr(a, 1.0);
  CHECK(qr.r(1, 1) == doctest::Approx(1e-12));
  CHECK(std::abs(qr.q(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("initial compression is the optimal weighted truncation") {
  std::mt19937_64 rng(10);
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 12, -3.0, 3.0, 9);
  const Mat f = oracle::gaussian(12, 9, rng);
  const Mat wf = f * std::sqrt(g.dx() * g.dv());
  const Eigen::JacobiSVD<Mat> svd(wf);
  const Vec sv = svd.singularValues();
  for (int r : {1, 3, 9}) {
    const LowRankState st = init_from_function(f, r, g);
    CHECK(orthonormality_defect(st.x, g.dx()) < 1e-12);
    CHECK(orthonormality_defect(st.v, g.dv()) < 1e-12);
    const double err = norm2_xv(reconstruct(st) - f, g);
    const double tail = sv.tail(sv.size() - r).norm();
    CHECK(err == doctest::Approx(tail).epsilon(1e-9).scale(1.0));
  }
  CHECK_THROWS_AS(init_from_function(f, 10, g), ConfigError);
  CHECK_THROWS_AS(init_from_function(f, 0, g), ConfigError);
}

TEST_CASE("K and L round trips and moments") {
  std::mt19937_64 rng(11);
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 10, -2.0, 2.0, 8);
  const LowRankState st = init_from_function(oracle::gaussian(10, 8, rng), 3, g);
  const Mat f = reconstruct(st);
  CHECK((reconstruct(from_K(to_K(st), st.v, g)) - f).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((reconstruct(from_L(to_L(st), st.x, g)) - f).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((density(st, g) - velocity_sum(f, g)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(mass(st, g) == doctest::Approx(f.sum() * g.dx() * g.dv()));
  Vec cur_ref(10);
  for (int p = 0; p < 10; ++p) cur_ref(p) = f.row(p).dot(g.v()) * g.dv();
  CHECK((current(st, g) - cur_ref).cwiseAbs().maxCoeff() < 1e-12);
  LowRankState bad = st;
  bad.v = Mat::Zero(7, 3);
  CHECK_THROWS_AS(check_state(bad, g), DimensionError);
}
