#include "oracles.hpp"
#include "vpfp/fulltensor.hpp"
#include "vpfp/steppers.hpp"

#include <doctest.h>

using namespace vpfp;

namespace {

struct Setup {
  PhaseGrid g = PhaseGrid::make(0.0, 1.0, 10, -4.0, 4.0, 12);
  int r = 3;
  Vec e, eps;
  FPWeights w;
  Mat x, v;
};

Setup make_setup(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Setup s;
  s.e = oracle::gaussian(s.g.nx(), rng, 0.4);
  s.eps = oracle::gaussian(s.g.nx(), rng).array().abs() + 0.2;
  s.w = compute_weights(s.e, s.eps, s.g);
  s.x = oracle::orthonormal(s.g.nx(), s.r, s.g.dx(), rng);
  s.v = oracle::orthonormal(s.g.nv(), s.r, s.g.dv(), rng);
  return s;
}

// L_h f / eps from the flux form.
Mat collision(const Mat& f, const Setup& s) {
  return s.eps.cwiseInverse().asDiagonal() * oracle::fp_flux_form(f, s.e, s.g);
}

Mat k_action(const Mat& k, const Setup& s) {
  return collision(k * s.v.transpose(), s) * s.v * s.g.dv();
}
Mat s_action(const Mat& m, const Setup& s) {
  return s.x.transpose() * collision(s.x * m * s.v.transpose(), s) * s.v * s.g.dx() * s.g.dv();
}
Mat l_action(const Mat& l, const Setup& s) {
  return collision(s.x * l.transpose(), s).transpose() * s.x * s.g.dx();
}

// Smallest-magnitude nonzero eigenpair of the E = 0 velocity operator.
std::pair<double, Vec> slow_mode(const PhaseGrid& g) {
  const Mat a = oracle::fp_row_matrix(0.0, g);
  Eigen::EigenSolver<Mat> es(a);
  int best = -1;
  for (int i = 0; i < a.rows(); ++i) {
    const double lam = es.eigenvalues()(i).real();
    if (lam < -1e-8 && (best < 0 || lam > es.eigenvalues()(best).real())) best = i;
  }
  Vec vec = es.eigenvectors().col(best).real();
  return {es.eigenvalues()(best).real(), vec};
}

}  // namespace

TEST_CASE("projected Fokker-Planck actions") {
  const Setup s = make_setup(21);
  std::mt19937_64 rng(22);
  const FPVelocityOps ops = velocity_ops(s.w, s.g);
  const VelocityGram vg = gram_velocity(s.v, ops, s.g);
  const SpatialGram xg = gram_spatial(s.x, s.w, s.g);
  const Mat k = oracle::gaussian(s.g.nx(), s.r, rng);
  const Mat m = oracle::gaussian(s.r, s.r, rng);
  const Mat l = oracle::gaussian(s.g.nv(), s.r, rng);
  CHECK((fp_action_K(k, vg, s.w) - k_action(k, s)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((fp_action_S(m, xg, vg) - s_action(m, s)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((fp_action_L(l, xg, ops) - l_action(l, s)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("implicit K, L, S solves invert the dense projected systems") {
  const Setup s = make_setup(23);
  std::mt19937_64 rng(24);
  const FPVelocityOps ops = velocity_ops(s.w, s.g);
  const VelocityGram vg = gram_velocity(s.v, ops, s.g);
  const SpatialGram xg = gram_spatial(s.x, s.w, s.g);
  const double c = 0.05;
  const int nx = s.g.nx(), nv = s.g.nv(), r = s.r;

  const Mat rk = oracle::gaussian(nx, r, rng);
  const Mat ak = oracle::dense_operator([&](const Mat& k) { return Mat(k - c * k_action(k, s)); },
                                        nx, r);
  const Mat k_ref = oracle::unvec(ak.partialPivLu().solve(oracle::vec(rk)), nx, r);
  CHECK((solve_implicit_K(rk, vg, s.w, c) - k_ref).cwiseAbs().maxCoeff() < 1e-10);

  const Mat rl = oracle::gaussian(nv, r, rng);
  const Mat al = oracle::dense_operator([&](const Mat& l) { return Mat(l - c * l_action(l, s)); },
                                        nv, r);
  const Mat l_ref = oracle::unvec(al.partialPivLu().solve(oracle::vec(rl)), nv, r);
  CHECK((solve_implicit_L(rl, xg, ops, c) - l_ref).cwiseAbs().maxCoeff() < 1e-10);

  const Mat rs = oracle::gaussian(r, r, rng);
  const Mat as = oracle::dense_operator([&](const Mat& m) { return Mat(m + c * s_action(m, s)); },
                                        r, r);
  const Mat s_ref = oracle::unvec(as.partialPivLu().solve(oracle::vec(rs)), r, r);
  CHECK((solve_implicit_S(rs, xg, vg, c) - s_ref).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("density prediction is the moment of an explicit transport step") {
  std::mt19937_64 rng(25);
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 10, -4.0, 4.0, 12);
  const LowRankState st = init_from_function(oracle::gaussian(10, 12, rng), 4, g);
  const Mat f = reconstruct(st);
  const Vec ref = velocity_sum(f + 0.01 * oracle::upwind(f, g), g);
  CHECK((predict_density(st, g, 0.01) - ref).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((predict_density(st, g, 0.01, false) - velocity_sum(f, g)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("step configuration is validated") {
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 4, -1.0, 1.0, 4);
  StepConfig c;
  c.dt = 0.1;
  c.eps = Vec::Ones(4);
  CHECK_NOTHROW(validate(c, g));
  c.dt = 0.0;
  CHECK_THROWS_AS(validate(c, g), ConfigError);
  c.dt = 0.1;
  c.order = 3;
  CHECK_THROWS_AS(validate(c, g), ConfigError);
  c.order = 1;
  c.eps(2) = -1.0;
  CHECK_THROWS_AS(validate(c, g), ConfigError);
  c.eps = Vec::Ones(3);
  CHECK_THROWS_AS(validate(c, g), ConfigError);
}

TEST_CASE("scalar amplification of a velocity eigenmode") {
  // With transport off, E = 0 and f = c(x) w(v) for an eigenvector w of the
  // velocity operator (eigenvalue lam), every scheme reduces to its scalar
  // recursion: backward Euler 1 / (1 - z), trapezoid (1 + z/2) / (1 - z/2),
  // z = lam dt / eps.
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 8, -4.0, 4.0, 16);
  const auto [lam, w] = slow_mode(g);
  const Vec cx = Vec::LinSpaced(8, 1.0, 2.0);
  const Mat f0 = cx * w.transpose();
  const double dt = 0.3, eps = 0.7;
  const double z = lam * dt / eps;

  StepConfig cfg;
  cfg.dt = dt;
  cfg.eps = Vec::Constant(8, eps);
  cfg.fixed_field = Vec::Zero(8);
  cfg.transport = false;
  const Vec eta = Vec::Zero(8);
  const LowRankState st = init_from_function(f0, 1, g);

  const double be = 1.0 / (1.0 - z);
  const double tr = (1.0 + 0.5 * z) / (1.0 - 0.5 * z);
  const double scale = f0.cwiseAbs().maxCoeff();

  cfg.order = 1;
  CHECK((reconstruct(step_lowrank(st, eta, g, cfg).first) - be * f0).cwiseAbs().maxCoeff() <
        1e-12 * scale);
  CHECK((full_step(f0, eta, g, cfg).first - be * f0).cwiseAbs().maxCoeff() < 1e-12 * scale);
  cfg.order = 2;
  CHECK((reconstruct(step_lowrank(st, eta, g, cfg).first) - tr * f0).cwiseAbs().maxCoeff() <
        1e-12 * scale);
  CHECK((full_step(f0, eta, g, cfg).first - tr * f0).cwiseAbs().maxCoeff() < 1e-12 * scale);
}

TEST_CASE("global equilibrium is a fixed point of both low-rank schemes") {
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 8, -6.0, 6.0, 24);
  const Mat f0 = Vec::Constant(8, 2.0) * oracle::maxwellian_table(Vec::Zero(8), g).row(0);
  StepConfig cfg;
  cfg.dt = 0.01;
  cfg.eps = Vec::Constant(8, 1e-6);
  const Vec eta = velocity_sum(f0, g);
  for (int order : {1, 2}) {
    cfg.order = order;
    LowRankState st = init_from_function(f0, 2, g);
    for (int n = 0; n < 5; ++n) st = step_lowrank(st, eta, g, cfg).first;
    CHECK((reconstruct(st) - f0).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("first-order step reports its field and diagnostics") {
  std::mt19937_64 rng(26);
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 12, -5.0, 5.0, 16);
  Mat f0 = oracle::maxwellian_table(Vec::Zero(12), g);
  for (int p = 0; p < 12; ++p) f0.row(p) *= 2.0 + std::cos(2 * M_PI * g.x()(p));
  const Vec eta = Vec::Constant(12, velocity_sum(f0, g).mean());
  StepConfig cfg;
  cfg.dt = 1e-3;
  cfg.eps = Vec::Ones(12);
  const LowRankState st = init_from_function(f0, 4, g);
  FirstOrderTrace trace;
  const auto [next, rep] = step_first_order(st, eta, g, cfg, &trace);
  const Vec rho_hat = predict_density(st, g, cfg.dt);
  CHECK((rep.rho_hat - rho_hat).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((rep.efield - solve_poisson(rho_hat, eta, g).efield).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((trace.next.field.efield - rep.efield).cwiseAbs().maxCoeff() == 0.0);
  CHECK(rep.mass == doctest::Approx(mass(next, g)));
  CHECK(rep.field_energy == doctest::Approx(field_energy(rep.efield, g)));
  CHECK((reconstruct(trace.before_l) - reconstruct(next)).norm() > 0.0);
}
