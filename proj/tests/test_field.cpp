#include "oracles.hpp"
#include "vpfp/field.hpp"
#include "vpfp/scenarios.hpp"

#include <doctest.h>

#include <vector>

using namespace vpfp;

namespace {

// -phi'' = a sin(2 pi x) on [0, 1]: E = -a cos(2 pi x) / (2 pi).
double manufactured_error(int nx) {
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, nx, -1.0, 1.0, 4);
  const double a = 0.7;
  Vec rho(nx), eta = Vec::Constant(nx, 1.0);
  Vec exact(nx);
  for (int p = 0; p < nx; ++p) {
    const double x = g.x()(p);
    rho(p) = 1.0 + a * std::sin(2 * M_PI * x);
    exact(p) = -a * std::cos(2 * M_PI * x) / (2 * M_PI);
  }
  return (solve_poisson(rho, eta, g).efield - exact).lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_CASE("Poisson: discrete Laplacian of phi reproduces the source") {
  std::mt19937_64 rng(11);
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 17, -1.0, 1.0, 4);
  const Vec rho = oracle::gaussian(17, rng).array() + 3.0;
  const Vec eta = Vec::Constant(17, 3.0);
  const FieldState fs = solve_poisson(rho, eta, g);
  const Vec src = (rho - eta).array() - (rho - eta).mean();
  const double h2 = g.dx() * g.dx();
  for (int p = 0; p < 17; ++p) {
    const double lap = (2 * fs.phi(p) - fs.phi((p + 16) % 17) - fs.phi((p + 1) % 17)) / h2;
    CHECK(lap == doctest::Approx(src(p)).epsilon(1e-10).scale(1.0));
  }
  CHECK(std::abs(fs.phi.mean()) < 1e-14);
  CHECK(std::abs(fs.efield.sum()) < 1e-10);
}

TEST_CASE("Poisson: second-order convergence of E on a manufactured solution") {
  std::vector<double> h, err;
  for (int nx : {32, 64, 128, 256}) {
    h.push_back(1.0 / nx);
    err.push_back(manufactured_error(nx));
  }
  const double slope = loglog_slope(h, err);
  CHECK(slope >= 1.8);
  CHECK(slope <= 2.2);
}

TEST_CASE("Poisson: neutral data raise no warning, charged data do") {
  const PhaseGrid g = PhaseGrid::make(0.0, 1.0, 8, -1.0, 1.0, 4);
  const FieldState ok = solve_poisson(Vec::Ones(8), Vec::Ones(8), g);
  CHECK_FALSE(ok.neutrality_warning);
  CHECK(ok.efield.cwiseAbs().maxCoeff() < 1e-14);
  const FieldState bad = solve_poisson(Vec::Constant(8, 2.0), Vec::Ones(8), g);
  CHECK(bad.neutrality_warning);
  CHECK(bad.neutrality_residual == doctest::Approx(1.0));
  CHECK(bad.efield.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("field energy") {
  const PhaseGrid g = PhaseGrid::make(0.0, 2.0, 4, -1.0, 1.0, 4);
  CHECK(field_energy(Vec::Constant(4, 2.0), g) == doctest::Approx(4.0));
  CHECK_THROWS_AS(solve_poisson(Vec::Ones(3), Vec::Ones(4), g), DimensionError);
}
