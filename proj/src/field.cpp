#include "vpfp/field.hpp"

#include "vpfp/linalg.hpp"

#include <cmath>

namespace vpfp {

FieldState solve_poisson(const Vec& rho, const Vec& eta, const PhaseGrid& grid) {
  check_x_vector(rho, grid, "density");
  check_x_vector(eta, grid, "background charge");
  const int n = grid.nx();
  const double dx = grid.dx();

  FieldState out;
  out.rho = rho;
  out.eta = eta;

  Vec source = rho - eta;
  const double mean = source.mean();
  const double scale = std::max(1.0, source.cwiseAbs().maxCoeff());
  out.neutrality_residual = mean;
  out.neutrality_warning = std::abs(mean) > 1e-6 * scale;
  source.array() -= mean;

  // The periodic Laplacian is singular (constants). Pinning phi at the last
  // node leaves a nonsingular (n-1) tridiagonal system; the dropped row is
  // implied because the source has zero mean.
  Vec phi = Vec::Zero(n);
  const int m = n - 1;
  Vec lower = Vec::Constant(m, -1.0);
  Vec diag = Vec::Constant(m, 2.0);
  Vec upper = Vec::Constant(m, -1.0);
  lower[0] = 0.0;
  upper[m - 1] = 0.0;
  Vec rhs = source.head(m) * (dx * dx);
  phi.head(m) = solve_tridiagonal(lower, diag, upper, rhs, "periodic Poisson");
  phi.array() -= phi.mean();

  Vec e(n);
  for (int p = 0; p < n; ++p) {
    const int pl = (p + n - 1) % n;
    const int pr = (p + 1) % n;
    e[p] = -(phi[pr] - phi[pl]) / (2.0 * dx);
  }
  out.phi = std::move(phi);
  out.efield = std::move(e);
  return out;
}

double field_energy(const Vec& efield, const PhaseGrid& grid) {
  return 0.5 * inner_x(efield, efield, grid);
}

}  // namespace vpfp
