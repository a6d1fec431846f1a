#pragma once

#include "vpfp/grid.hpp"

namespace vpfp {

/// Charge density, background, potential and field on the periodic x grid.
struct FieldState {
  Vec rho;
  Vec eta;
  Vec phi;     // zero-mean gauge
  Vec efield;  // E = -dphi/dx, centred difference
  /// mean(rho - eta) removed from the right-hand side before solving.
  double neutrality_residual = 0.0;
  /// Set when |mean(rho - eta)| > 1e-6 max(1, max|rho - eta|).
  bool neutrality_warning = false;
};

/// Solves -phi'' = rho - eta - mean(rho - eta) with periodic 3-point
/// Laplacian and mean(phi) = 0, then E_p = -(phi_{p+1} - phi_{p-1}) / (2 dx).
FieldState solve_poisson(const Vec& rho, const Vec& eta, const PhaseGrid& grid);

/// 0.5 * sum E^2 dx
double field_energy(const Vec& efield, const PhaseGrid& grid);

}  // namespace vpfp
