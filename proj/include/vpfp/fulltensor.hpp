#pragma once

#include "vpfp/steppers.hpp"

namespace vpfp {

/// Dense reference solver. Shares A_h, L_h and the Poisson solve with the
/// low-rank path; meant for grids of at most a few hundred points per axis.

/// Solves (I - (c / eps_p)(beta_p T_alpha + T_inv_alpha / beta_p)) f_p = rhs_p
/// for every cell p by the Thomas algorithm.
Mat solve_implicit_full(const Mat& rhs, const FPWeights& weights, const FPVelocityOps& ops,
                        double c);

/// L_h f / eps.
Mat apply_collision_full(const Mat& f, const FPWeights& weights, const PhaseGrid& grid);

/// Backward Euler for collisions, forward Euler for transport, with E^{n+1}
/// from the explicitly predicted density.
std::pair<Mat, StepReport> full_step_first(const Mat& f, const Vec& eta, const PhaseGrid& grid,
                                           const StepConfig& cfg);

/// Implicit-midpoint stage with E^{n+1/2} followed by the trapezoidal step
/// with E^n and E^{n+1}.
std::pair<Mat, StepReport> full_step_second(const Mat& f, const Vec& eta, const PhaseGrid& grid,
                                            const StepConfig& cfg);

std::pair<Mat, StepReport> full_step(const Mat& f, const Vec& eta, const PhaseGrid& grid,
                                     const StepConfig& cfg);

}  // namespace vpfp
