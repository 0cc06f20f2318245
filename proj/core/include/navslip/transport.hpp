#pragma once

#include "navslip/mesh.hpp"

namespace navslip {

enum class TransportScheme { upwind1, muscl_minmod };

/// Smallest admissible density; anything at or below it halts a run.
inline constexpr double kDefaultRhoFloor = 1e-8;

/// One forward-Euler step of rho_t + div(rho u) = 0 in conservative
/// finite-volume form on the node-centred control volumes (half cells at the
/// walls). Face velocities are node averages; the wall faces carry no flux,
/// so sum(weight * rho) is conserved up to rounding.
///
/// Throws InvalidArgument if u has a normal component on a wall above
/// 1e-12, and PositivityViolation if any density ends at or below rho_floor.
ScalarField continuity_step(const ScalarField& rho, const VectorField& u,
                            double dt,
                            TransportScheme scheme = TransportScheme::upwind1,
                            double rho_floor = kDefaultRhoFloor);

/// Discrete div(rho u) of the finite-volume update, per unit volume.
ScalarField mass_flux_divergence(const ScalarField& rho, const VectorField& u,
                                 TransportScheme scheme = TransportScheme::upwind1);

/// Trapezoidal integral of rho.
double total_mass(const ScalarField& rho);

}  // namespace navslip
