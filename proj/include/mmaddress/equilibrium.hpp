#pragma once

#include "mmaddress/addressing.hpp"
#include "mmaddress/model.hpp"
#include "mmaddress/types.hpp"

namespace mmaddress {

/// Equilibrium positions u_i of an n-ion string in a harmonic axial well,
/// in units of the characteristic length l with l^3 = Q^2/(4 pi eps0 m wz^2).
/// Minimizes V(u) = sum u_i^2/2 + sum_{i<j} 1/|u_i - u_j|.
struct EquilibriumString {
    Vec scaled_positions;  // strictly increasing, symmetric about 0
};

/// Damped Newton from a uniformly spaced (unit-gap) initial guess; converged
/// when the gradient infinity-norm drops below 1e-12. 1 <= n <= 200.
EquilibriumString equilibrium_positions(int n);

/// Adjacent gaps normalized by the center gap (mean of the middle one or two
/// gaps), quantifying how far the string is from uniform spacing. n >= 3.
struct SpacingDeviation {
    Vec normalized_gaps;     // gap_i / center_gap, length n-1
    Real max_deviation = 0;  // max |normalized_gap - 1|
};

SpacingDeviation spacing_deviation(int n);

/// Addressing solve with the distance-factor matrix rebuilt from exact
/// equilibrium positions, rescaled so the central gap equals d and centered
/// on the electrode array (electrodes stay at j*d). Square case only.
VoltageSolution solve_with_exact_positions(const Scenario& scenario);

}  // namespace mmaddress
