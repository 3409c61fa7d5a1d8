#pragma once

#include <span>

#include "mmaddress/model.hpp"
#include "mmaddress/numerics.hpp"
#include "mmaddress/types.hpp"

namespace mmaddress {

/// The n_ions x n_sections matrix of relative distance factors
/// m_ij = (1 + [(i-j)*d/r]^2)^(-3/2). Toeplitz by construction: ion i and
/// electrode j sit at axial coordinates i*d and j*d, so m_ii = 1.
struct DistanceFactorMatrix {
    DenseMatrix m;
    Real ratio = 0;  // d/r
};

/// Perpendicular field sampled along the trap axis for a given electrode
/// voltage set.
struct FieldProfile {
    Vec z_m;          // strictly increasing sample positions
    Vec e_perp;       // V/m at each sample
    Vec voltages_V;   // electrode voltages the profile was computed for
};

/// Sphere-electrode field magnitude U*d/(2*dist^2) at distance `dist` from a
/// section of length d held at voltage U.
Real electrode_field_magnitude(Real voltage_V, Real d_m, Real dist_m);

DistanceFactorMatrix build_distance_factors(const TrapGeometry& geometry);

/// E_i = sum_j m_ij * U_j * d / (2 r^2), the total perpendicular field at
/// each ion position.
Vec perpendicular_field_at_ions(const TrapGeometry& geometry, std::span<const Real> voltages_V);

/// E_perp(z) = sum_j U_j*d*r / (2*(r^2 + (z - j*d)^2)^(3/2)) on a uniform
/// grid of n_samples points over [z_min, z_max].
FieldProfile perpendicular_field_profile(const TrapGeometry& geometry,
                                         std::span<const Real> voltages_V,
                                         Real z_min_m, Real z_max_m, int n_samples);

/// Signed axial component E_z,i = sum_j U_j*d^2*(i-j) / (2*(r^2+((i-j)d)^2)^(3/2)).
Vec axial_field_at_ions(const TrapGeometry& geometry, std::span<const Real> voltages_V);

}  // namespace mmaddress
