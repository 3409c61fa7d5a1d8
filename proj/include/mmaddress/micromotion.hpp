#pragma once

#include <optional>

#include "mmaddress/addressing.hpp"
#include "mmaddress/model.hpp"
#include "mmaddress/types.hpp"

namespace mmaddress {

/// Per-ion motional/optical chain for one voltage solution: perpendicular
/// field, static displacement, micromotion amplitude, modulation index and
/// first-sideband Rabi ratio. Axial columns only when the scenario carries an
/// axial secular frequency.
struct MotionReport {
    Real q = 0;
    Vec e_perp;            // V/m
    Vec displacement_y;    // m
    Vec micromotion_amp;   // m, xi_i = y_i*q/2 = 2*E_i*r^2/V
    Vec kappa;             // k * xi_i
    Vec rabi_ratio;        // J1(kappa_i) = Omega_m/Omega_0
    std::optional<Vec> axial_field;         // V/m
    std::optional<Vec> axial_displacement;  // m, Q*E_z/(m*omega_z^2)
};

/// Static perpendicular displacement y = 8*Q*E/(m*q^2*Omega_rf^2) of an ion
/// in field E.
Real displacement(const Scenario& scenario, Real e_perp);

/// Micromotion amplitude xi = y*q/2; internally cross-checked against the
/// equivalent form 2*E*r^2/V (disagreement beyond 1e-12 relative indicates an
/// upstream bug and raises NumericalError).
Real micromotion_amplitude(const Scenario& scenario, Real displacement_y);

/// Modulation index kappa = k*xi (k taken parallel to the displacement).
Real modulation_index(const Scenario& scenario, Real micromotion_amp);

/// First micromotion sideband Rabi ratio Omega_m/Omega_0 = J1(kappa).
Real rabi_ratio(Real kappa);

/// Smallest kappa > 0 with J1(kappa) = target_ratio, by bisection on
/// [0, 1.8412]. Valid for 0 < target_ratio < 0.5817 (below the J1 maximum).
Real kappa_for_ratio(Real target_ratio);

/// Full per-ion chain for a solved scenario.
MotionReport motion_report(const Scenario& scenario, const VoltageSolution& solution);

}  // namespace mmaddress
