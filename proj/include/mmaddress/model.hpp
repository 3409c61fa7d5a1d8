#pragma once

#include <optional>
#include <string>

#include "mmaddress/types.hpp"

namespace mmaddress {

namespace constants {
inline constexpr Real elementary_charge = 1.602176634e-19L;  // C (exact)
inline constexpr Real atomic_mass_unit = 1.66053906660e-27L;  // kg (CODATA 2018)
}  // namespace constants

struct IonSpecies {
    Real mass_kg = 0;    // ingested as atomic mass units
    Real charge_C = 0;   // ingested as integer multiples of e
};

struct RfDrive {
    Real amplitude_V = 0;  // rf amplitude V
    Real omega_rf = 0;     // rad/s, ingested as a MHz frequency
};

struct TrapGeometry {
    Real r_m = 0;        // ion-to-electrode distance
    Real d_m = 0;        // section length = inter-ion spacing
    int n_sections = 0;  // electrode sections, >= n_ions
    int n_ions = 0;
};

struct LaserCoupling {
    Real k_rad_per_m = 0;  // wavevector (or Raman wavevector difference) magnitude
};

/// Per-ion target pattern e_i and the global modulation index kappa.
struct ModulationTarget {
    Vec weights;     // length n_ions; unit vector at l addresses exactly ion l
    Real kappa = 0;  // dimensionless, > 0
};

struct Scenario {
    IonSpecies species;
    RfDrive drive;
    TrapGeometry geometry;
    LaserCoupling laser;
    ModulationTarget target;
    std::optional<Real> axial_secular_freq;  // rad/s; axial displacement reporting only
};

/// k = 2*pi/lambda. Throws ConfigError for non-positive wavelength.
Real wavevector_from_wavelength(Real lambda_m);

/// Mathieu q = 2*Q*V / (m * r^2 * Omega_rf^2) for the scenario's drive and
/// geometry. Scenarios with q >= 0.9 are rejected at load: beyond the lowest
/// stability region the pseudopotential displacement relations are meaningless.
Real q_parameter(const Scenario& scenario);

/// Parses a target spec: comma-separated 1-based ion indices, each optionally
/// `index:weight`. Returns a weight vector of length n_ions.
Vec parse_target_spec(const std::string& spec, int n_ions);

/// Parses the flat `key = value` scenario config (lab units: amu, e, V, MHz,
/// um, nm) and returns a fully validated SI-unit Scenario. Errors name the
/// offending key and value.
Scenario load_scenario(const std::string& config_text);

/// Re-emits a Scenario as config text in lab units; numeric values round-trip
/// through load_scenario to at least 12 significant digits.
std::string to_config_text(const Scenario& scenario);

}  // namespace mmaddress
