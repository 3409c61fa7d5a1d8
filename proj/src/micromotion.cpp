#include "mmaddress/micromotion.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mmaddress/fields.hpp"
#include "mmaddress/numerics.hpp"

namespace mmaddress {

namespace {

constexpr Real kJ1ArgMax = 1.8412L;     // argmax of J1 on [0, 12]
constexpr Real kRatioLimit = 0.5817L;   // just below max J1 = 0.58187

void check_xi_consistency(const Scenario& scenario, Real displacement_y, Real xi) {
    // Independent branch: invert the displacement relation back to the field
    // and take xi = 2*E*r^2/V. Algebraically identical to y*q/2, so any
    // disagreement beyond rounding means the scenario fields were mutated
    // inconsistently somewhere upstream.
    const Real q = q_parameter(scenario);
    const Real omega = scenario.drive.omega_rf;
    const Real e_implied = displacement_y * scenario.species.mass_kg * q * q * omega * omega /
                           (8 * scenario.species.charge_C);
    const Real xi_field = 2 * e_implied * scenario.geometry.r_m * scenario.geometry.r_m /
                          scenario.drive.amplitude_V;
    const Real scale = std::max(std::abs(xi), std::abs(xi_field));
    if (std::abs(xi - xi_field) > 1e-12L * scale) {
        std::ostringstream msg;
        msg << "micromotion amplitude branches disagree: y*q/2 = " << static_cast<double>(xi)
            << " vs 2*E*r^2/V = " << static_cast<double>(xi_field);
        throw NumericalError(msg.str());
    }
}

}  // namespace

Real displacement(const Scenario& scenario, Real e_perp) {
    if (!std::isfinite(e_perp)) {
        throw std::invalid_argument("displacement: field must be finite");
    }
    const Real q = q_parameter(scenario);
    const Real omega = scenario.drive.omega_rf;
    return 8 * scenario.species.charge_C * e_perp /
           (scenario.species.mass_kg * q * q * omega * omega);
}

Real micromotion_amplitude(const Scenario& scenario, Real displacement_y) {
    if (!std::isfinite(displacement_y)) {
        throw std::invalid_argument("micromotion_amplitude: displacement must be finite");
    }
    const Real xi = displacement_y * q_parameter(scenario) / 2;
    check_xi_consistency(scenario, displacement_y, xi);
    return xi;
}

Real modulation_index(const Scenario& scenario, Real micromotion_amp) {
    if (!(micromotion_amp >= 0)) {
        throw std::invalid_argument("modulation_index: amplitude must be >= 0");
    }
    return scenario.laser.k_rad_per_m * micromotion_amp;
}

Real rabi_ratio(Real kappa) { return bessel_j1(kappa); }

Real kappa_for_ratio(Real target_ratio) {
    if (!(target_ratio > 0) || !(target_ratio < kRatioLimit)) {
        std::ostringstream msg;
        msg << "kappa_for_ratio: target " << static_cast<double>(target_ratio)
            << " outside (0, " << static_cast<double>(kRatioLimit) << ")";
        throw std::domain_error(msg.str());
    }
    // J1 is strictly increasing up to its first maximum, so bisection on
    // [0, 1.8412] brackets the smallest root.
    Real lo = 0;
    Real hi = kJ1ArgMax;
    while (hi - lo > 1e-13L) {
        const Real mid = (lo + hi) / 2;
        if (bessel_j1(mid) < target_ratio) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

MotionReport motion_report(const Scenario& scenario, const VoltageSolution& solution) {
    const TrapGeometry& g = scenario.geometry;
    if (solution.voltages_V.size() != static_cast<std::size_t>(g.n_sections)) {
        throw std::invalid_argument("motion_report: solution does not match scenario geometry");
    }
    MotionReport report;
    report.q = q_parameter(scenario);
    report.e_perp = perpendicular_field_at_ions(g, solution.voltages_V);
    const std::size_t n = report.e_perp.size();
    report.displacement_y.resize(n);
    report.micromotion_amp.resize(n);
    report.kappa.resize(n);
    report.rabi_ratio.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Signed chain: off-target residual fields may point either way.
        const Real y = displacement(scenario, report.e_perp[i]);
        const Real xi = y * report.q / 2;
        check_xi_consistency(scenario, y, xi);
        report.displacement_y[i] = y;
        report.micromotion_amp[i] = xi;
        report.kappa[i] = scenario.laser.k_rad_per_m * xi;
        report.rabi_ratio[i] = bessel_j1(report.kappa[i]);
    }
    if (scenario.axial_secular_freq) {
        const Real omega_z = *scenario.axial_secular_freq;
        report.axial_field = axial_field_at_ions(g, solution.voltages_V);
        Vec disp(n);
        for (std::size_t i = 0; i < n; ++i) {
            disp[i] = scenario.species.charge_C * (*report.axial_field)[i] /
                      (scenario.species.mass_kg * omega_z * omega_z);
        }
        report.axial_displacement = std::move(disp);
    }
    return report;
}

}  // namespace mmaddress
