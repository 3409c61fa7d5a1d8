#include "mmaddress/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mmaddress/version.hpp"

namespace mmaddress {

namespace {

constexpr Real kTwoPi = 2 * std::numbers::pi_v<Real>;

double as_double(Real v) { return static_cast<double>(v); }

std::vector<double> as_double(const Vec& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = as_double(v[i]);
    return out;
}

std::string target_spec_text(const ModulationTarget& target) {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < target.weights.size(); ++i) {
        if (target.weights[i] == 0) continue;
        if (!first) out << ",";
        out << i + 1;
        if (target.weights[i] != 1) out << ":" << format_real(target.weights[i]);
        first = false;
    }
    return out.str();
}

}  // namespace

std::string format_real(Real value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12Lg", value);
    return buf;
}

std::string to_csv(const VoltageSolution& solution) {
    std::ostringstream out;
    out << "electrode,scaled_voltage,voltage_V\n";
    for (std::size_t j = 0; j < solution.scaled_voltages.size(); ++j) {
        out << j + 1 << "," << format_real(solution.scaled_voltages[j]) << ","
            << format_real(solution.voltages_V[j]) << "\n";
    }
    return out.str();
}

std::string to_csv(const MotionReport& report) {
    const bool axial = report.axial_field.has_value();
    std::ostringstream out;
    out << "ion,e_perp_V_per_m,y_nm,xi_nm,kappa,rabi_ratio";
    if (axial) out << ",ez_V_per_m,z_disp_nm";
    out << "\n";
    for (std::size_t i = 0; i < report.e_perp.size(); ++i) {
        out << i + 1 << "," << format_real(report.e_perp[i]) << ","
            << format_real(report.displacement_y[i] * 1e9L) << ","
            << format_real(report.micromotion_amp[i] * 1e9L) << ","
            << format_real(report.kappa[i]) << "," << format_real(report.rabi_ratio[i]);
        if (axial) {
            out << "," << format_real((*report.axial_field)[i]) << ","
                << format_real((*report.axial_displacement)[i] * 1e9L);
        }
        out << "\n";
    }
    return out.str();
}

std::string to_csv(const FieldProfile& profile) {
    std::ostringstream out;
    out << "z_um,e_perp_V_per_m\n";
    for (std::size_t i = 0; i < profile.z_m.size(); ++i) {
        out << format_real(profile.z_m[i] * 1e6L) << "," << format_real(profile.e_perp[i])
            << "\n";
    }
    return out.str();
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "param,peak_scaled_voltage,peak_voltage_V,condition_estimate\n";
    for (const SweepRow& row : rows) {
        out << format_real(row.param) << ",";
        if (row.ok) {
            out << format_real(row.peak_scaled_voltage) << "," << format_real(row.peak_voltage_V)
                << "," << format_real(row.condition_estimate);
        } else {
            out << "nan,nan,nan";
        }
        out << "\n";
    }
    return out.str();
}

std::string to_csv(const EquilibriumString& string) {
    std::ostringstream out;
    out << "ion,scaled_position\n";
    for (std::size_t i = 0; i < string.scaled_positions.size(); ++i) {
        out << i + 1 << "," << format_real(string.scaled_positions[i]) << "\n";
    }
    return out.str();
}

nlohmann::ordered_json scenario_to_json(const Scenario& scenario) {
    nlohmann::ordered_json j;
    j["mass_amu"] = as_double(scenario.species.mass_kg / constants::atomic_mass_unit);
    j["charge_e"] = static_cast<long>(
        std::floor(scenario.species.charge_C / constants::elementary_charge + 0.5L));
    j["rf_amplitude_V"] = as_double(scenario.drive.amplitude_V);
    j["rf_freq_MHz"] = as_double(scenario.drive.omega_rf / (kTwoPi * 1e6L));
    j["r_um"] = as_double(scenario.geometry.r_m * 1e6L);
    j["d_um"] = as_double(scenario.geometry.d_m * 1e6L);
    j["n_ions"] = scenario.geometry.n_ions;
    j["n_sections"] = scenario.geometry.n_sections;
    j["wavelength_nm"] = as_double(kTwoPi / scenario.laser.k_rad_per_m * 1e9L);
    j["kappa"] = as_double(scenario.target.kappa);
    j["target"] = target_spec_text(scenario.target);
    if (scenario.axial_secular_freq) {
        j["axial_freq_MHz"] = as_double(*scenario.axial_secular_freq / (kTwoPi * 1e6L));
    }
    j["q"] = as_double(q_parameter(scenario));
    return j;
}

nlohmann::ordered_json to_json(const VoltageSolution& solution) {
    nlohmann::ordered_json j;
    j["scaled_voltages"] = as_double(solution.scaled_voltages);
    j["voltages_V"] = as_double(solution.voltages_V);
    j["peak_abs_voltage_V"] = as_double(solution.peak_abs_voltage_V);
    j["residual"] = as_double(solution.diagnostics.residual_inf_norm);
    j["condition_estimate"] = as_double(solution.diagnostics.condition_estimate);
    j["achieved_kappa"] = as_double(solution.achieved_kappa);
    return j;
}

nlohmann::ordered_json to_json(const MotionReport& report) {
    nlohmann::ordered_json j;
    j["q"] = as_double(report.q);
    j["e_perp_V_per_m"] = as_double(report.e_perp);
    Vec scaled = report.displacement_y;
    for (Real& v : scaled) v *= 1e9L;
    j["y_nm"] = as_double(scaled);
    scaled = report.micromotion_amp;
    for (Real& v : scaled) v *= 1e9L;
    j["xi_nm"] = as_double(scaled);
    j["kappa"] = as_double(report.kappa);
    j["rabi_ratio"] = as_double(report.rabi_ratio);
    if (report.axial_field) {
        j["ez_V_per_m"] = as_double(*report.axial_field);
        scaled = *report.axial_displacement;
        for (Real& v : scaled) v *= 1e9L;
        j["z_disp_nm"] = as_double(scaled);
    }
    return j;
}

nlohmann::ordered_json run_report(const std::string& command, const Scenario& scenario,
                                  nlohmann::ordered_json payload) {
    nlohmann::ordered_json j;
    j["tool"] = "mmaddress";
    j["version"] = kVersion;
    j["command"] = command;
    j["scenario"] = scenario_to_json(scenario);
    j["result"] = std::move(payload);
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open output file \"" + path + "\"");
    }
    out << content;
    if (!out) {
        throw ConfigError("failed while writing output file \"" + path + "\"");
    }
}

}  // namespace mmaddress
