#pragma once

#include <string>

#include <json.hpp>

#include "mmaddress/addressing.hpp"
#include "mmaddress/equilibrium.hpp"
#include "mmaddress/fields.hpp"
#include "mmaddress/micromotion.hpp"
#include "mmaddress/model.hpp"

namespace mmaddress {

/// Formats a Real with 12 significant digits (the CSV interchange precision).
std::string format_real(Real value);

// CSV serializers. Headers are part of the file contract:
//   solution:    electrode,scaled_voltage,voltage_V
//   motion:      ion,e_perp_V_per_m,y_nm,xi_nm,kappa,rabi_ratio[,ez_V_per_m,z_disp_nm]
//   profile:     z_um,e_perp_V_per_m
//   sweep:       param,peak_scaled_voltage,peak_voltage_V,condition_estimate
//   equilibrium: ion,scaled_position
std::string to_csv(const VoltageSolution& solution);
std::string to_csv(const MotionReport& report);
std::string to_csv(const FieldProfile& profile);
std::string to_csv(const std::vector<SweepRow>& rows);
std::string to_csv(const EquilibriumString& string);

nlohmann::ordered_json scenario_to_json(const Scenario& scenario);
nlohmann::ordered_json to_json(const VoltageSolution& solution);
nlohmann::ordered_json to_json(const MotionReport& report);

/// Self-describing run report: tool id/version, the command, the scenario
/// echo and the command's payload. Deterministic for identical inputs.
nlohmann::ordered_json run_report(const std::string& command, const Scenario& scenario,
                                  nlohmann::ordered_json payload);

/// Writes `content` to `path`, throwing ConfigError when the file cannot be
/// opened.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mmaddress
