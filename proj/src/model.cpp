#include "mmaddress/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace mmaddress {

namespace {

constexpr Real kTwoPi = 2 * std::numbers::pi_v<Real>;
constexpr Real kQLimit = 0.9L;

const std::vector<std::string> kRequiredKeys = {
    "mass_amu", "charge_e",     "rf_amplitude_V", "rf_freq_MHz", "r_um", "d_um",
    "n_ions",   "n_sections",   "wavelength_nm",  "kappa",       "target",
};
const std::vector<std::string> kOptionalKeys = {"axial_freq_MHz"};

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string piece;
    std::istringstream in(s);
    while (std::getline(in, piece, sep)) out.push_back(piece);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

Real parse_number(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    std::size_t consumed = 0;
    Real parsed = 0;
    try {
        parsed = std::stold(v, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != v.size() || v.empty() || !std::isfinite(parsed)) {
        throw ConfigError("config: key \"" + key + "\" has non-numeric value \"" + value + "\"");
    }
    return parsed;
}

Real parse_positive(const std::string& key, const std::string& value) {
    const Real parsed = parse_number(key, value);
    if (parsed <= 0) {
        throw ConfigError("config: key \"" + key + "\" must be positive, got \"" + value + "\"");
    }
    return parsed;
}

long parse_positive_int(const std::string& key, const std::string& value) {
    const Real parsed = parse_positive(key, value);
    const Real rounded = std::floor(parsed + 0.5L);
    if (std::abs(parsed - rounded) > 0 || rounded > 1e9L) {
        throw ConfigError("config: key \"" + key + "\" must be a positive integer, got \"" +
                          value + "\"");
    }
    return static_cast<long>(rounded);
}

std::string format_lab(Real value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15Lg", value);
    return buf;
}

}  // namespace

Real wavevector_from_wavelength(Real lambda_m) {
    if (!(lambda_m > 0) || !std::isfinite(lambda_m)) {
        throw ConfigError("wavelength must be positive, got " + format_lab(lambda_m));
    }
    return kTwoPi / lambda_m;
}

Real q_parameter(const Scenario& scenario) {
    const Real r = scenario.geometry.r_m;
    const Real omega = scenario.drive.omega_rf;
    return 2 * scenario.species.charge_C * scenario.drive.amplitude_V /
           (scenario.species.mass_kg * r * r * omega * omega);
}

Vec parse_target_spec(const std::string& spec, int n_ions) {
    if (n_ions < 1) {
        throw std::invalid_argument("parse_target_spec: n_ions must be >= 1");
    }
    const std::string trimmed = trim(spec);
    if (trimmed.empty()) {
        throw ConfigError("target: empty spec");
    }
    Vec weights(static_cast<std::size_t>(n_ions), 0);
    std::vector<bool> seen(static_cast<std::size_t>(n_ions), false);
    for (const std::string& raw : split(trimmed, ',')) {
        const std::string token = trim(raw);
        if (token.empty()) {
            throw ConfigError("target: empty entry in \"" + spec + "\"");
        }
        std::string index_part = token;
        Real weight = 1;
        const std::size_t colon = token.find(':');
        if (colon != std::string::npos) {
            index_part = trim(token.substr(0, colon));
            const std::string weight_part = trim(token.substr(colon + 1));
            std::size_t weight_consumed = 0;
            try {
                weight = std::stold(weight_part, &weight_consumed);
            } catch (const std::exception&) {
                weight_consumed = 0;
            }
            if (weight_consumed != weight_part.size() || weight_part.empty() ||
                !std::isfinite(weight)) {
                throw ConfigError("target: bad weight \"" + weight_part + "\" in \"" + token +
                                  "\"");
            }
        }
        std::size_t consumed = 0;
        long index = 0;
        try {
            index = std::stol(index_part, &consumed);
        } catch (const std::exception&) {
            consumed = 0;
        }
        if (consumed != index_part.size() || index_part.empty()) {
            throw ConfigError("target: bad ion index \"" + index_part + "\"");
        }
        if (index < 1 || index > n_ions) {
            std::ostringstream msg;
            msg << "target: ion index " << index << " out of range 1.." << n_ions;
            throw ConfigError(msg.str());
        }
        if (seen[static_cast<std::size_t>(index - 1)]) {
            std::ostringstream msg;
            msg << "target: duplicate ion index " << index;
            throw ConfigError(msg.str());
        }
        seen[static_cast<std::size_t>(index - 1)] = true;
        weights[static_cast<std::size_t>(index - 1)] = weight;
    }
    if (std::all_of(weights.begin(), weights.end(), [](Real w) { return w == 0; })) {
        throw ConfigError("target: all weights are zero in \"" + spec + "\"");
    }
    return weights;
}

Scenario load_scenario(const std::string& config_text) {
    std::map<std::string, std::string> values;
    std::istringstream in(config_text);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line \"" + stripped + "\" is not a key = value pair");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config: missing key before '=' in \"" + stripped + "\"");
        }
        const bool known =
            std::find(kRequiredKeys.begin(), kRequiredKeys.end(), key) != kRequiredKeys.end() ||
            std::find(kOptionalKeys.begin(), kOptionalKeys.end(), key) != kOptionalKeys.end();
        if (!known) {
            throw ConfigError("config: unknown key \"" + key + "\"");
        }
        if (values.count(key) != 0) {
            throw ConfigError("config: duplicate key \"" + key + "\"");
        }
        values[key] = value;
    }
    for (const std::string& key : kRequiredKeys) {
        if (values.count(key) == 0) {
            throw ConfigError("config: missing key \"" + key + "\"");
        }
    }

    Scenario s;
    s.species.mass_kg = parse_positive("mass_amu", values["mass_amu"]) * constants::atomic_mass_unit;
    s.species.charge_C =
        static_cast<Real>(parse_positive_int("charge_e", values["charge_e"])) *
        constants::elementary_charge;
    s.drive.amplitude_V = parse_positive("rf_amplitude_V", values["rf_amplitude_V"]);
    s.drive.omega_rf = parse_positive("rf_freq_MHz", values["rf_freq_MHz"]) * 1e6L * kTwoPi;
    s.geometry.r_m = parse_positive("r_um", values["r_um"]) * 1e-6L;
    s.geometry.d_m = parse_positive("d_um", values["d_um"]) * 1e-6L;
    s.geometry.n_ions = static_cast<int>(parse_positive_int("n_ions", values["n_ions"]));
    s.geometry.n_sections = static_cast<int>(parse_positive_int("n_sections", values["n_sections"]));
    if (s.geometry.n_sections < s.geometry.n_ions) {
        std::ostringstream msg;
        msg << "config: n_sections < n_ions (" << s.geometry.n_sections << " < "
            << s.geometry.n_ions << ")";
        throw ConfigError(msg.str());
    }
    s.laser.k_rad_per_m =
        wavevector_from_wavelength(parse_positive("wavelength_nm", values["wavelength_nm"]) * 1e-9L);
    s.target.kappa = parse_positive("kappa", values["kappa"]);
    s.target.weights = parse_target_spec(values["target"], s.geometry.n_ions);
    if (values.count("axial_freq_MHz") != 0) {
        s.axial_secular_freq = parse_positive("axial_freq_MHz", values["axial_freq_MHz"]) * 1e6L * kTwoPi;
    }

    const Real q = q_parameter(s);
    if (!(q < kQLimit)) {
        std::ostringstream msg;
        msg << "config: q = " << static_cast<double>(q) << " >= " << static_cast<double>(kQLimit)
            << ", pseudopotential invalid (lower rf_amplitude_V or raise rf_freq_MHz)";
        throw ConfigError(msg.str());
    }
    return s;
}

std::string to_config_text(const Scenario& scenario) {
    std::ostringstream out;
    out << "mass_amu = " << format_lab(scenario.species.mass_kg / constants::atomic_mass_unit)
        << "\n";
    out << "charge_e = "
        << static_cast<long>(std::floor(
               scenario.species.charge_C / constants::elementary_charge + 0.5L))
        << "\n";
    out << "rf_amplitude_V = " << format_lab(scenario.drive.amplitude_V) << "\n";
    out << "rf_freq_MHz = " << format_lab(scenario.drive.omega_rf / (kTwoPi * 1e6L)) << "\n";
    out << "r_um = " << format_lab(scenario.geometry.r_m * 1e6L) << "\n";
    out << "d_um = " << format_lab(scenario.geometry.d_m * 1e6L) << "\n";
    out << "n_ions = " << scenario.geometry.n_ions << "\n";
    out << "n_sections = " << scenario.geometry.n_sections << "\n";
    out << "wavelength_nm = " << format_lab(kTwoPi / scenario.laser.k_rad_per_m * 1e9L) << "\n";
    out << "kappa = " << format_lab(scenario.target.kappa) << "\n";
    out << "target = ";
    bool first = true;
    for (std::size_t i = 0; i < scenario.target.weights.size(); ++i) {
        if (scenario.target.weights[i] == 0) continue;
        if (!first) out << ",";
        out << i + 1;
        if (scenario.target.weights[i] != 1) out << ":" << format_lab(scenario.target.weights[i]);
        first = false;
    }
    out << "\n";
    if (scenario.axial_secular_freq) {
        out << "axial_freq_MHz = " << format_lab(*scenario.axial_secular_freq / (kTwoPi * 1e6L))
            << "\n";
    }
    return out.str();
}

}  // namespace mmaddress
