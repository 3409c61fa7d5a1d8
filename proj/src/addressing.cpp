#include "mmaddress/addressing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "mmaddress/fields.hpp"

namespace mmaddress {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

Real parse_sweep_number(const std::string& text) {
    const std::string v = trim(text);
    std::size_t consumed = 0;
    Real parsed = 0;
    try {
        parsed = std::stold(v, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != v.size() || v.empty() || !std::isfinite(parsed)) {
        throw ConfigError("sweep: bad value \"" + text + "\"");
    }
    return parsed;
}

VoltageSolution solve_for_weights(const Scenario& scenario, std::span<const Real> weights) {
    const TrapGeometry& g = scenario.geometry;
    if (weights.size() != static_cast<std::size_t>(g.n_ions)) {
        throw std::invalid_argument("target weight vector length does not match n_ions");
    }
    for (Real w : weights) {
        if (!std::isfinite(w)) throw std::invalid_argument("target weights must be finite");
    }
    const DistanceFactorMatrix factors = build_distance_factors(g);
    const Real c = scenario.target.kappa / (scenario.laser.k_rad_per_m * g.d_m);
    Vec rhs(weights.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = c * weights[i];

    auto [scaled, diag] = g.n_sections == g.n_ions ? solve_square(factors.m, rhs)
                                                   : solve_min_norm(factors.m, rhs);
    VoltageSolution out;
    out.scaled_voltages = std::move(scaled);
    out.diagnostics = diag;
    out.voltages_V.resize(out.scaled_voltages.size());
    out.peak_abs_voltage_V = 0;
    for (std::size_t j = 0; j < out.scaled_voltages.size(); ++j) {
        out.voltages_V[j] = out.scaled_voltages[j] * scenario.drive.amplitude_V;
        out.peak_abs_voltage_V = std::max(out.peak_abs_voltage_V, std::abs(out.voltages_V[j]));
    }
    // Forward model: kappa_i = k*d * sum_j m_ij (U_j/V).
    out.achieved_kappa = factors.m.apply(out.scaled_voltages);
    const Real kd = scenario.laser.k_rad_per_m * g.d_m;
    for (Real& kappa : out.achieved_kappa) kappa *= kd;
    return out;
}

}  // namespace

VoltageSolution solve_addressing(const Scenario& scenario) {
    return solve_for_weights(scenario, scenario.target.weights);
}

VoltageSolution solve_pair(const Scenario& scenario, int l1, int l2) {
    const int n = scenario.geometry.n_ions;
    if (l1 < 1 || l1 > n || l2 < 1 || l2 > n) {
        std::ostringstream msg;
        msg << "pair target indices (" << l1 << ", " << l2 << ") out of range 1.." << n;
        throw std::invalid_argument(msg.str());
    }
    if (l1 == l2) {
        throw std::invalid_argument("pair target needs two distinct ions");
    }
    Vec weights(static_cast<std::size_t>(n), 0);
    weights[static_cast<std::size_t>(l1 - 1)] = 1;
    weights[static_cast<std::size_t>(l2 - 1)] = 1;
    return solve_for_weights(scenario, weights);
}

VoltageSolution solve_weighted(const Scenario& scenario, std::span<const Real> weights) {
    return solve_for_weights(scenario, weights);
}

SweepSpec parse_sweep_spec(const std::string& spec) {
    const std::string trimmed = trim(spec);
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("sweep: spec \"" + spec + "\" must look like ratio=... or n=...");
    }
    const std::string kind_name = trim(trimmed.substr(0, eq));
    const std::string body = trim(trimmed.substr(eq + 1));
    SweepSpec out;
    if (kind_name == "ratio") {
        out.kind = SweepKind::RadiusRatio;
    } else if (kind_name == "n") {
        out.kind = SweepKind::IonCount;
    } else {
        throw ConfigError("sweep: unknown parameter \"" + kind_name + "\" (use ratio or n)");
    }
    if (body.empty()) {
        throw ConfigError("sweep: no values in \"" + spec + "\"");
    }

    const std::size_t dots = body.find("..");
    if (dots != std::string::npos) {
        const Real start = parse_sweep_number(body.substr(0, dots));
        std::string rest = body.substr(dots + 2);
        Real step = 1;
        const std::size_t colon = rest.find(':');
        if (colon != std::string::npos) {
            step = parse_sweep_number(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const Real stop = parse_sweep_number(rest);
        if (!(step > 0)) {
            throw ConfigError("sweep: range step must be positive in \"" + spec + "\"");
        }
        if (stop < start) {
            throw ConfigError("sweep: empty range in \"" + spec + "\"");
        }
        for (Real v = start; v <= stop + step * 1e-9L; v += step) out.values.push_back(v);
    } else {
        std::istringstream in(body);
        std::string piece;
        while (std::getline(in, piece, ',')) out.values.push_back(parse_sweep_number(piece));
        if (!body.empty() && body.back() == ',') {
            throw ConfigError("sweep: trailing comma in \"" + spec + "\"");
        }
    }
    if (out.values.empty()) {
        throw ConfigError("sweep: no values in \"" + spec + "\"");
    }
    for (Real v : out.values) {
        if (out.kind == SweepKind::IonCount) {
            if (v < 1 || v != std::floor(v)) {
                throw ConfigError("sweep: ion counts must be positive integers");
            }
        } else if (!(v > 0)) {
            throw ConfigError("sweep: ratios must be positive");
        }
    }
    return out;
}

std::vector<SweepRow> conditioning_sweep(const Scenario& scenario, const SweepSpec& spec) {
    std::vector<SweepRow> rows;
    rows.reserve(spec.values.size());
    for (Real value : spec.values) {
        SweepRow row;
        row.param = value;
        Scenario variant = scenario;
        if (spec.kind == SweepKind::RadiusRatio) {
            // r = ratio*d with kappa, k and d fixed: only the conditioning of
            // the distance-factor matrix changes.
            variant.geometry.r_m = value * scenario.geometry.d_m;
        } else {
            const int n = static_cast<int>(value);
            variant.geometry.n_ions = n;
            variant.geometry.n_sections = n;
            variant.target.weights.assign(static_cast<std::size_t>(n), 0);
            variant.target.weights[static_cast<std::size_t>((n + 1) / 2 - 1)] = 1;
        }
        try {
            const VoltageSolution solution = solve_addressing(variant);
            row.ok = true;
            row.peak_scaled_voltage = 0;
            for (Real v : solution.scaled_voltages) {
                row.peak_scaled_voltage = std::max(row.peak_scaled_voltage, std::abs(v));
            }
            row.peak_voltage_V = solution.peak_abs_voltage_V;
            row.condition_estimate = solution.diagnostics.condition_estimate;
        } catch (const NumericalError& err) {
            row.ok = false;
            row.error = err.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace mmaddress
