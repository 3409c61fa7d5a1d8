#pragma once

#include <span>
#include <string>
#include <vector>

#include "mmaddress/model.hpp"
#include "mmaddress/numerics.hpp"
#include "mmaddress/types.hpp"

namespace mmaddress {

/// Compensation voltages solving m * (U/V) = (kappa/(k*d)) * e, with the
/// forward-modeled per-ion modulation indices they actually produce.
struct VoltageSolution {
    Vec scaled_voltages;         // U_j / V
    Vec voltages_V;              // scaled_voltages * V
    Real peak_abs_voltage_V = 0;
    SolveDiagnostics diagnostics;
    Vec achieved_kappa;          // kappa_i = (k*d/V) * sum_j m_ij U_j
};

/// Solves the scenario's own modulation target. Square systems go through
/// solve_square; n_sections > n_ions takes the minimum-norm solution
/// (smallest voltages consistent with the target).
VoltageSolution solve_addressing(const Scenario& scenario);

/// Target weights e_{l1} = e_{l2} = 1, all others zero (1-based indices).
VoltageSolution solve_pair(const Scenario& scenario, int l1, int l2);

/// Solves for per-ion targets kappa_i = kappa * weights_i.
VoltageSolution solve_weighted(const Scenario& scenario, std::span<const Real> weights);

enum class SweepKind {
    RadiusRatio,  // r = ratio * d, everything else (kappa, k, d) fixed
    IonCount,     // n_ions = n_sections = n, center ion targeted
};

struct SweepSpec {
    SweepKind kind;
    Vec values;
};

/// Parses `ratio=2,5,10` or `n=3..51:2` (comma list or start..end[:step]).
SweepSpec parse_sweep_spec(const std::string& spec);

struct SweepRow {
    Real param = 0;
    bool ok = false;
    std::string error;            // set when ok == false
    Real peak_scaled_voltage = 0;
    Real peak_voltage_V = 0;
    Real condition_estimate = 0;
};

/// Re-solves the scenario once per swept value and records peak |U/V|, peak
/// voltage at the scenario's rf amplitude, and the condition estimate.
/// Per-row solver failures are recorded in the row; the sweep continues.
std::vector<SweepRow> conditioning_sweep(const Scenario& scenario, const SweepSpec& spec);

}  // namespace mmaddress
