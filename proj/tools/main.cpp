#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "mmaddress/addressing.hpp"
#include "mmaddress/equilibrium.hpp"
#include "mmaddress/fields.hpp"
#include "mmaddress/io.hpp"
#include "mmaddress/micromotion.hpp"
#include "mmaddress/model.hpp"
#include "mmaddress/version.hpp"

namespace {

using namespace mmaddress;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read scenario file \"" + path + "\"");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string json_path_for(const std::string& csv_path) {
    const std::string suffix = ".csv";
    if (csv_path.size() > suffix.size() &&
        csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return csv_path.substr(0, csv_path.size() - suffix.size()) + ".json";
    }
    return csv_path + ".json";
}

Scenario load_with_target(const std::string& path, const std::string& target_spec) {
    Scenario scenario = load_scenario(read_file(path));
    if (!target_spec.empty()) {
        scenario.target.weights = parse_target_spec(target_spec, scenario.geometry.n_ions);
    }
    return scenario;
}

void print_solution_summary(const VoltageSolution& solution) {
    Real peak_scaled = 0;
    for (Real v : solution.scaled_voltages) peak_scaled = std::max(peak_scaled, std::abs(v));
    std::cout << "peak_scaled_voltage = " << format_real(peak_scaled) << "\n"
              << "peak_voltage_V = " << format_real(solution.peak_abs_voltage_V) << "\n"
              << "condition_estimate = " << format_real(solution.diagnostics.condition_estimate)
              << "\n"
              << "residual = " << format_real(solution.diagnostics.residual_inf_norm) << "\n";
}

int cmd_solve(const std::string& scenario_path, const std::string& target_spec,
              const std::string& out_path) {
    const Scenario scenario = load_with_target(scenario_path, target_spec);
    const VoltageSolution solution = solve_addressing(scenario);
    write_text_file(out_path, to_csv(solution));
    const std::string json_path = json_path_for(out_path);
    write_text_file(json_path, run_report("solve", scenario, to_json(solution)).dump(2) + "\n");
    print_solution_summary(solution);
    std::cout << "wrote " << out_path << " and " << json_path << "\n";
    return kExitOk;
}

int cmd_profile(const std::string& scenario_path, const std::string& target_spec,
                double span_um, int samples, const std::string& out_path) {
    const Scenario scenario = load_with_target(scenario_path, target_spec);
    const VoltageSolution solution = solve_addressing(scenario);
    Real span_m = static_cast<Real>(span_um) * 1e-6L;
    if (span_um <= 0) {
        // Default window: all electrodes plus one section length of padding on
        // each side.
        span_m = static_cast<Real>(scenario.geometry.n_sections + 1) * scenario.geometry.d_m;
    }
    const FieldProfile profile = perpendicular_field_profile(
        scenario.geometry, solution.voltages_V, 0.0L, span_m, samples);
    write_text_file(out_path, to_csv(profile));
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_motion(const std::string& scenario_path, const std::string& target_spec,
               const std::string& out_path) {
    const Scenario scenario = load_with_target(scenario_path, target_spec);
    const VoltageSolution solution = solve_addressing(scenario);
    const MotionReport report = motion_report(scenario, solution);
    write_text_file(out_path, to_csv(report));
    const std::string json_path = json_path_for(out_path);
    write_text_file(json_path, run_report("motion", scenario, to_json(report)).dump(2) + "\n");
    std::cout << "q = " << format_real(report.q) << "\n"
              << "wrote " << out_path << " and " << json_path << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, const std::string& sweep_spec,
              const std::string& out_path) {
    const Scenario scenario = load_scenario(read_file(scenario_path));
    const SweepSpec spec = parse_sweep_spec(sweep_spec);
    const std::vector<SweepRow> rows = conditioning_sweep(scenario, spec);
    write_text_file(out_path, to_csv(rows));
    for (const SweepRow& row : rows) {
        if (!row.ok) {
            std::cerr << "sweep: value " << format_real(row.param) << " failed: " << row.error
                      << "\n";
        }
    }
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_equilibrium(int n, const std::string& out_path) {
    const EquilibriumString string = equilibrium_positions(n);
    write_text_file(out_path, to_csv(string));
    if (n >= 3) {
        const SpacingDeviation deviation = spacing_deviation(n);
        std::cout << "max_gap_deviation = " << format_real(deviation.max_deviation) << "\n";
    }
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Segmented-electrode compensation voltages for micromotion addressing of "
                 "trapped ions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("mmaddress ") + kVersion);

    std::string scenario_path;
    std::string target_spec;
    std::string out_path;
    std::string sweep_spec;
    double span_um = 0;
    int samples = 2000;
    int eq_n = 0;

    CLI::App* solve = app.add_subcommand("solve", "Solve compensation voltages for a target");
    solve->add_option("--scenario", scenario_path, "Scenario config file")->required();
    solve->add_option("--target", target_spec,
                      "Target override: 1-based ion indices, comma separated, each optionally "
                      "index:weight");
    solve->add_option("--out", out_path, "Output CSV path (JSON report written alongside)")
        ->required();

    CLI::App* profile =
        app.add_subcommand("profile", "Sample the perpendicular field along the trap axis");
    profile->add_option("--scenario", scenario_path, "Scenario config file")->required();
    profile->add_option("--target", target_spec, "Target override");
    profile->add_option("--span", span_um, "Axial window [0, span] in um (default: all "
                                           "electrodes plus one section of padding)");
    profile->add_option("--samples", samples, "Sample count (default 2000)");
    profile->add_option("--out", out_path, "Output CSV path")->required();

    CLI::App* motion = app.add_subcommand("motion", "Per-ion displacement/modulation report");
    motion->add_option("--scenario", scenario_path, "Scenario config file")->required();
    motion->add_option("--target", target_spec, "Target override");
    motion->add_option("--out", out_path, "Output CSV path (JSON report written alongside)")
        ->required();

    CLI::App* sweep = app.add_subcommand("sweep", "Re-solve across ratios or ion counts");
    sweep->add_option("--scenario", scenario_path, "Scenario config file")->required();
    sweep->add_option("--sweep", sweep_spec, "Sweep spec: ratio=2,5,10 or n=3..51:2")->required();
    sweep->add_option("--out", out_path, "Output CSV path")->required();

    CLI::App* equilibrium = app.add_subcommand("equilibrium", "Ion-string equilibrium positions");
    equilibrium->add_option("--n", eq_n, "Number of ions (1..200)")->required();
    equilibrium->add_option("--out", out_path, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (solve->parsed()) return cmd_solve(scenario_path, target_spec, out_path);
        if (profile->parsed()) {
            return cmd_profile(scenario_path, target_spec, span_um, samples, out_path);
        }
        if (motion->parsed()) return cmd_motion(scenario_path, target_spec, out_path);
        if (sweep->parsed()) return cmd_sweep(scenario_path, sweep_spec, out_path);
        if (equilibrium->parsed()) return cmd_equilibrium(eq_n, out_path);
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
