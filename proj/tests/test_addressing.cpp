#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "mmaddress/addressing.hpp"
#include "mmaddress/fields.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace mmaddress;
using test_support::max_abs;
using test_support::rel_diff;

namespace {

Real kappa_over_kd(const Scenario& s) {
    return s.target.kappa / (s.laser.k_rad_per_m * s.geometry.d_m);
}

}  // namespace

TEST_CASE("3-ion solves match the frozen exact-fraction values") {
    Scenario s = test_support::reference_scenario(3, 3, 2);
    const VoltageSolution center = solve_addressing(s);
    REQUIRE(center.scaled_voltages.size() == 3);
    CHECK(rel_diff(center.scaled_voltages[0], -0.139676072514L) < 1e-9L);
    CHECK(rel_diff(center.scaled_voltages[1], 0.266712682307L) < 1e-9L);
    CHECK(rel_diff(center.scaled_voltages[2], -0.139676072514L) < 1e-9L);
    CHECK(rel_diff(center.peak_abs_voltage_V, 0.666781705767L) < 1e-9L);

    s.target.weights = parse_target_spec("1", 3);
    const VoltageSolution end = solve_addressing(s);
    CHECK(rel_diff(end.scaled_voltages[0], 0.0823896233334L) < 1e-9L);
    CHECK(rel_diff(end.scaled_voltages[1], -0.139676072514L) < 1e-9L);
    CHECK(rel_diff(end.scaled_voltages[2], 0.0657502686874L) < 1e-9L);
}

TEST_CASE("solution invariants: voltages scale, residual, selectivity, achieved kappa") {
    for (int n : {3, 10}) {
        Scenario s = test_support::reference_scenario(n, n, 1);
        for (int target = 1; target <= n; ++target) {
            s.target.weights.assign(static_cast<std::size_t>(n), 0);
            s.target.weights[static_cast<std::size_t>(target - 1)] = 1;
            const VoltageSolution sol = solve_addressing(s);
            for (std::size_t j = 0; j < sol.scaled_voltages.size(); ++j) {
                CHECK(sol.voltages_V[j] == sol.scaled_voltages[j] * s.drive.amplitude_V);
            }
            CHECK(sol.diagnostics.residual_inf_norm <= 1e-12L * kappa_over_kd(s));
            for (int i = 1; i <= n; ++i) {
                const Real achieved = sol.achieved_kappa[static_cast<std::size_t>(i - 1)];
                if (i == target) {
                    CHECK(std::abs(achieved - s.target.kappa) <= 1e-10L * s.target.kappa);
                } else {
                    CHECK(std::abs(achieved) <= 1e-10L * s.target.kappa);
                }
            }
        }
    }
}

TEST_CASE("a zero-kappa target yields zero voltages") {
    Scenario s = test_support::reference_scenario(3, 3, 2);
    s.target.kappa = 0;  // constructed directly; the config loader would reject it
    const VoltageSolution sol = solve_addressing(s);
    for (Real v : sol.scaled_voltages) CHECK(v == 0);
    CHECK(sol.peak_abs_voltage_V == 0);
}

TEST_CASE("solve_pair") {
    const Scenario s = test_support::reference_scenario(10, 10, 1);

    SUBCASE("equals the sum of the two single-ion solutions") {
        const VoltageSolution pair = solve_pair(s, 4, 7);
        Vec w4(10, 0), w7(10, 0);
        w4[3] = 1;
        w7[6] = 1;
        const VoltageSolution a = solve_weighted(s, w4);
        const VoltageSolution b = solve_weighted(s, w7);
        const Real scale = max_abs(pair.scaled_voltages);
        for (std::size_t j = 0; j < 10; ++j) {
            CHECK(std::abs(pair.scaled_voltages[j] -
                           (a.scaled_voltages[j] + b.scaled_voltages[j])) <= 1e-12L * scale);
        }
    }
    SUBCASE("a mirror pair gives a reversal-symmetric voltage vector") {
        const Scenario s3 = test_support::reference_scenario(3, 3, 1);
        const VoltageSolution sol = solve_pair(s3, 1, 3);
        CHECK(std::abs(sol.scaled_voltages[0] - sol.scaled_voltages[2]) <=
              1e-12L * max_abs(sol.scaled_voltages));
    }
    SUBCASE("both pair ions reach kappa, the rest stay dark") {
        const VoltageSolution sol = solve_pair(s, 5, 6);
        for (int i = 1; i <= 10; ++i) {
            const Real achieved = sol.achieved_kappa[static_cast<std::size_t>(i - 1)];
            if (i == 5 || i == 6) {
                CHECK(std::abs(achieved - s.target.kappa) <= 1e-10L * s.target.kappa);
            } else {
                CHECK(std::abs(achieved) <= 1e-10L * s.target.kappa);
            }
        }
    }
    SUBCASE("index validation") {
        CHECK_THROWS_AS(static_cast<void>(solve_pair(s, 0, 3)), std::invalid_argument);
        CHECK_THROWS_AS(static_cast<void>(solve_pair(s, 1, 11)), std::invalid_argument);
        CHECK_THROWS_AS(static_cast<void>(solve_pair(s, 4, 4)), std::invalid_argument);
    }
}

TEST_CASE("solve_weighted") {
    const Scenario s = test_support::reference_scenario(6, 6, 1);

    SUBCASE("unit weights reduce to solve_addressing") {
        Vec w(6, 0);
        w[0] = 1;
        const VoltageSolution a = solve_weighted(s, w);
        const VoltageSolution b = solve_addressing(s);
        for (std::size_t j = 0; j < 6; ++j) {
            CHECK(a.scaled_voltages[j] == b.scaled_voltages[j]);
        }
    }
    SUBCASE("achieved kappas follow the weights") {
        Vec w(6, 0);
        w[0] = 1;
        w[1] = 2;
        const VoltageSolution sol = solve_weighted(s, w);
        CHECK(std::abs(sol.achieved_kappa[1] / sol.achieved_kappa[0] - 2) <= 1e-10L);
    }
    SUBCASE("random weights are reproduced by the forward model") {
        std::mt19937 rng(5150);
        std::uniform_real_distribution<double> weight(-2.0, 2.0);
        for (int trial = 0; trial < 20; ++trial) {
            Vec w(6);
            for (Real& v : w) v = static_cast<Real>(weight(rng));
            const VoltageSolution sol = solve_weighted(s, w);
            for (std::size_t i = 0; i < 6; ++i) {
                CHECK(std::abs(sol.achieved_kappa[i] - s.target.kappa * w[i]) <=
                      1e-10L * s.target.kappa * std::max<Real>(1, max_abs(w)));
            }
        }
    }
    SUBCASE("weight vector validation") {
        CHECK_THROWS_AS(static_cast<void>(solve_weighted(s, Vec{1, 2})), std::invalid_argument);
        Vec bad(6, 0);
        bad[2] = std::numeric_limits<Real>::quiet_NaN();
        CHECK_THROWS_AS(static_cast<void>(solve_weighted(s, bad)), std::invalid_argument);
    }
}

TEST_CASE("solution is linear in kappa") {
    Scenario s = test_support::reference_scenario(5, 5, 3);
    const VoltageSolution base = solve_addressing(s);
    s.target.kappa = 0.4L;
    const VoltageSolution doubled = solve_addressing(s);
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(rel_diff(doubled.scaled_voltages[j], 2 * base.scaled_voltages[j]) < 1e-14L);
    }
}

TEST_CASE("mirror symmetry: target l mirrors target N+1-l") {
    const int n = 7;
    Scenario s = test_support::reference_scenario(n, n, 1);
    for (int l = 1; l <= n; ++l) {
        s.target.weights.assign(n, 0);
        s.target.weights[static_cast<std::size_t>(l - 1)] = 1;
        const VoltageSolution a = solve_addressing(s);
        s.target.weights.assign(n, 0);
        s.target.weights[static_cast<std::size_t>(n - l)] = 1;
        const VoltageSolution b = solve_addressing(s);
        const Real scale = max_abs(a.scaled_voltages);
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(std::abs(a.scaled_voltages[j] - b.scaled_voltages[n - 1 - j]) <=
                  1e-12L * scale);
        }
    }
}

TEST_CASE("superposition of weight vectors") {
    const Scenario s = test_support::reference_scenario(6, 8, 1);  // rectangular on purpose
    std::mt19937 rng(808);
    std::uniform_real_distribution<double> weight(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Vec w1(6), w2(6), sum(6);
        for (std::size_t i = 0; i < 6; ++i) {
            w1[i] = static_cast<Real>(weight(rng));
            w2[i] = static_cast<Real>(weight(rng));
            sum[i] = w1[i] + w2[i];
        }
        const VoltageSolution a = solve_weighted(s, w1);
        const VoltageSolution b = solve_weighted(s, w2);
        const VoltageSolution c = solve_weighted(s, sum);
        const Real scale = std::max<Real>(max_abs(c.scaled_voltages), 1e-6L);
        for (std::size_t j = 0; j < 8; ++j) {
            CHECK(std::abs(c.scaled_voltages[j] - (a.scaled_voltages[j] + b.scaled_voltages[j]))
                  <= 1e-12L * scale);
        }
    }
}

TEST_CASE("rectangular systems take the minimum-norm solution") {
    const Scenario s = test_support::reference_scenario(3, 6, 2);
    const VoltageSolution sol = solve_addressing(s);
    REQUIRE(sol.scaled_voltages.size() == 6);
    CHECK(sol.diagnostics.residual_inf_norm <= 1e-12L * kappa_over_kd(s));
    for (int i = 1; i <= 3; ++i) {
        const Real achieved = sol.achieved_kappa[static_cast<std::size_t>(i - 1)];
        if (i == 2) {
            CHECK(std::abs(achieved - s.target.kappa) <= 1e-10L * s.target.kappa);
        } else {
            CHECK(std::abs(achieved) <= 1e-10L * s.target.kappa);
        }
    }
    // The min-norm oracle agrees.
    const DistanceFactorMatrix f = build_distance_factors(s.geometry);
    Vec rhs(3, 0);
    rhs[1] = kappa_over_kd(s);
    const Vec expect = oracles::min_norm_normal_equations(f.m, rhs);
    for (std::size_t j = 0; j < 6; ++j) {
        CHECK(std::abs(sol.scaled_voltages[j] - expect[j]) <= 1e-9L * max_abs(expect));
    }
}

TEST_CASE("parse_sweep_spec") {
    SUBCASE("comma lists") {
        const SweepSpec ratios = parse_sweep_spec("ratio=2,5,10");
        CHECK(ratios.kind == SweepKind::RadiusRatio);
        CHECK(ratios.values == Vec{2, 5, 10});
        const SweepSpec single = parse_sweep_spec("n=4");
        CHECK(single.kind == SweepKind::IonCount);
        CHECK(single.values == Vec{4});
    }
    SUBCASE("ranges with strides") {
        const SweepSpec odd = parse_sweep_spec("n=3..51:2");
        REQUIRE(odd.values.size() == 25);
        CHECK(odd.values.front() == 3);
        CHECK(odd.values.back() == 51);
        const SweepSpec unit = parse_sweep_spec("n=3..6");
        CHECK(unit.values == Vec{3, 4, 5, 6});
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(static_cast<void>(parse_sweep_spec("volts=1,2")), ConfigError);
        CHECK_THROWS_AS(static_cast<void>(parse_sweep_spec("ratio")), ConfigError);
        CHECK_THROWS_AS(static_cast<void>(parse_sweep_spec("ratio=")), ConfigError);
        CHECK_THROWS_AS(static_cast<void>(parse_sweep_spec("ratio=0,5")), ConfigError);
        CHECK_THROWS_AS(static_cast<void>(parse_sweep_spec("n=2.5")), ConfigError);
        CHECK_THROWS_AS(static_cast<void>(parse_sweep_spec("n=5..3")), ConfigError);
        CHECK_THROWS_AS(static_cast<void>(parse_sweep_spec("n=3..9:0")), ConfigError);
        CHECK_THROWS_AS(static_cast<void>(parse_sweep_spec("n=1,abc")), ConfigError);
        CHECK_THROWS_AS(static_cast<void>(parse_sweep_spec("ratio=1,2,")), ConfigError);
    }
}

TEST_CASE("conditioning_sweep") {
    const Scenario s = test_support::reference_scenario(3, 3, 2);

    SUBCASE("a single-entry ratio sweep reproduces solve_addressing") {
        // The reference geometry already has r/d = 5.
        const std::vector<SweepRow> rows = conditioning_sweep(s, parse_sweep_spec("ratio=5"));
        REQUIRE(rows.size() == 1);
        REQUIRE(rows[0].ok);
        const VoltageSolution sol = solve_addressing(s);
        CHECK(rel_diff(rows[0].peak_scaled_voltage, max_abs(sol.scaled_voltages)) < 1e-15L);
        CHECK(rel_diff(rows[0].peak_voltage_V, sol.peak_abs_voltage_V) < 1e-15L);
        CHECK(rel_diff(rows[0].condition_estimate, sol.diagnostics.condition_estimate) < 1e-15L);
    }
    SUBCASE("peak voltages grow with r/d") {
        const std::vector<SweepRow> rows =
            conditioning_sweep(s, parse_sweep_spec("ratio=2,5,10"));
        REQUIRE(rows.size() == 3);
        for (const SweepRow& row : rows) CHECK(row.ok);
        CHECK(rows[0].peak_scaled_voltage < rows[1].peak_scaled_voltage);
        CHECK(rows[1].peak_scaled_voltage < rows[2].peak_scaled_voltage);
        CHECK(rows[0].condition_estimate < rows[1].condition_estimate);
        CHECK(rows[1].condition_estimate < rows[2].condition_estimate);
        // Frozen endpoints for the reference scenario.
        CHECK(rel_diff(rows[0].peak_scaled_voltage, 0.0136402652898L) < 1e-9L);
        CHECK(rel_diff(rows[2].peak_scaled_voltage, 3.82759404256L) < 1e-9L);
    }
    SUBCASE("peak voltages grow with the ion count") {
        const std::vector<SweepRow> rows =
            conditioning_sweep(s, parse_sweep_spec("n=3,10,51"));
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].peak_scaled_voltage < rows[1].peak_scaled_voltage);
        CHECK(rows[1].peak_scaled_voltage < rows[2].peak_scaled_voltage);
        CHECK(rel_diff(rows[1].peak_scaled_voltage, 13.8878125967L) < 1e-8L);
        CHECK(rel_diff(rows[2].peak_scaled_voltage, 22.4175973409L) < 1e-8L);
    }
    SUBCASE("a singular row is recorded and the sweep continues") {
        // r = 1e12*d collapses all matrix entries to exactly 1.
        const std::vector<SweepRow> rows =
            conditioning_sweep(s, parse_sweep_spec("ratio=1e12,5"));
        REQUIRE(rows.size() == 2);
        CHECK_FALSE(rows[0].ok);
        CHECK(!rows[0].error.empty());
        CHECK(rows[1].ok);
        CHECK(rel_diff(rows[1].peak_scaled_voltage, 0.266712682307L) < 1e-9L);
    }
}
