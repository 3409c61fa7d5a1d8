#include "mmaddress/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "mmaddress/fields.hpp"
#include "mmaddress/numerics.hpp"

namespace mmaddress {

namespace {

constexpr Real kGradTol = 1e-12L;
constexpr int kMaxIterations = 200;

// Gradient of V(u) = sum u_i^2/2 + sum_{i<j} 1/(u_j - u_i) for ordered u.
Vec potential_gradient(const Vec& u) {
    const std::size_t n = u.size();
    Vec g(u);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Real diff = u[j] - u[i];
            const Real inv2 = 1 / (diff * diff);
            g[i] += inv2;
            g[j] -= inv2;
        }
    }
    return g;
}

Real grad_inf_norm(const Vec& g) {
    Real m = 0;
    for (Real v : g) m = std::max(m, std::abs(v));
    return m;
}

bool strictly_increasing(const Vec& u) {
    for (std::size_t i = 1; i < u.size(); ++i) {
        if (!(u[i] > u[i - 1])) return false;
    }
    return true;
}

// Mean of the middle one (odd gap count) or two (even) adjacent gaps; the
// convention is symmetric under string reversal.
Real center_gap(const Vec& gaps) {
    const std::size_t n = gaps.size();
    if (n % 2 == 1) return gaps[n / 2];
    return (gaps[n / 2 - 1] + gaps[n / 2]) / 2;
}

}  // namespace

EquilibriumString equilibrium_positions(int n) {
    if (n < 1 || n > 200) {
        throw std::invalid_argument("equilibrium_positions: n must be in [1, 200]");
    }
    if (n == 1) return {{0.0L}};
    const std::size_t count = static_cast<std::size_t>(n);
    Vec u(count);
    for (std::size_t i = 0; i < count; ++i) {
        u[i] = static_cast<Real>(i) - static_cast<Real>(n - 1) / 2;
    }
    Real gnorm = grad_inf_norm(potential_gradient(u));
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        if (gnorm < kGradTol) return {std::move(u)};
        const Vec g = potential_gradient(u);
        DenseMatrix h(count, count);
        for (std::size_t i = 0; i < count; ++i) h(i, i) = 1;
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t j = i + 1; j < count; ++j) {
                const Real diff = u[j] - u[i];
                const Real inv3 = 2 / (diff * diff * diff);
                h(i, i) += inv3;
                h(j, j) += inv3;
                h(i, j) -= inv3;
                h(j, i) -= inv3;
            }
        }
        Vec rhs(count);
        for (std::size_t i = 0; i < count; ++i) rhs[i] = -g[i];
        const Vec step = solve_square(h, rhs).first;
        bool accepted = false;
        Real alpha = 1;
        for (int halvings = 0; halvings < 60; ++halvings, alpha /= 2) {
            Vec candidate(count);
            for (std::size_t i = 0; i < count; ++i) candidate[i] = u[i] + alpha * step[i];
            if (!strictly_increasing(candidate)) continue;
            const Real candidate_norm = grad_inf_norm(potential_gradient(candidate));
            // Near the rounding plateau full steps stop reducing the norm, so
            // accept any ordered step that already sits below tolerance.
            if (candidate_norm < gnorm || candidate_norm < kGradTol) {
                u = std::move(candidate);
                gnorm = candidate_norm;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    if (gnorm < kGradTol) return {std::move(u)};
    std::ostringstream msg;
    msg << "equilibrium_positions: no convergence for n = " << n
        << ", last gradient norm = " << static_cast<double>(gnorm);
    throw NumericalError(msg.str());
}

SpacingDeviation spacing_deviation(int n) {
    if (n < 3) {
        throw std::invalid_argument("spacing_deviation: needs n >= 3");
    }
    const Vec u = equilibrium_positions(n).scaled_positions;
    Vec gaps(u.size() - 1);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) gaps[i] = u[i + 1] - u[i];
    const Real center = center_gap(gaps);
    SpacingDeviation out;
    out.normalized_gaps.resize(gaps.size());
    out.max_deviation = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        out.normalized_gaps[i] = gaps[i] / center;
        out.max_deviation = std::max(out.max_deviation, std::abs(out.normalized_gaps[i] - 1));
    }
    return out;
}

VoltageSolution solve_with_exact_positions(const Scenario& scenario) {
    const TrapGeometry& g = scenario.geometry;
    if (g.n_sections != g.n_ions) {
        throw std::invalid_argument("solve_with_exact_positions: square case (n_sections == n_ions) only");
    }
    const Vec u = equilibrium_positions(g.n_ions).scaled_positions;
    const std::size_t n = u.size();

    // Rescale so the central gap matches d; the string is centered on the
    // electrode array (electrodes stay at j*d, j = 1..n).
    Real scale = g.d_m;
    if (n > 1) {
        Vec gaps(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) gaps[i] = u[i + 1] - u[i];
        scale = g.d_m / center_gap(gaps);
    }
    const Real z_center = static_cast<Real>(g.n_ions + 1) / 2 * g.d_m;
    Vec z_ion(n);
    for (std::size_t i = 0; i < n; ++i) z_ion[i] = z_center + u[i] * scale;

    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Real w = (z_ion[i] - static_cast<Real>(j + 1) * g.d_m) / g.r_m;
            m(i, j) = std::pow(1 + w * w, -1.5L);
        }
    }

    const Real kd = scenario.laser.k_rad_per_m * g.d_m;
    const Real c = scenario.target.kappa / kd;
    Vec rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = c * scenario.target.weights[i];

    auto [scaled, diag] = solve_square(m, rhs);
    VoltageSolution out;
    out.scaled_voltages = std::move(scaled);
    out.diagnostics = diag;
    out.voltages_V.resize(n);
    out.peak_abs_voltage_V = 0;
    for (std::size_t j = 0; j < n; ++j) {
        out.voltages_V[j] = out.scaled_voltages[j] * scenario.drive.amplitude_V;
        out.peak_abs_voltage_V = std::max(out.peak_abs_voltage_V, std::abs(out.voltages_V[j]));
    }
    out.achieved_kappa = m.apply(out.scaled_voltages);
    for (Real& kappa : out.achieved_kappa) kappa *= kd;
    return out;
}

}  // namespace mmaddress
