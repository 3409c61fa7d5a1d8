#include "mmaddress/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace mmaddress {

namespace {

void check_geometry(const TrapGeometry& g) {
    if (!(g.r_m > 0) || !(g.d_m > 0)) {
        throw std::invalid_argument("geometry: r and d must be positive");
    }
    if (g.n_ions < 1 || g.n_sections < g.n_ions) {
        throw std::invalid_argument("geometry: need n_sections >= n_ions >= 1");
    }
}

void check_voltages(const TrapGeometry& g, std::span<const Real> voltages) {
    if (voltages.size() != static_cast<std::size_t>(g.n_sections)) {
        throw std::invalid_argument("voltage vector length does not match n_sections");
    }
}

}  // namespace

Real electrode_field_magnitude(Real voltage_V, Real d_m, Real dist_m) {
    if (!(d_m > 0)) {
        throw std::invalid_argument("electrode_field_magnitude: section length must be positive");
    }
    if (!(dist_m > 0)) {
        throw std::invalid_argument("electrode_field_magnitude: distance must be positive");
    }
    return voltage_V * d_m / (2 * dist_m * dist_m);
}

DistanceFactorMatrix build_distance_factors(const TrapGeometry& geometry) {
    check_geometry(geometry);
    DistanceFactorMatrix out;
    out.ratio = geometry.d_m / geometry.r_m;
    out.m = DenseMatrix(static_cast<std::size_t>(geometry.n_ions),
                        static_cast<std::size_t>(geometry.n_sections));
    for (int i = 0; i < geometry.n_ions; ++i) {
        for (int j = 0; j < geometry.n_sections; ++j) {
            const Real u = static_cast<Real>(i - j) * out.ratio;
            out.m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                std::pow(1 + u * u, -1.5L);
        }
    }
    return out;
}

Vec perpendicular_field_at_ions(const TrapGeometry& geometry, std::span<const Real> voltages_V) {
    check_geometry(geometry);
    check_voltages(geometry, voltages_V);
    const DistanceFactorMatrix factors = build_distance_factors(geometry);
    Vec fields = factors.m.apply(voltages_V);
    const Real scale = geometry.d_m / (2 * geometry.r_m * geometry.r_m);
    for (Real& f : fields) f *= scale;
    return fields;
}

FieldProfile perpendicular_field_profile(const TrapGeometry& geometry,
                                         std::span<const Real> voltages_V, Real z_min_m,
                                         Real z_max_m, int n_samples) {
    check_geometry(geometry);
    check_voltages(geometry, voltages_V);
    if (!(z_min_m < z_max_m)) {
        throw std::invalid_argument("field profile: need z_min < z_max");
    }
    if (n_samples < 2) {
        throw std::invalid_argument("field profile: need at least 2 samples");
    }
    FieldProfile profile;
    profile.voltages_V.assign(voltages_V.begin(), voltages_V.end());
    profile.z_m.resize(static_cast<std::size_t>(n_samples));
    profile.e_perp.resize(static_cast<std::size_t>(n_samples));
    const Real step = (z_max_m - z_min_m) / static_cast<Real>(n_samples - 1);
    const Real r = geometry.r_m;
    const Real d = geometry.d_m;
    for (int s = 0; s < n_samples; ++s) {
        const Real z = z_min_m + step * static_cast<Real>(s);
        Real e = 0;
        for (int j = 1; j <= geometry.n_sections; ++j) {
            const Real dz = z - static_cast<Real>(j) * d;
            const Real dist2 = r * r + dz * dz;
            e += voltages_V[static_cast<std::size_t>(j - 1)] * d * r /
                 (2 * dist2 * std::sqrt(dist2));
        }
        profile.z_m[static_cast<std::size_t>(s)] = z;
        profile.e_perp[static_cast<std::size_t>(s)] = e;
    }
    return profile;
}

Vec axial_field_at_ions(const TrapGeometry& geometry, std::span<const Real> voltages_V) {
    check_geometry(geometry);
    check_voltages(geometry, voltages_V);
    const Real r = geometry.r_m;
    const Real d = geometry.d_m;
    Vec fields(static_cast<std::size_t>(geometry.n_ions), 0);
    for (int i = 1; i <= geometry.n_ions; ++i) {
        Real e = 0;
        for (int j = 1; j <= geometry.n_sections; ++j) {
            const Real dz = static_cast<Real>(i - j) * d;
            const Real dist2 = r * r + dz * dz;
            e += voltages_V[static_cast<std::size_t>(j - 1)] * d * d * static_cast<Real>(i - j) /
                 (2 * dist2 * std::sqrt(dist2));
        }
        fields[static_cast<std::size_t>(i - 1)] = e;
    }
    return fields;
}

}  // namespace mmaddress
