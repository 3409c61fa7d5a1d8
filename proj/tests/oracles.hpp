#pragma once

// Independent reference computations the tests check the library against.
// Deliberately different algorithms from the implementation: exact-fraction
// elimination / Cramer's rule instead of floating LU, Simpson quadrature of
// the integral representation instead of the power series, and 50-digit
// normal equations instead of Householder QR.

#include <span>

#include "mmaddress/numerics.hpp"
#include "mmaddress/types.hpp"

namespace oracles {

using mmaddress::DenseMatrix;
using mmaddress::Real;
using mmaddress::Vec;

/// Gaussian elimination over exact rationals; every matrix/vector entry is
/// treated as the exact rational it represents in binary.
Vec rational_eliminate(const DenseMatrix& a, std::span<const Real> b);

/// Cramer's rule with exact-rational determinants, n in {1, 2, 3}.
Vec rational_cramer(const DenseMatrix& a, std::span<const Real> b);

/// J1(x) = (1/pi) * integral_0^pi cos(theta - x*sin(theta)) dtheta by
/// composite Simpson's rule with 16384 panels.
Real quadrature_j1(Real x);

/// Minimum-norm solution x = A^T (A A^T)^{-1} b computed with 50-decimal-digit
/// floats via the normal equations.
Vec min_norm_normal_equations(const DenseMatrix& a, std::span<const Real> b);

/// Half-spacing a of the symmetric 2-ion string, by ternary search on the
/// scaled potential a^2 + 1/(2a).
Real two_ion_half_spacing();

/// Edge-ion position b of the symmetric 3-ion string, by ternary search on
/// b^2 + 5/(2b).
Real three_ion_edge_position();

}  // namespace oracles
