#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "mmaddress/types.hpp"

namespace mmaddress {

/// Dense row-major real matrix. Plain value type, no domain knowledge.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, Real fill = 0);
    /// Takes ownership of `entries`; throws std::invalid_argument if the length
    /// is not rows*cols or any entry is non-finite.
    DenseMatrix(std::size_t rows, std::size_t cols, Vec entries);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Real& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    Real operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const Vec& entries() const { return entries_; }

    Vec apply(std::span<const Real> x) const;  // A*x
    Real norm_inf() const;                     // max absolute row sum
    Real norm_1() const;                       // max absolute column sum

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vec entries_;
};

struct SolveDiagnostics {
    Real residual_inf_norm = 0;   // ||A*x - b||_inf of the returned solution
    Real condition_estimate = 1;  // 1-norm condition estimate, >= 1
};

/// LU factorization with partial pivoting. Factors once, solves many.
class LuFactorization {
public:
    /// Throws NumericalError naming the pivot step if a pivot falls below
    /// eps * ||A||_inf.
    explicit LuFactorization(const DenseMatrix& a);

    Vec solve(std::span<const Real> b) const;
    Real inverse_norm_1() const;  // ||A^-1||_1 from the factorization
    std::size_t size() const { return lu_.rows(); }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

/// Solves the square system A*x = b by LU with partial pivoting plus
/// iterative refinement. Residual and a 1-norm condition estimate are
/// reported in the diagnostics.
std::pair<Vec, SolveDiagnostics> solve_square(const DenseMatrix& a, std::span<const Real> b);

/// Minimum-2-norm solution of the underdetermined full-row-rank system
/// A*x = b (rows <= cols), via Householder QR of A^T. Coincides with
/// solve_square when A is square.
std::pair<Vec, SolveDiagnostics> solve_min_norm(const DenseMatrix& a, std::span<const Real> b);

/// First-order Bessel function J1 by its ascending power series, terms
/// accumulated until the relative term drops below 1e-16. Domain |x| <= 12
/// (throws std::domain_error beyond; the series is not guaranteed there and
/// physical modulation indices stay well below).
Real bessel_j1(Real x);

}  // namespace mmaddress
