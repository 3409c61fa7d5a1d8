#include "mmaddress/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace mmaddress {

namespace {

constexpr Real kEps = std::numeric_limits<Real>::epsilon();

Real inf_norm(std::span<const Real> v) {
    Real m = 0;
    for (Real x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Real fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Vec entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        std::ostringstream msg;
        msg << "DenseMatrix: " << entries_.size() << " entries do not fill a " << rows_ << "x"
            << cols_ << " matrix";
        throw std::invalid_argument(msg.str());
    }
    for (Real v : entries_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("DenseMatrix: non-finite entry");
        }
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Vec DenseMatrix::apply(std::span<const Real> x) const {
    if (x.size() != cols_) {
        throw std::invalid_argument("DenseMatrix::apply: vector length does not match columns");
    }
    Vec y(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        Real s = 0;
        for (std::size_t j = 0; j < cols_; ++j) s += entries_[i * cols_ + j] * x[j];
        y[i] = s;
    }
    return y;
}

Real DenseMatrix::norm_inf() const {
    Real m = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
        Real s = 0;
        for (std::size_t j = 0; j < cols_; ++j) s += std::abs(entries_[i * cols_ + j]);
        m = std::max(m, s);
    }
    return m;
}

Real DenseMatrix::norm_1() const {
    Real m = 0;
    for (std::size_t j = 0; j < cols_; ++j) {
        Real s = 0;
        for (std::size_t i = 0; i < rows_; ++i) s += std::abs(entries_[i * cols_ + j]);
        m = std::max(m, s);
    }
    return m;
}

LuFactorization::LuFactorization(const DenseMatrix& a) : lu_(a), perm_(a.rows()) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        throw std::invalid_argument("LU factorization requires a non-empty square matrix");
    }
    const std::size_t n = lu_.rows();
    const Real pivot_floor = kEps * a.norm_inf();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        Real best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const Real cand = std::abs(lu_(i, k));
            if (cand > best) {
                best = cand;
                p = i;
            }
        }
        if (best <= pivot_floor) {
            std::ostringstream msg;
            msg << "matrix is singular to working precision: pivot " << static_cast<double>(best)
                << " at elimination step " << k + 1 << " of " << n << " falls below "
                << static_cast<double>(pivot_floor);
            throw NumericalError(msg.str());
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(perm_[k], perm_[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const Real f = lu_(i, k) / lu_(k, k);
            lu_(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

Vec LuFactorization::solve(std::span<const Real> b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) {
        throw std::invalid_argument("LuFactorization::solve: right-hand side length mismatch");
    }
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 1; i < n; ++i) {
        Real s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        Real s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

Real LuFactorization::inverse_norm_1() const {
    const std::size_t n = lu_.rows();
    Vec e(n, 0);
    Real m = 0;
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1;
        const Vec col = solve(e);
        e[j] = 0;
        Real s = 0;
        for (Real v : col) s += std::abs(v);
        m = std::max(m, s);
    }
    return m;
}

std::pair<Vec, SolveDiagnostics> solve_square(const DenseMatrix& a, std::span<const Real> b) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("solve_square: matrix must be square");
    }
    if (b.size() != a.rows()) {
        throw std::invalid_argument("solve_square: right-hand side length mismatch");
    }
    const LuFactorization lu(a);
    const std::size_t n = a.rows();
    Vec x = lu.solve(b);
    // One or two rounds of refinement push the residual to the floor set by
    // rounding the true solution; the factorization alone can sit an order
    // of magnitude above it for ill-conditioned Toeplitz systems.
    for (int pass = 0; pass < 2; ++pass) {
        Vec r = a.apply(x);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        if (inf_norm(r) == 0) break;
        const Vec dx = lu.solve(r);
        for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
    }
    Vec r = a.apply(x);
    for (std::size_t i = 0; i < n; ++i) r[i] -= b[i];
    SolveDiagnostics diag;
    diag.residual_inf_norm = inf_norm(r);
    diag.condition_estimate = std::max<Real>(1, a.norm_1() * lu.inverse_norm_1());
    return {std::move(x), diag};
}

namespace {

// Householder QR state for the transposed system; reflector k zeroes the
// subdiagonal of column k and acts on components k..n-1.
struct TransposedQr {
    std::size_t m = 0;            // rows of the original matrix
    std::size_t n = 0;            // cols of the original matrix
    DenseMatrix r;                // m x m upper triangular factor
    std::vector<Vec> reflectors;  // length m, reflector k has length n-k
    Vec betas;
};

TransposedQr factor_transposed(const DenseMatrix& a) {
    TransposedQr qr;
    qr.m = a.rows();
    qr.n = a.cols();
    DenseMatrix work(qr.n, qr.m);
    for (std::size_t i = 0; i < qr.n; ++i) {
        for (std::size_t j = 0; j < qr.m; ++j) work(i, j) = a(j, i);
    }
    const Real rank_floor = kEps * work.norm_inf();
    qr.r = DenseMatrix(qr.m, qr.m);
    qr.reflectors.resize(qr.m);
    qr.betas.assign(qr.m, 0);
    for (std::size_t k = 0; k < qr.m; ++k) {
        Real sigma2 = 0;
        for (std::size_t i = k; i < qr.n; ++i) sigma2 += work(i, k) * work(i, k);
        const Real sigma = std::sqrt(sigma2);
        if (sigma <= rank_floor) {
            std::ostringstream msg;
            msg << "rank-deficient system: row " << k + 1 << " of " << qr.m
                << " is linearly dependent to working precision";
            throw NumericalError(msg.str());
        }
        Vec v(qr.n - k);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = work(k + i, k);
        const Real alpha = v[0] >= 0 ? -sigma : sigma;
        v[0] -= alpha;
        Real vnorm2 = 0;
        for (Real c : v) vnorm2 += c * c;
        const Real beta = 2 / vnorm2;
        for (std::size_t j = k; j < qr.m; ++j) {
            Real dot = 0;
            for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * work(k + i, j);
            const Real f = beta * dot;
            for (std::size_t i = 0; i < v.size(); ++i) work(k + i, j) -= f * v[i];
        }
        work(k, k) = alpha;
        for (std::size_t j = k; j < qr.m; ++j) qr.r(k, j) = work(k, j);
        qr.reflectors[k] = std::move(v);
        qr.betas[k] = beta;
    }
    return qr;
}

// x = Q * [w; 0]: the minimum-norm preimage for the computed w.
Vec expand_min_norm(const TransposedQr& qr, const Vec& w) {
    Vec x(qr.n, 0);
    std::copy(w.begin(), w.end(), x.begin());
    for (std::size_t k = qr.m; k-- > 0;) {
        const Vec& v = qr.reflectors[k];
        Real dot = 0;
        for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * x[k + i];
        const Real f = qr.betas[k] * dot;
        for (std::size_t i = 0; i < v.size(); ++i) x[k + i] -= f * v[i];
    }
    return x;
}

// Forward substitution on R^T w = rhs.
Vec solve_rt(const TransposedQr& qr, std::span<const Real> rhs) {
    Vec w(qr.m);
    for (std::size_t i = 0; i < qr.m; ++i) {
        Real s = rhs[i];
        for (std::size_t j = 0; j < i; ++j) s -= qr.r(j, i) * w[j];
        w[i] = s / qr.r(i, i);
    }
    return w;
}

Real triangular_inverse_norm_1(const DenseMatrix& r) {
    const std::size_t m = r.rows();
    Vec e(m, 0);
    Real norm = 0;
    for (std::size_t j = 0; j < m; ++j) {
        e[j] = 1;
        Vec y(m);
        for (std::size_t i = m; i-- > 0;) {
            Real s = e[i];
            for (std::size_t l = i + 1; l < m; ++l) s -= r(i, l) * y[l];
            y[i] = s / r(i, i);
        }
        e[j] = 0;
        Real s = 0;
        for (Real v : y) s += std::abs(v);
        norm = std::max(norm, s);
    }
    return norm;
}

}  // namespace

std::pair<Vec, SolveDiagnostics> solve_min_norm(const DenseMatrix& a, std::span<const Real> b) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw std::invalid_argument("solve_min_norm: empty matrix");
    }
    if (a.rows() > a.cols()) {
        throw std::invalid_argument("solve_min_norm: system must have rows <= cols");
    }
    if (b.size() != a.rows()) {
        throw std::invalid_argument("solve_min_norm: right-hand side length mismatch");
    }
    const TransposedQr qr = factor_transposed(a);
    const std::size_t m = a.rows();
    Vec x = expand_min_norm(qr, solve_rt(qr, b));
    // Same refinement idea as solve_square: the correction is itself a
    // minimum-norm solve against the residual, reusing the factorization.
    for (int pass = 0; pass < 2; ++pass) {
        Vec r = a.apply(x);
        for (std::size_t i = 0; i < m; ++i) r[i] = b[i] - r[i];
        if (inf_norm(r) == 0) break;
        const Vec dx = expand_min_norm(qr, solve_rt(qr, r));
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    }
    Vec r = a.apply(x);
    for (std::size_t i = 0; i < m; ++i) r[i] -= b[i];
    SolveDiagnostics diag;
    diag.residual_inf_norm = inf_norm(r);
    diag.condition_estimate = std::max<Real>(1, qr.r.norm_1() * triangular_inverse_norm_1(qr.r));
    return {std::move(x), diag};
}

Real bessel_j1(Real x) {
    if (!(std::abs(x) <= 12.0L)) {
        std::ostringstream msg;
        msg << "bessel_j1: |x| > 12 is outside the supported series domain (x = "
            << static_cast<double>(x) << ")";
        throw std::domain_error(msg.str());
    }
    if (x == 0) return 0;
    const Real half = x / 2;
    const Real h2 = half * half;
    Real term = half;  // k = 0: (x/2) / (0! * 1!)
    Real sum = term;
    for (int k = 1; k <= 60; ++k) {
        term *= -h2 / (static_cast<Real>(k) * static_cast<Real>(k + 1));
        sum += term;
        if (std::abs(term) < 1e-16L * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace mmaddress
