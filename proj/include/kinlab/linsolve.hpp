#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "kinlab/grid.hpp"

namespace kinlab {

/// Thomas algorithm for tridiagonal systems. `lower` and `upper` have
/// length n-1, `diag` length n. No pivoting; the systems assembled here
/// are strictly diagonally dominant by construction.
inline std::vector<double> thomas_solve(std::span<const double> lower,
                                        std::span<const double> diag,
                                        std::span<const double> upper,
                                        std::span<const double> rhs) {
    const std::size_t n = diag.size();
    assert(lower.size() == n - 1 && upper.size() == n - 1 && rhs.size() == n);
    std::vector<double> cp(n, 0.0), x(n, 0.0);
    double m = diag[0];
    assert(std::abs(m) > 0.0);
    x[0] = rhs[0] / m;
    for (std::size_t i = 1; i < n; ++i) {
        cp[i] = upper[i - 1] / m;
        m = diag[i] - lower[i - 1] * cp[i];
        assert(std::abs(m) > 0.0);
        x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i + 1] * x[i + 1];
    return x;
}

/// Solves the circulant tridiagonal system with constant bands
/// (sub, d, sup) and periodic wraparound, via a rank-one correction of
/// a plain tridiagonal system (cyclic Thomas / Sherman-Morrison).
inline std::vector<double> cyclic_thomas_solve(double sub, double d, double sup,
                                               std::span<const double> rhs) {
    const std::size_t n = rhs.size();
    if (n == 1) {
        const double s = d + sub + sup;
        assert(std::abs(s) > 0.0);
        return {rhs[0] / s};
    }
    if (n == 2) {
        // wrap entries coincide with the regular bands
        const double a00 = d, a01 = sub + sup, a10 = sub + sup, a11 = d;
        const double det = a00 * a11 - a01 * a10;
        assert(std::abs(det) > 0.0);
        return {(a11 * rhs[0] - a01 * rhs[1]) / det,
                (a00 * rhs[1] - a10 * rhs[0]) / det};
    }
    const double gamma = -d;
    std::vector<double> dl(n - 1, sub), dd(n, d), du(n - 1, sup);
    dd[0] = d - gamma;
    dd[n - 1] = d - sub * sup / gamma;
    std::vector<double> w(n, 0.0);
    w[0] = gamma;
    w[n - 1] = sup;
    const std::vector<double> y = thomas_solve(dl, dd, du, rhs);
    const std::vector<double> z = thomas_solve(dl, dd, du, w);
    // v = (1, 0, ..., 0, sub/gamma)
    const double vy = y[0] + (sub / gamma) * y[n - 1];
    const double vz = 1.0 + z[0] + (sub / gamma) * z[n - 1];
    assert(std::abs(vz) > 0.0);
    std::vector<double> x = y;
    const double f = vy / vz;
    for (std::size_t i = 0; i < n; ++i) x[i] -= f * z[i];
    return x;
}

/// Prefactored Thomas sweep for repeated solves against one tridiagonal
/// matrix (the bands are fixed, only the right-hand side changes).
class TridiagFactor {
public:
    TridiagFactor() = default;
    TridiagFactor(std::vector<double> lower, std::span<const double> diag,
                  std::span<const double> upper)
        : dl_(std::move(lower)), m_(diag.size()), cp_(diag.size(), 0.0) {
        const std::size_t n = diag.size();
        assert(dl_.size() == n - 1 && upper.size() == n - 1);
        double m = diag[0];
        assert(std::abs(m) > 0.0);
        m_[0] = m;
        for (std::size_t i = 1; i < n; ++i) {
            cp_[i] = upper[i - 1] / m;
            m = diag[i] - dl_[i - 1] * cp_[i];
            assert(std::abs(m) > 0.0);
            m_[i] = m;
        }
    }

    std::size_t size() const { return m_.size(); }

    void solve(std::span<const double> rhs, std::span<double> x) const {
        const std::size_t n = m_.size();
        assert(rhs.size() == n && x.size() == n);
        x[0] = rhs[0] / m_[0];
        for (std::size_t i = 1; i < n; ++i)
            x[i] = (rhs[i] - dl_[i - 1] * x[i - 1]) / m_[i];
        for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp_[i + 1] * x[i + 1];
    }

    std::vector<double> solve(std::span<const double> rhs) const {
        std::vector<double> x(rhs.size(), 0.0);
        solve(rhs, x);
        return x;
    }

private:
    std::vector<double> dl_, m_, cp_;
};

/// Prefactored cyclic (circulant tridiagonal) solver; rank-one correction
/// of a TridiagFactor with modified corner entries.
class CyclicFactor {
public:
    CyclicFactor() = default;
    CyclicFactor(double sub, double d, double sup, std::size_t n) : n_(n) {
        assert(n >= 1);
        if (n == 1) {
            scalar_ = d + sub + sup;
            assert(std::abs(scalar_) > 0.0);
            return;
        }
        if (n == 2) {
            a00_ = d;
            a01_ = sub + sup;
            det2_ = a00_ * a00_ - a01_ * a01_;
            assert(std::abs(det2_) > 0.0);
            return;
        }
        const double gamma = -d;
        std::vector<double> dl(n - 1, sub), dd(n, d), du(n - 1, sup);
        dd[0] = d - gamma;
        dd[n - 1] = d - sub * sup / gamma;
        inner_ = TridiagFactor(std::move(dl), dd, du);
        std::vector<double> w(n, 0.0);
        w[0] = gamma;
        w[n - 1] = sup;
        z_ = inner_.solve(w);
        sub_over_gamma_ = sub / gamma;
        denom_ = 1.0 + z_[0] + sub_over_gamma_ * z_[n - 1];
        assert(std::abs(denom_) > 0.0);
    }

    std::size_t size() const { return n_; }

    std::vector<double> solve(std::span<const double> rhs) const {
        if (n_ == 1) return {rhs[0] / scalar_};
        if (n_ == 2)
            return {(a00_ * rhs[0] - a01_ * rhs[1]) / det2_,
                    (a00_ * rhs[1] - a01_ * rhs[0]) / det2_};
        std::vector<double> y = inner_.solve(rhs);
        const double f = (y[0] + sub_over_gamma_ * y[n_ - 1]) / denom_;
        for (std::size_t i = 0; i < n_; ++i) y[i] -= f * z_[i];
        return y;
    }

private:
    std::size_t n_ = 0;
    TridiagFactor inner_;
    std::vector<double> z_;
    double sub_over_gamma_ = 0.0, denom_ = 1.0;
    double scalar_ = 1.0;                     // n == 1
    double a00_ = 1.0, a01_ = 0.0, det2_ = 1.0;  // n == 2
};

/// Dense row-major matrix for small systems (mass-matrix steps, oracles).
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
    assert(x.size() == m.cols);
    std::vector<double> y(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

/// LU solve with partial pivoting (in-place on copies).
inline std::vector<double> lu_solve(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows;
    if (a.cols != n || b.size() != n)
        throw std::invalid_argument("lu_solve: dimension mismatch");
    std::vector<std::size_t> piv(n);
    for (std::size_t i = 0; i < n; ++i) piv[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > best) { best = std::abs(a(i, k)); p = i; }
        if (best == 0.0) throw numeric_error("lu_solve: singular matrix");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

/// Attempts a Cholesky factorization; returns false if the matrix is not
/// symmetric positive definite (within a symmetry tolerance).
inline bool cholesky_factor(const Matrix& m, Matrix& l) {
    const std::size_t n = m.rows;
    if (m.cols != n) return false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) >
                1e-12 * (1.0 + std::abs(m(i, j)) + std::abs(m(j, i))))
                return false;
    l = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(s > 0.0)) return false;
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return true;
}

inline bool is_spd(const Matrix& m) {
    Matrix l;
    return cholesky_factor(m, l);
}

}  // namespace kinlab
