#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <utility>

namespace kinlab {

using cplx = std::complex<double>;

/// 2x2 complex matrix, row-major: [[a, b], [c, d]].
struct Mat2c {
    cplx a{0.0}, b{0.0}, c{0.0}, d{0.0};

    static Mat2c identity() { return {1.0, 0.0, 0.0, 1.0}; }

    cplx det() const { return a * d - b * c; }

    Mat2c operator*(const Mat2c& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    Mat2c adjoint() const {
        return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
    }

    Mat2c inverse() const {
        const cplx dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }

    std::array<cplx, 2> apply(const std::array<cplx, 2>& x) const {
        return {a * x[0] + b * x[1], c * x[0] + d * x[1]};
    }
};

/// Eigenvalues of a Hermitian 2x2 matrix (entries a, d real; c = conj(b)),
/// returned as (min, max).
inline std::pair<double, double> hermitian_eigenvalues(const Mat2c& m) {
    const double ar = m.a.real(), dr = m.d.real();
    const double mid = 0.5 * (ar + dr);
    const double off = std::abs(m.b);
    const double rad = std::hypot(0.5 * (ar - dr), off);
    return {mid - rad, mid + rad};
}

/// Largest singular value of a 2x2 complex matrix via the closed-form
/// eigenvalues of G* G.
inline double spectral_norm_2x2(const Mat2c& g) {
    const Mat2c gtg = g.adjoint() * g;
    const auto [lo, hi] = hermitian_eigenvalues(gtg);
    (void)lo;
    return std::sqrt(std::max(hi, 0.0));
}

/// 2x2 real matrix, row-major.
struct Mat2d {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    static Mat2d identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }

    Mat2d operator*(const Mat2d& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2d operator+(const Mat2d& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2d scaled(double s) const { return {s * a, s * b, s * c, s * d}; }

    Mat2d inverse() const {
        const double dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }

    std::array<double, 2> apply(const std::array<double, 2>& x) const {
        return {a * x[0] + b * x[1], c * x[0] + d * x[1]};
    }

    Mat2c complex() const { return {cplx(a), cplx(b), cplx(c), cplx(d)}; }
};

/// Eigenvalues of a real 2x2 matrix (possibly complex pair).
inline std::pair<cplx, cplx> eigenvalues(const Mat2d& m) {
    const cplx half_tr = 0.5 * m.trace();
    const cplx disc = half_tr * half_tr - m.det();
    const cplx rad = std::sqrt(disc);
    return {half_tr - rad, half_tr + rad};
}

inline double spectral_norm(const Mat2d& m) { return spectral_norm_2x2(m.complex()); }

}  // namespace kinlab
