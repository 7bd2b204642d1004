#pragma once

// Independent numerical oracles for the test suite. These deliberately
// avoid the library's own solve paths: eigenvalues come from a cyclic
// Jacobi iteration, linear systems from Gauss-Jordan, and the coupled
// one-step systems are assembled densely from the block structure.

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "kinlab/kinlab.hpp"

namespace oracle {

using kinlab::Matrix;

/// Cyclic Jacobi eigenvalue iteration for a real symmetric matrix.
inline std::vector<double> jacobi_eigenvalues(Matrix a, int max_sweeps = 100) {
    const std::size_t n = a.rows;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cth = 1.0 / std::sqrt(t * t + 1.0);
                const double sth = t * cth;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = cth * akp - sth * akq;
                    a(k, q) = sth * akp + cth * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cth * apk - sth * aqk;
                    a(q, k) = sth * apk + cth * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

/// Largest singular value of a 2x2 complex matrix via the 4x4 real
/// symmetric embedding [[Re H, -Im H], [Im H, Re H]] of H = G* G.
inline double svd_sigma_max(const kinlab::Mat2c& g) {
    const kinlab::Mat2c h = g.adjoint() * g;
    Matrix e(4, 4);
    const kinlab::cplx hh[2][2] = {{h.a, h.b}, {h.c, h.d}};
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            e(i, j) = hh[i][j].real();
            e(i, j + 2) = -hh[i][j].imag();
            e(i + 2, j) = hh[i][j].imag();
            e(i + 2, j + 2) = hh[i][j].real();
        }
    }
    const std::vector<double> eig = jacobi_eigenvalues(e);
    return std::sqrt(std::max(eig.back(), 0.0));
}

/// Gauss-Jordan elimination with partial pivoting.
inline std::vector<double> gauss_jordan_solve(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows;
    if (a.cols != n || b.size() != n)
        throw std::invalid_argument("gauss_jordan_solve: dimension mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (a(p, k) == 0.0) throw std::runtime_error("gauss_jordan_solve: singular");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        const double piv = a(k, k);
        for (std::size_t j = 0; j < n; ++j) a(k, j) /= piv;
        b[k] /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0.0) continue;
            const double f = a(i, k);
            for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    return b;
}

/// Dense one-step solve of the coupled system
///   (1/tau)(W^n - W^{n-1}) + C W^n + L W^{n*} = F^n
/// assembled as a 2n x 2n block system. Implicit and explicit transport
/// and the IMEX split are supported.
inline kinlab::State dense_block_step(const kinlab::SchemeSpec& spec,
                                      const kinlab::State& s, double tau,
                                      std::span<const double> f = {}) {
    using namespace kinlab;
    const std::size_t n = spec.grid.n_nodes;
    const double h = spec.grid.h();
    const double a = spec.w.alpha;
    const double c = spec.w.c;

    Matrix ld(n, n), la(n, n);
    const bool dirichlet = spec.grid.boundary == Boundary::Dirichlet;
    if (spec.kind != SchemeKind::ImplicitAdvection &&
        spec.kind != SchemeKind::ExplicitAdvection) {
        ld = dense(dirichlet ? SpatialOp(dirichlet_laplacian(n, h, spec.d))
                             : SpatialOp(periodic_laplacian(n, h, spec.d)));
    }
    if (spec.kind != SchemeKind::ImplicitDiffusion &&
        spec.kind != SchemeKind::ExplicitDiffusion) {
        la = dense(SpatialOp(periodic_upwind(n, h, spec.q)));
    }

    Matrix limp(n, n), lexp(n, n);
    switch (spec.kind) {
        case SchemeKind::ImplicitDiffusion: limp = ld; break;
        case SchemeKind::ExplicitDiffusion: lexp = ld; break;
        case SchemeKind::ImplicitAdvection: limp = la; break;
        case SchemeKind::ExplicitAdvection: lexp = la; break;
        case SchemeKind::ImexAdvectionDiffusion: limp = ld; lexp = la; break;
    }

    Matrix sys(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) sys(i, j) = tau * limp(i, j);
        sys(i, i) += 1.0 + tau * a * c;
        sys(i, i + n) = -tau * a;
        sys(i + n, i) = -tau * a * c;
        sys(i + n, i + n) = 1.0 + tau * a;
    }
    std::vector<double> rhs(2 * n);
    const std::vector<double> lu_prev = kinlab::matvec(lexp, s.u);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = s.u[i] - tau * lu_prev[i] + (f.empty() ? 0.0 : tau * f[i]);
        rhs[i + n] = s.v[i];
    }
    const std::vector<double> sol = gauss_jordan_solve(sys, rhs);
    kinlab::State out = kinlab::State::zero(n, s.t + tau);
    for (std::size_t i = 0; i < n; ++i) {
        out.u[i] = sol[i];
        out.v[i] = sol[i + n];
    }
    return out;
}

/// Dense fully implicit two-species step as a 3n x 3n block solve.
inline kinlab::TwoSpeciesState dense_two_species_step(
    const kinlab::TwoSpeciesState& s, const kinlab::TwoSpeciesParams& p,
    const kinlab::SpatialOp& op, double tau) {
    using namespace kinlab;
    const std::size_t n = s.size();
    const Matrix l = dense(op);
    Matrix sys(3 * n, 3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) sys(i, j) = tau * l(i, j);
        sys(i, i) += 1.0;
        sys(i, i + n) = 1.0;
        sys(i, i + 2 * n) = 1.0;
        sys(i + n, i) = -tau * p.alpha1 * p.c1;
        sys(i + n, i + n) = 1.0 + tau * p.alpha1;
        sys(i + 2 * n, i) = -tau * p.alpha2 * p.c2;
        sys(i + 2 * n, i + 2 * n) = 1.0 + tau * p.alpha2;
    }
    std::vector<double> rhs(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = s.u[i] + s.v1[i] + s.v2[i];
        rhs[i + n] = s.v1[i];
        rhs[i + 2 * n] = s.v2[i];
    }
    const std::vector<double> sol = gauss_jordan_solve(sys, rhs);
    TwoSpeciesState out;
    out.t = s.t + tau;
    out.u.assign(sol.begin(), sol.begin() + n);
    out.v1.assign(sol.begin() + n, sol.begin() + 2 * n);
    out.v2.assign(sol.begin() + 2 * n, sol.end());
    return out;
}

// -- random data helpers -----------------------------------------------------

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n,
                                         double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

inline Matrix random_spd(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = dist(rng);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += a(k, i) * a(k, j);
            m(i, j) = s;
        }
    for (std::size_t i = 0; i < n; ++i) m(i, i) += 0.2;
    return m;
}

inline kinlab::Mat2c random_mat2c(std::mt19937_64& rng, double scale = 2.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    auto z = [&] { return kinlab::cplx(dist(rng), dist(rng)); };
    return {z(), z(), z(), z()};
}

}  // namespace oracle
