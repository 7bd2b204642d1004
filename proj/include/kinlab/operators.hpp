#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "kinlab/grid.hpp"
#include "kinlab/linsolve.hpp"
#include "kinlab/mat2.hpp"

namespace kinlab {

/// Banded operator with Dirichlet ends. `lower`/`upper` have length n-1.
struct TridiagonalOp {
    std::vector<double> lower, diag, upper;

    std::size_t size() const { return diag.size(); }

    bool symmetric() const {
        for (std::size_t i = 0; i + 1 < diag.size(); ++i)
            if (lower[i] != upper[i]) return false;
        return true;
    }
};

/// Three-point stencil applied with periodic wraparound (constant
/// coefficients, i.e. a circulant). Row j reads
///   c_m1 * x_{j-1} + c0 * x_j + c_p1 * x_{j+1}, indices mod n.
struct CirculantOp {
    double c_m1 = 0.0, c0 = 0.0, c_p1 = 0.0;
    std::size_t n = 0;

    std::size_t size() const { return n; }
};

using SpatialOp = std::variant<TridiagonalOp, CirculantOp>;

inline std::size_t op_size(const SpatialOp& op) {
    return std::visit([](const auto& o) { return o.size(); }, op);
}

inline void apply_op(const TridiagonalOp& op, std::span<const double> x,
                  std::span<double> y) {
    const std::size_t n = op.size();
    assert(x.size() == n && y.size() == n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = op.diag[j] * x[j];
        if (j > 0) s += op.lower[j - 1] * x[j - 1];
        if (j + 1 < n) s += op.upper[j] * x[j + 1];
        y[j] = s;
    }
}

inline void apply_op(const CirculantOp& op, std::span<const double> x,
                  std::span<double> y) {
    const std::size_t n = op.n;
    assert(x.size() == n && y.size() == n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jm = (j == 0) ? n - 1 : j - 1;
        const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
        y[j] = op.c_m1 * x[jm] + op.c0 * x[j] + op.c_p1 * x[jp];
    }
}

inline void apply_op(const SpatialOp& op, std::span<const double> x, std::span<double> y) {
    std::visit([&](const auto& o) { apply_op(o, x, y); }, op);
}

inline std::vector<double> apply_op(const SpatialOp& op, std::span<const double> x) {
    std::vector<double> y(x.size(), 0.0);
    apply_op(op, x, y);
    return y;
}

/// Solves (a I + s L) x = rhs for the banded forms in O(n).
inline std::vector<double> solve_shifted(const TridiagonalOp& op, double a, double s,
                                         std::span<const double> rhs) {
    const std::size_t n = op.size();
    std::vector<double> dl(n > 0 ? n - 1 : 0), dd(n), du(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) dd[i] = a + s * op.diag[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        dl[i] = s * op.lower[i];
        du[i] = s * op.upper[i];
    }
    return thomas_solve(dl, dd, du, rhs);
}

inline std::vector<double> solve_shifted(const CirculantOp& op, double a, double s,
                                         std::span<const double> rhs) {
    return cyclic_thomas_solve(s * op.c_m1, a + s * op.c0, s * op.c_p1, rhs);
}

inline std::vector<double> solve_shifted(const SpatialOp& op, double a, double s,
                                         std::span<const double> rhs) {
    return std::visit([&](const auto& o) { return solve_shifted(o, a, s, rhs); }, op);
}

/// Dense assembly for oracle cross-checks and mass-matrix solves.
inline Matrix dense(const SpatialOp& op) {
    const std::size_t n = op_size(op);
    Matrix m(n, n);
    std::vector<double> e(n, 0.0), col(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        apply_op(op, e, col);
        for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
        e[j] = 0.0;
    }
    return m;
}

/// Standard second-difference diffusion matrix (d/h^2) tridiag(-1, 2, -1)
/// with homogeneous Dirichlet boundary.
inline TridiagonalOp dirichlet_laplacian(std::size_t n, double h, double d) {
    if (n < 1) throw std::invalid_argument("dirichlet_laplacian: n must be >= 1");
    if (!(h > 0.0)) throw std::invalid_argument("dirichlet_laplacian: h must be > 0");
    if (d < 0.0) throw std::invalid_argument("dirichlet_laplacian: d must be >= 0");
    const double f = d / (h * h);
    TridiagonalOp op;
    op.lower.assign(n - 1, -f);
    op.upper.assign(n - 1, -f);
    op.diag.assign(n, 2.0 * f);
    return op;
}

/// First-order upwind advection (q/h)(u_j - u_{j-1}) with periodic wrap.
/// Only q >= 0 is accepted; the stencil direction is fixed.
inline CirculantOp periodic_upwind(std::size_t n, double h, double q) {
    if (n < 1) throw std::invalid_argument("periodic_upwind: n must be >= 1");
    if (!(h > 0.0)) throw std::invalid_argument("periodic_upwind: h must be > 0");
    if (q < 0.0) throw std::invalid_argument("periodic_upwind: q must be >= 0");
    CirculantOp op;
    op.n = n;
    op.c_m1 = -q / h;
    op.c0 = q / h;
    op.c_p1 = 0.0;
    return op;
}

/// Periodic diffusion stencil (d/h^2)(-1, 2, -1).
inline CirculantOp periodic_laplacian(std::size_t n, double h, double d) {
    if (n < 1) throw std::invalid_argument("periodic_laplacian: n must be >= 1");
    if (!(h > 0.0)) throw std::invalid_argument("periodic_laplacian: h must be > 0");
    if (d < 0.0) throw std::invalid_argument("periodic_laplacian: d must be >= 0");
    const double f = d / (h * h);
    CirculantOp op;
    op.n = n;
    op.c_m1 = -f;
    op.c0 = 2.0 * f;
    op.c_p1 = -f;
    return op;
}

/// Positive diagonal weights of the factored form D^T K D, where D is the
/// (n+1) x n difference map (Du)_1 = u_1, (Du)_j = u_j - u_{j-1},
/// (Du)_{n+1} = -u_n. Weights k_1..k_{n+1}.
struct DifferenceFactor {
    std::vector<double> k;

    explicit DifferenceFactor(std::vector<double> weights) : k(std::move(weights)) {
        if (k.size() < 2)
            throw std::invalid_argument("DifferenceFactor: need at least 2 weights");
        for (double v : k)
            if (!(v > 0.0))
                throw std::invalid_argument("DifferenceFactor: weights must be > 0");
    }

    std::size_t unknowns() const { return k.size() - 1; }
};

/// Assembles the symmetric positive definite tridiagonal L = D^T K D:
/// diag_j = k_j + k_{j+1}, off_j = -k_{j+1}. With K = I this is the plain
/// discrete Laplacian (h-free).
inline TridiagonalOp assemble_dtkd(const DifferenceFactor& f) {
    const std::size_t n = f.unknowns();
    TridiagonalOp op;
    op.diag.resize(n);
    op.lower.resize(n - 1);
    op.upper.resize(n - 1);
    for (std::size_t j = 0; j < n; ++j) op.diag[j] = f.k[j] + f.k[j + 1];
    for (std::size_t j = 0; j + 1 < n; ++j) {
        op.lower[j] = -f.k[j + 1];
        op.upper[j] = -f.k[j + 1];
    }
    return op;
}

/// The node-local 2x2 coupling matrices: the raw block
/// C = alpha [[c, -1], [-c, 1]] and its symmetrized similarity transform
/// Ct = alpha [[c, -sqrt(c)], [-sqrt(c), 1]] = S C S^{-1}, S = diag(sqrt(c), 1).
/// Ct is symmetric PSD; both share the eigenvalues {0, alpha(1+c)}.
struct CouplingBlock {
    Mat2d raw;
    Mat2d symmetrized;
};

inline CouplingBlock coupling_blocks(const WeightParams& w) {
    if (!(w.c > 0.0) || !(w.alpha > 0.0))
        throw std::invalid_argument("coupling_blocks: requires c > 0 and alpha > 0");
    const double r = std::sqrt(w.c);
    CouplingBlock blk;
    blk.raw = Mat2d{w.alpha * w.c, -w.alpha, -w.alpha * w.c, w.alpha};
    blk.symmetrized = Mat2d{w.alpha * w.c, -w.alpha * r, -w.alpha * r, w.alpha};
    return blk;
}

/// Minimum sampled Rayleigh quotient <L u, u> / <u, u> over random unit
/// vectors. A result >= -1e-12 certifies sampled accretivity.
inline double accretivity_probe(const SpatialOp& op, std::size_t trials,
                                std::uint64_t seed = 1234) {
    const std::size_t n = op_size(op);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> u(n), lu(n);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        double nrm2 = 0.0;
        for (double& x : u) {
            x = gauss(rng);
            nrm2 += x * x;
        }
        if (nrm2 == 0.0) continue;
        apply_op(op, u, lu);
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += lu[j] * u[j];
        worst = std::min(worst, dot / nrm2);
    }
    return worst;
}

}  // namespace kinlab
