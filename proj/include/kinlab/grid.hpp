#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinlab {

/// Thrown for invalid parameters or malformed configuration input.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a computation produces non-finite values or fails to converge.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Boundary { Dirichlet, Periodic };

/// Uniform 1-D grid. Dirichlet grids hold only the interior unknowns,
/// so h = (b-a)/(n+1); periodic grids have h = (b-a)/n with nodes
/// x_j = a + j*h, j = 0..n-1.
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    std::size_t n_nodes = 1;
    Boundary boundary = Boundary::Dirichlet;

    Grid1D() = default;
    Grid1D(double a_, double b_, std::size_t n, Boundary kind)
        : a(a_), b(b_), n_nodes(n), boundary(kind) {
        if (n_nodes == 0) throw std::invalid_argument("Grid1D: n_nodes must be >= 1");
        if (!(b > a)) throw std::invalid_argument("Grid1D: requires b > a");
    }

    double h() const {
        return boundary == Boundary::Dirichlet
                   ? (b - a) / static_cast<double>(n_nodes + 1)
                   : (b - a) / static_cast<double>(n_nodes);
    }

    double node_x(std::size_t j) const {
        return boundary == Boundary::Dirichlet
                   ? a + static_cast<double>(j + 1) * h()
                   : a + static_cast<double>(j) * h();
    }

    /// 1-node grid with unit spacing; used for scalar (0-d) problems.
    static Grid1D scalar() { return Grid1D(0.0, 2.0, 1, Boundary::Dirichlet); }
};

/// Partition coefficient c and kinetic rate alpha of the adsorption law
/// v_t = alpha (c u - v).
struct WeightParams {
    double c = 1.0;
    double alpha = 1.0;
};

/// Paired grid fields at one time level: mobile concentration u and
/// adsorbed amount v.
struct State {
    std::vector<double> u;
    std::vector<double> v;
    double t = 0.0;

    State() = default;
    State(std::vector<double> u_, std::vector<double> v_, double t_ = 0.0)
        : u(std::move(u_)), v(std::move(v_)), t(t_) {
        if (u.size() != v.size())
            throw std::invalid_argument("State: u and v must have equal length");
    }

    static State zero(std::size_t n, double t = 0.0) {
        return State(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), t);
    }

    std::size_t size() const { return u.size(); }

    bool finite() const {
        for (double x : u)
            if (!std::isfinite(x)) return false;
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

/// L_p grid norm (sum_j h |f_j|^p)^(1/p); p = inf gives max_j |f_j|.
/// Supported orders: 1, 2, inf.
inline double grid_norm_p(std::span<const double> f, const Grid1D& grid, double p) {
    if (f.size() != grid.n_nodes)
        throw std::invalid_argument("grid_norm_p: vector length does not match grid");
    const double h = grid.h();
    if (p == std::numeric_limits<double>::infinity()) {
        double m = 0.0;
        for (double x : f) m = std::max(m, std::abs(x));
        return m;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (double x : f) s += std::abs(x);
        return h * s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (double x : f) s += x * x;
        return std::sqrt(h * s);
    }
    throw std::invalid_argument("grid_norm_p: supported orders are 1, 2, inf");
}

/// Weighted norm sqrt(c ||u||_2^2 + ||v||_2^2) built on the h-weighted
/// grid 2-norm. This is the quantity contracted by the implicit schemes.
inline double weighted_norm(const State& s, const WeightParams& w, const Grid1D& grid) {
    if (!(w.c > 0.0)) throw std::invalid_argument("weighted_norm: requires c > 0");
    const double nu = grid_norm_p(s.u, grid, 2.0);
    const double nv = grid_norm_p(s.v, grid, 2.0);
    return std::sqrt(w.c * nu * nu + nv * nv);
}

/// Euclidean product norm sqrt(||u||_2^2 + ||v||_2^2) (h-weighted).
inline double product_norm(const State& s, const Grid1D& grid) {
    const double nu = grid_norm_p(s.u, grid, 2.0);
    const double nv = grid_norm_p(s.v, grid, 2.0);
    return std::sqrt(nu * nu + nv * nv);
}

/// Change of variables u -> sqrt(c) u; v unchanged. The plain product norm
/// of the result equals the weighted norm of the input.
inline State symmetrize(const State& s, const WeightParams& w) {
    if (!(w.c > 0.0)) throw std::invalid_argument("symmetrize: requires c > 0");
    State out = s;
    const double r = std::sqrt(w.c);
    for (double& x : out.u) x *= r;
    return out;
}

/// Inverse of symmetrize.
inline State desymmetrize(const State& s, const WeightParams& w) {
    if (!(w.c > 0.0)) throw std::invalid_argument("desymmetrize: requires c > 0");
    State out = s;
    const double r = std::sqrt(w.c);
    for (double& x : out.u) x /= r;
    return out;
}

}  // namespace kinlab
