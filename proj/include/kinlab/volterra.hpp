#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kinlab/grid.hpp"
#include "kinlab/operators.hpp"
#include "kinlab/stepper.hpp"

namespace kinlab {

/// Trajectory of the decoupled nonlocal solver: U at t_0..t_n, plus the
/// initial adsorbed gap v0 - c u0 that drives the decaying source
/// beta(t_n) (v0 - c u0).
struct NonlocalTrajectory {
    std::vector<std::vector<double>> u;
    std::vector<double> source_gap;
    double tau = 0.0;
};

namespace detail {

/// (1 - exp(-x)) computed stably for small x.
inline double one_minus_exp_neg(double x) { return -std::expm1(-x); }

}  // namespace detail

/// Solves the decoupled nonlocal form of the kinetic system,
///   u' + c (u' * beta) + L u = f + beta(t) (v0 - c u0),
/// with the exponential kernel beta(t) = alpha exp(-alpha t). The
/// convolution J = u' * beta obeys the exact decay recurrence
///   J^n = exp(-alpha tau) J^{n-1} + (1 - exp(-alpha tau)) (u^n - u^{n-1})/tau,
/// (u taken linear within the step), so each step costs one banded solve
/// and O(n) updates regardless of history length.
inline NonlocalTrajectory solve_nonlocal(const SpatialOp& op,
                                         std::span<const double> u0,
                                         std::span<const double> v0,
                                         const WeightParams& w, double tau,
                                         std::size_t n_steps,
                                         const SourceFn& source = nullptr) {
    if (!(tau > 0.0)) throw std::invalid_argument("solve_nonlocal: tau must be > 0");
    if (u0.size() != v0.size() || u0.size() != op_size(op))
        throw std::invalid_argument("solve_nonlocal: dimension mismatch");
    const std::size_t n = u0.size();
    const double atau = w.alpha * tau;
    const double decay = std::exp(-atau);
    const double mu = detail::one_minus_exp_neg(atau);
    const double a = 1.0 + w.c * mu;

    const detail::ReducedFactor factor = detail::factor_reduced(op, a, tau);

    NonlocalTrajectory traj;
    traj.tau = tau;
    traj.u.reserve(n_steps + 1);
    traj.u.emplace_back(u0.begin(), u0.end());

    traj.source_gap.resize(n);
    for (std::size_t j = 0; j < n; ++j) traj.source_gap[j] = v0[j] - w.c * u0[j];
    const std::vector<double>& source_gap = traj.source_gap;

    std::vector<double> conv(n, 0.0);  // running J accumulator
    std::vector<double> rhs(n), fz(n, 0.0);
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double t_new = static_cast<double>(k) * tau;
        const double beta_t = w.alpha * std::exp(-w.alpha * t_new);
        if (source) source(t_new, fz);
        const std::vector<double>& u_prev = traj.u.back();
        for (std::size_t j = 0; j < n; ++j) {
            rhs[j] = a * u_prev[j] +
                     tau * (fz[j] + beta_t * source_gap[j] -
                            w.c * decay * conv[j]);
        }
        std::vector<double> u_new = detail::solve(factor, rhs);
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(u_new[j]))
                throw numeric_error("solve_nonlocal: overflow at step " +
                                    std::to_string(k));
            conv[j] = decay * conv[j] + mu * (u_new[j] - u_prev[j]) / tau;
        }
        traj.u.push_back(std::move(u_new));
    }
    return traj;
}

/// Recovers the adsorbed component from a mobile trajectory via
///   v(t) = exp(-alpha t) v0 + integral of alpha c u(s) exp(-alpha(t-s)) ds,
/// advanced with the same exponential recurrence and u linear within each
/// step (the increment is exact for that interpolation, so a constant
/// equilibrium u = u*, v0 = c u* is a fixed point to rounding).
inline std::vector<std::vector<double>> recover_v(const NonlocalTrajectory& traj,
                                                  std::span<const double> v0,
                                                  const WeightParams& w) {
    if (traj.u.empty()) throw std::invalid_argument("recover_v: empty trajectory");
    if (v0.size() != traj.u.front().size())
        throw std::invalid_argument("recover_v: dimension mismatch");
    const std::size_t n = v0.size();
    const double atau = w.alpha * traj.tau;
    const double decay = std::exp(-atau);
    const double mu = detail::one_minus_exp_neg(atau);
    // slope weight (1 - mu/(alpha tau)) -> 0 as alpha tau -> 0
    const double slope_w = atau > 0.0 ? 1.0 - mu / atau : 0.0;

    std::vector<std::vector<double>> v;
    v.reserve(traj.u.size());
    v.emplace_back(v0.begin(), v0.end());
    for (std::size_t k = 1; k < traj.u.size(); ++k) {
        const std::vector<double>& up = traj.u[k - 1];
        const std::vector<double>& un = traj.u[k];
        std::vector<double> vn(n);
        for (std::size_t j = 0; j < n; ++j)
            vn[j] = decay * v[k - 1][j] +
                    w.c * (mu * up[j] + slope_w * (un[j] - up[j]));
        v.push_back(std::move(vn));
    }
    return v;
}

/// h-weighted 2-norm of v - c u: zero exactly at kinetic equilibrium.
inline double equilibrium_residual(const State& s, const WeightParams& w,
                                   const Grid1D& grid) {
    std::vector<double> gap(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) gap[j] = s.v[j] - w.c * s.u[j];
    return grid_norm_p(gap, grid, 2.0);
}

}  // namespace kinlab
