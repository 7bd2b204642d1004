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

/// Monotone increasing kinetics g with primitive G (G' = g). Monotonicity
/// is verified by dense sampling on the declared range at construction;
/// evaluations outside that range are rejected by the functionals below.
/// All inner products in this module are plain sums (H = R^P), no h factor.
struct MonotoneG {
    std::function<double(double)> g;
    std::function<double(double)> primitive;
    double lo = -1.0;
    double hi = 1.0;

    MonotoneG(std::function<double(double)> g_, std::function<double(double)> G_,
              double lo_, double hi_, std::size_t samples = 1000)
        : g(std::move(g_)), primitive(std::move(G_)), lo(lo_), hi(hi_) {
        if (!(hi > lo)) throw std::invalid_argument("MonotoneG: empty range");
        double prev = g(lo);
        for (std::size_t i = 1; i < samples; ++i) {
            const double x =
                lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
            const double y = g(x);
            if (y < prev - 1e-14 * (1.0 + std::abs(prev)))
                throw std::invalid_argument(
                    "MonotoneG: g is not monotone increasing on the declared range");
            prev = y;
        }
    }

    bool in_range(double x) const { return x >= lo && x <= hi; }

    static MonotoneG linear(double c, double span = 1e6) {
        return MonotoneG([c](double u) { return c * u; },
                         [c](double u) { return 0.5 * c * u * u; }, -span, span);
    }
    static MonotoneG cubic(double span = 1e3) {
        return MonotoneG([](double u) { return u * u * u; },
                         [](double u) { return 0.25 * u * u * u * u; }, -span, span);
    }
    static MonotoneG arctangent(double span = 1e6) {
        return MonotoneG([](double u) { return std::atan(u); },
                         [](double u) {
                             return u * std::atan(u) - 0.5 * std::log1p(u * u);
                         },
                         -span, span);
    }
    static MonotoneG exp_minus_one(double span = 50.0) {
        return MonotoneG([](double u) { return std::expm1(u); },
                         [](double u) { return std::expm1(u) - u; }, -span, span);
    }
};

/// Lyapunov functional sum_j G(u_j) + (1/2) sum_j v_j^2, non-increasing
/// along the continuous dynamics when <L u, g(u)> >= 0.
inline double lyapunov(const State& s, const MonotoneG& mg) {
    double acc = 0.0;
    for (double x : s.u) {
        if (!mg.in_range(x))
            throw std::invalid_argument("lyapunov: state outside declared monotone range");
        acc += mg.primitive(x);
    }
    for (double x : s.v) acc += 0.5 * x * x;
    return acc;
}

/// The pairing <L u, g(u)> (plain R^P inner product). For L = D^T K D with
/// monotone increasing g this is nonnegative.
inline double pairing_check(const SpatialOp& op, const MonotoneG& mg,
                            std::span<const double> u) {
    const std::vector<double> lu = apply_op(op, u);
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (!mg.in_range(u[j]))
            throw std::invalid_argument(
                "pairing_check: state outside declared monotone range");
        acc += lu[j] * mg.g(u[j]);
    }
    return acc;
}

/// One fully implicit step of the nonlinear kinetic system
///   u' - alpha (v - g(u)) + L u = 0,   v' + alpha (v - g(u)) = 0.
/// v is eliminated nodewise; the mobile equation
///   u + tau L u + (alpha tau/(1+alpha tau)) g(u) = u_prev + (alpha tau/(1+alpha tau)) v_prev
/// is solved by Picard iteration with g frozen at the previous iterate,
/// until successive iterates differ by < 1e-12 (sup norm) or 50 sweeps.
inline State step_nonlinear(const SpatialOp& op, const MonotoneG& mg, double alpha,
                            const State& s, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("step_nonlinear: tau must be > 0");
    const std::size_t n = s.size();
    if (op_size(op) != n)
        throw std::invalid_argument("step_nonlinear: dimension mismatch");
    const double b = alpha * tau;
    const double e = 1.0 / (1.0 + b);
    const double be = b * e;

    const detail::ReducedFactor factor = detail::factor_reduced(op, 1.0, tau);

    std::vector<double> base(n), rhs(n);
    for (std::size_t j = 0; j < n; ++j) base[j] = s.u[j] + be * s.v[j];

    std::vector<double> u_cur = s.u;
    double residual = 0.0;
    constexpr int kMaxSweeps = 50;
    constexpr double kTol = 1e-12;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!mg.in_range(u_cur[j]))
                throw numeric_error(
                    "step_nonlinear: iterate left the declared monotone range");
            rhs[j] = base[j] - be * mg.g(u_cur[j]);
        }
        std::vector<double> u_next = detail::solve(factor, rhs);
        residual = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            residual = std::max(residual, std::abs(u_next[j] - u_cur[j]));
        u_cur = std::move(u_next);
        if (residual < kTol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw numeric_error("step_nonlinear: Picard iteration did not converge "
                            "(last residual " + std::to_string(residual) + ")");

    State out;
    out.t = s.t + tau;
    out.u = std::move(u_cur);
    out.v.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        out.v[j] = e * (s.v[j] + b * mg.g(out.u[j]));
    return out;
}

/// One mobile species exchanging with two adsorbed sites at separate
/// rates and partition coefficients.
struct TwoSpeciesParams {
    double alpha1 = 1.0, alpha2 = 1.0;
    double c1 = 1.0, c2 = 1.0;
};

struct TwoSpeciesState {
    std::vector<double> u, v1, v2;
    double t = 0.0;

    std::size_t size() const { return u.size(); }
};

/// Fully implicit step: both adsorbed unknowns eliminated nodewise
/// (each with its own alpha_i, c_i), a single banded mobile solve, then
/// recovery of v1 and v2.
inline TwoSpeciesState step_two_species(const TwoSpeciesState& s,
                                        const TwoSpeciesParams& p,
                                        const SpatialOp& op, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("step_two_species: tau must be > 0");
    const std::size_t n = s.size();
    if (s.v1.size() != n || s.v2.size() != n || op_size(op) != n)
        throw std::invalid_argument("step_two_species: dimension mismatch");
    if (!(p.alpha1 > 0.0) || !(p.alpha2 > 0.0) || !(p.c1 > 0.0) || !(p.c2 > 0.0))
        throw std::invalid_argument("step_two_species: parameters must be > 0");

    const double b1 = p.alpha1 * tau, b2 = p.alpha2 * tau;
    const double e1 = 1.0 / (1.0 + b1), e2 = 1.0 / (1.0 + b2);
    const double r = 1.0 + b1 * p.c1 * e1 + b2 * p.c2 * e2;

    std::vector<double> rhs(n);
    for (std::size_t j = 0; j < n; ++j)
        rhs[j] = s.u[j] + b1 * e1 * s.v1[j] + b2 * e2 * s.v2[j];

    TwoSpeciesState out;
    out.t = s.t + tau;
    out.u = solve_shifted(op, r, tau, rhs);
    out.v1.resize(n);
    out.v2.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.v1[j] = e1 * (s.v1[j] + b1 * p.c1 * out.u[j]);
        out.v2[j] = e2 * (s.v2[j] + b2 * p.c2 * out.u[j]);
    }
    return out;
}

/// Decaying quantity of the two-species system:
/// c1 c2 ||u||^2 + c2 ||v1||^2 + c1 ||v2||^2 (plain R^P sums).
inline double two_species_quantity(const TwoSpeciesState& s, const TwoSpeciesParams& p) {
    double uu = 0.0, w1 = 0.0, w2 = 0.0;
    for (double x : s.u) uu += x * x;
    for (double x : s.v1) w1 += x * x;
    for (double x : s.v2) w2 += x * x;
    return p.c1 * p.c2 * uu + p.c2 * w1 + p.c1 * w2;
}

}  // namespace kinlab
