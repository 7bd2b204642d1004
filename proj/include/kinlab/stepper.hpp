#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kinlab/grid.hpp"
#include "kinlab/linsolve.hpp"
#include "kinlab/operators.hpp"
#include "kinlab/scheme.hpp"

namespace kinlab {

/// Scheme selection plus the physical coefficients it needs. Advection
/// kinds ignore d, diffusion kinds ignore q; the kinetic coupling term
/// is treated implicitly in every kind.
struct SchemeSpec {
    SchemeKind kind = SchemeKind::ImplicitDiffusion;
    double d = 0.0;
    double q = 0.0;
    WeightParams w;
    Grid1D grid;
};

struct TraceRecord {
    double t = 0.0;
    double weighted = 0.0;         // sqrt(c ||u||^2 + ||v||^2)
    double euclid = 0.0;           // sqrt(||u||^2 + ||v||^2)
    double equilibrium_gap = 0.0;  // ||v - c u||
};

/// Per-step norm records; index 0 is the initial state.
struct NormTrace {
    std::vector<TraceRecord> records;
};

/// Source term evaluated at time t into `out`; null means F = 0.
using SourceFn = std::function<void(double t, std::span<double> out)>;

/// Nodewise implicit update of the adsorbed unknown:
/// v_new = (v_prev + alpha tau c u_new) / (1 + alpha tau).
inline std::vector<double> eliminate_v(std::span<const double> v_prev,
                                       std::span<const double> u_new, double tau,
                                       const WeightParams& w) {
    if (!(tau > 0.0)) throw std::invalid_argument("eliminate_v: tau must be > 0");
    if (v_prev.size() != u_new.size())
        throw std::invalid_argument("eliminate_v: length mismatch");
    const double b = w.alpha * tau;
    const double e = 1.0 / (1.0 + b);
    std::vector<double> v(v_prev.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = e * (v_prev[j] + b * w.c * u_new[j]);
    return v;
}

namespace detail {

inline void require_periodic(const SchemeSpec& spec, const char* what) {
    if (spec.grid.boundary != Boundary::Periodic)
        throw std::invalid_argument(std::string(what) +
                                    ": requires a periodic grid (upwind stencil)");
}

inline SpatialOp diffusion_op(const SchemeSpec& spec) {
    const double h = spec.grid.h();
    if (spec.grid.boundary == Boundary::Dirichlet)
        return dirichlet_laplacian(spec.grid.n_nodes, h, spec.d);
    return periodic_laplacian(spec.grid.n_nodes, h, spec.d);
}

inline SpatialOp advection_op(const SchemeSpec& spec) {
    return periodic_upwind(spec.grid.n_nodes, spec.grid.h(), spec.q);
}

struct TermOps {
    std::optional<SpatialOp> implicit_op;  // solved at the new level
    std::optional<SpatialOp> explicit_op;  // applied at the old level
};

inline TermOps build_ops(const SchemeSpec& spec) {
    TermOps ops;
    switch (spec.kind) {
        case SchemeKind::ImplicitDiffusion:
            ops.implicit_op = diffusion_op(spec);
            break;
        case SchemeKind::ExplicitDiffusion:
            ops.explicit_op = diffusion_op(spec);
            break;
        case SchemeKind::ImplicitAdvection:
            require_periodic(spec, "ImplicitAdvection");
            ops.implicit_op = advection_op(spec);
            break;
        case SchemeKind::ExplicitAdvection:
            require_periodic(spec, "ExplicitAdvection");
            ops.explicit_op = advection_op(spec);
            break;
        case SchemeKind::ImexAdvectionDiffusion:
            require_periodic(spec, "ImexAdvectionDiffusion");
            ops.implicit_op = diffusion_op(spec);
            ops.explicit_op = advection_op(spec);
            break;
    }
    return ops;
}

using ReducedFactor = std::variant<TridiagFactor, CyclicFactor>;

/// Prefactors (r I + tau L) for the implicit transport solve.
inline ReducedFactor factor_reduced(const SpatialOp& op, double r, double tau) {
    if (const auto* t = std::get_if<TridiagonalOp>(&op)) {
        const std::size_t n = t->size();
        std::vector<double> dl(n > 0 ? n - 1 : 0), dd(n), du(n > 0 ? n - 1 : 0);
        for (std::size_t i = 0; i < n; ++i) dd[i] = r + tau * t->diag[i];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            dl[i] = tau * t->lower[i];
            du[i] = tau * t->upper[i];
        }
        return TridiagFactor(std::move(dl), dd, du);
    }
    const auto& c = std::get<CirculantOp>(op);
    return CyclicFactor(tau * c.c_m1, r + tau * c.c0, tau * c.c_p1, c.n);
}

inline std::vector<double> solve(const ReducedFactor& f, std::span<const double> rhs) {
    return std::visit([&](const auto& s) { return s.solve(rhs); }, f);
}

/// One-step engine shared by step() and run(). Holds the assembled
/// operators and the prefactored implicit system for a fixed tau.
class StepEngine {
public:
    StepEngine(const SchemeSpec& spec, double tau) : spec_(spec), tau_(tau) {
        if (!(tau > 0.0)) throw std::invalid_argument("step: tau must be > 0");
        if (!(spec.w.c > 0.0)) throw std::invalid_argument("step: requires c > 0");
        if (spec.w.alpha < 0.0)
            throw std::invalid_argument("step: requires alpha >= 0");
        ops_ = build_ops(spec);
        const double b = spec.w.alpha * tau;
        e_ = 1.0 / (1.0 + b);
        be_ = b * e_;
        r_ = 1.0 + b * spec.w.c * e_;
        if (ops_.implicit_op) factor_ = factor_reduced(*ops_.implicit_op, r_, tau);
        scratch_.resize(spec.grid.n_nodes);
    }

    State advance(const State& s, const SourceFn& source) {
        const std::size_t n = spec_.grid.n_nodes;
        if (s.size() != n) throw std::invalid_argument("step: state/grid size mismatch");
        if (!s.finite()) throw numeric_error("step: state contains NaN/Inf");
        const double t_new = s.t + tau_;

        std::vector<double> rhs(n, 0.0);
        if (source) {
            source(t_new, rhs);
            for (double& x : rhs) x *= tau_;
        }
        for (std::size_t j = 0; j < n; ++j) rhs[j] += s.u[j] + be_ * s.v[j];
        if (ops_.explicit_op) {
            apply_op(*ops_.explicit_op, s.u, scratch_);
            for (std::size_t j = 0; j < n; ++j) rhs[j] -= tau_ * scratch_[j];
        }

        State out;
        out.t = t_new;
        if (ops_.implicit_op) {
            out.u = solve(*factor_, rhs);
        } else {
            out.u = std::move(rhs);
            for (double& x : out.u) x /= r_;
        }
        out.v = eliminate_v(s.v, out.u, tau_, spec_.w);
        return out;
    }

private:
    SchemeSpec spec_;
    double tau_;
    TermOps ops_;
    std::optional<ReducedFactor> factor_;
    double e_ = 1.0, be_ = 0.0, r_ = 1.0;
    std::vector<double> scratch_;
};

}  // namespace detail

/// Advances one step of the chosen scheme. The adsorbed unknown is
/// eliminated nodewise, the reduced mobile system
///   (1 + alpha tau c/(1+alpha tau)) u + tau L u = rhs
/// is solved (implicit kinds) or evaluated (explicit kinds), and v is
/// recovered. `f` is the source at the new time level; empty means zero.
inline State step(const SchemeSpec& spec, const State& s, double tau,
                  std::span<const double> f = {}) {
    detail::StepEngine engine(spec, tau);
    SourceFn src;
    if (!f.empty()) {
        if (f.size() != spec.grid.n_nodes)
            throw std::invalid_argument("step: source length mismatch");
        src = [&f](double, std::span<double> out) {
            for (std::size_t j = 0; j < out.size(); ++j) out[j] = f[j];
        };
    }
    return engine.advance(s, src);
}

/// Runs n_steps of the scheme, recording the norm trace (initial state
/// included as record 0). Propagates numeric failures with the step index.
inline std::pair<State, NormTrace> run(const SchemeSpec& spec, const State& s0,
                                       double tau, std::size_t n_steps,
                                       const SourceFn& source = nullptr) {
    if (n_steps < 1) throw std::invalid_argument("run: n_steps must be >= 1");
    detail::StepEngine engine(spec, tau);
    NormTrace trace;
    trace.records.reserve(n_steps + 1);

    auto record = [&](const State& s) {
        TraceRecord r;
        r.t = s.t;
        r.weighted = weighted_norm(s, spec.w, spec.grid);
        r.euclid = product_norm(s, spec.grid);
        std::vector<double> gap(s.size());
        for (std::size_t j = 0; j < s.size(); ++j)
            gap[j] = s.v[j] - spec.w.c * s.u[j];
        r.equilibrium_gap = grid_norm_p(gap, spec.grid, 2.0);
        return r;
    };

    State cur = s0;
    trace.records.push_back(record(cur));
    for (std::size_t k = 1; k <= n_steps; ++k) {
        try {
            cur = engine.advance(cur, source);
        } catch (const numeric_error& err) {
            throw numeric_error(std::string(err.what()) + " (at step " +
                                std::to_string(k) + ")");
        }
        TraceRecord r = record(cur);
        if (!std::isfinite(r.weighted) || !std::isfinite(r.euclid))
            throw numeric_error("run: non-finite state at step " + std::to_string(k));
        trace.records.push_back(r);
    }
    return {std::move(cur), std::move(trace)};
}

/// Advances n_steps without recording a trace (bulk driver for the
/// experiment harness).
inline State integrate(const SchemeSpec& spec, State s, double tau,
                       std::size_t n_steps, const SourceFn& source = nullptr) {
    detail::StepEngine engine(spec, tau);
    for (std::size_t k = 1; k <= n_steps; ++k) {
        try {
            s = engine.advance(s, source);
        } catch (const numeric_error& err) {
            throw numeric_error(std::string(err.what()) + " (at step " +
                                std::to_string(k) + ")");
        }
    }
    return s;
}

/// Mass-matrix variant (fully implicit only): solves
///   (1/tau) M (W^n - W^{n-1}) + C M W^n + L W^n = F
/// with M symmetric positive definite. The v-row still eliminates
/// nodewise because M cancels there; the mobile solve is dense, O(n^3).
inline State mass_matrix_step(const Matrix& mass, const SchemeSpec& spec,
                              const State& s, double tau,
                              std::span<const double> f = {}) {
    if (spec.kind != SchemeKind::ImplicitDiffusion &&
        spec.kind != SchemeKind::ImplicitAdvection)
        throw std::invalid_argument(
            "mass_matrix_step: transport must be implicit (n* = n)");
    if (!(tau > 0.0)) throw std::invalid_argument("mass_matrix_step: tau must be > 0");
    const std::size_t n = spec.grid.n_nodes;
    if (mass.rows != n || mass.cols != n)
        throw std::invalid_argument("mass_matrix_step: mass matrix size mismatch");
    if (s.size() != n)
        throw std::invalid_argument("mass_matrix_step: state/grid size mismatch");
    if (!is_spd(mass))
        throw std::invalid_argument(
            "mass_matrix_step: mass matrix is not symmetric positive definite");
    if (!s.finite()) throw numeric_error("mass_matrix_step: state contains NaN/Inf");

    const detail::TermOps ops = detail::build_ops(spec);
    const double b = spec.w.alpha * tau;
    const double e = 1.0 / (1.0 + b);
    const double r = 1.0 + b * spec.w.c * e;

    Matrix sys = dense(*ops.implicit_op);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            sys(i, j) = tau * sys(i, j) + r * mass(i, j);

    std::vector<double> lifted(n);
    for (std::size_t j = 0; j < n; ++j) lifted[j] = s.u[j] + b * e * s.v[j];
    std::vector<double> rhs = matvec(mass, lifted);
    if (!f.empty()) {
        if (f.size() != n)
            throw std::invalid_argument("mass_matrix_step: source length mismatch");
        for (std::size_t j = 0; j < n; ++j) rhs[j] += tau * f[j];
    }

    State out;
    out.t = s.t + tau;
    out.u = lu_solve(std::move(sys), std::move(rhs));
    out.v = eliminate_v(s.v, out.u, tau, spec.w);
    return out;
}

}  // namespace kinlab
