#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kinlab/grid.hpp"
#include "kinlab/mat2.hpp"
#include "kinlab/operators.hpp"
#include "kinlab/stepper.hpp"
#include "kinlab/vonneumann.hpp"
#include "kinlab/volterra.hpp"

namespace kinlab {

// ---------------------------------------------------------------------------
// Initial conditions
// ---------------------------------------------------------------------------

inline double ic_box(double x) { return (x >= -1.0 && x <= 0.0) ? 1.0 : 0.0; }

inline double ic_bell(double x) { return std::exp(-(x - 0.5) * (x - 0.5) / 0.3); }

inline std::function<double(double)> ic_by_name(const std::string& name) {
    if (name == "box") return ic_box;
    if (name == "bell") return ic_bell;
    throw config_error("unknown initial condition: " + name);
}

// ---------------------------------------------------------------------------
// Experiment configuration (flat key = value files)
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    std::string experiment;
    double d = 0.0;
    double q = 1.0;
    double alpha = 2.0;
    double c = 0.1;
    std::vector<int> m_levels;
    int m_fine = 0;
    double lambda = 0.99;  // q tau / h for advection-driven runs
    double nu = 0.4;       // d tau / h^2 for diffusion-driven runs
    double T = 1.0;
    std::string ic = "box";
    double domain_a = 0.0;
    double domain_b = 1.0;
    double scalar_l = 0.1;  // scalar transport coefficient of the 0-d run
    double tau = 0.2;
    int n_steps = 200;
    std::vector<double> snapshot_times;
    std::vector<double> alphas;
    std::uint64_t seed = 42;
    std::string out = "out";
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': cannot parse '" + v +
                           "' as a number");
    }
}

inline int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': cannot parse '" + v +
                           "' as an integer");
    }
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& v, Parse parse) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw config_error("config key '" + key + "': empty list element");
        out.push_back(parse(key, item));
    }
    if (out.empty()) throw config_error("config key '" + key + "': empty list");
    return out;
}

}  // namespace detail

/// Parses a flat `key = value` file; '#' starts a comment. Unknown keys
/// are errors.
inline void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");

        if (key == "d") cfg.d = detail::parse_double(key, val);
        else if (key == "q") cfg.q = detail::parse_double(key, val);
        else if (key == "alpha") cfg.alpha = detail::parse_double(key, val);
        else if (key == "c") cfg.c = detail::parse_double(key, val);
        else if (key == "M") cfg.m_levels = detail::parse_list<int>(key, val, detail::parse_int);
        else if (key == "M_fine") cfg.m_fine = detail::parse_int(key, val);
        else if (key == "lambda") cfg.lambda = detail::parse_double(key, val);
        else if (key == "nu") cfg.nu = detail::parse_double(key, val);
        else if (key == "T") cfg.T = detail::parse_double(key, val);
        else if (key == "ic") cfg.ic = val;
        else if (key == "domain_a") cfg.domain_a = detail::parse_double(key, val);
        else if (key == "domain_b") cfg.domain_b = detail::parse_double(key, val);
        else if (key == "L") cfg.scalar_l = detail::parse_double(key, val);
        else if (key == "tau") cfg.tau = detail::parse_double(key, val);
        else if (key == "n_steps") cfg.n_steps = detail::parse_int(key, val);
        else if (key == "snapshot_times")
            cfg.snapshot_times = detail::parse_list<double>(key, val, detail::parse_double);
        else if (key == "alphas")
            cfg.alphas = detail::parse_list<double>(key, val, detail::parse_double);
        else if (key == "seed")
            cfg.seed = static_cast<std::uint64_t>(detail::parse_int(key, val));
        else if (key == "out") cfg.out = val;
        else throw config_error(path + ":" + std::to_string(lineno) +
                                ": unknown key '" + key + "'");
    }
}

// ---------------------------------------------------------------------------
// Error quantities and convergence orders
// ---------------------------------------------------------------------------

struct ErrorRow {
    double l2_u = 0.0, l2_v = 0.0, l1_u = 0.0, linf_u = 0.0;
    double e_cq = 0.0, e_qoi = 0.0;

    std::array<double, 6> as_array() const {
        return {l2_u, l2_v, l1_u, linf_u, e_cq, e_qoi};
    }
};

inline constexpr std::array<const char*, 6> kErrorColumns = {
    "L2_u", "L2_v", "L1_u", "Linf_u", "E_CQ", "E_QoI"};

/// Componentwise grid-norm errors of a coarse solution against reference
/// values sampled at the coarse nodes, plus the combined quantities
/// E_CQ = sqrt(||u-u_h||^2 + ||v-v_h||^2) and
/// E_QoI = sqrt(c ||u-u_h||^2 + ||v-v_h||^2).
inline ErrorRow error_quantities(const State& coarse, std::span<const double> ref_u,
                                 std::span<const double> ref_v, double c,
                                 const Grid1D& grid) {
    if (ref_u.size() != coarse.size() || ref_v.size() != coarse.size())
        throw std::invalid_argument("error_quantities: reference length mismatch");
    const std::size_t n = coarse.size();
    std::vector<double> du(n), dv(n);
    for (std::size_t j = 0; j < n; ++j) {
        du[j] = coarse.u[j] - ref_u[j];
        dv[j] = coarse.v[j] - ref_v[j];
    }
    ErrorRow row;
    row.l2_u = grid_norm_p(du, grid, 2.0);
    row.l2_v = grid_norm_p(dv, grid, 2.0);
    row.l1_u = grid_norm_p(du, grid, 1.0);
    row.linf_u = grid_norm_p(du, grid, std::numeric_limits<double>::infinity());
    row.e_cq = std::sqrt(row.l2_u * row.l2_u + row.l2_v * row.l2_v);
    row.e_qoi = std::sqrt(c * row.l2_u * row.l2_u + row.l2_v * row.l2_v);
    return row;
}

/// Observed orders between consecutive refinement levels:
/// order[i] = log(E_{i-1}/E_i) / log(M_i/M_{i-1}); absent at the first
/// level and wherever an error vanishes.
inline std::vector<std::optional<double>> convergence_orders(
    std::span<const double> errors, std::span<const int> ms) {
    if (errors.size() != ms.size())
        throw std::invalid_argument("convergence_orders: length mismatch");
    if (ms.size() < 2)
        throw std::invalid_argument("convergence_orders: need >= 2 levels");
    std::vector<std::optional<double>> orders(ms.size());
    for (std::size_t i = 1; i < ms.size(); ++i) {
        if (errors[i - 1] == 0.0 || errors[i] == 0.0) continue;
        orders[i] = std::log(errors[i - 1] / errors[i]) /
                    std::log(static_cast<double>(ms[i]) / static_cast<double>(ms[i - 1]));
    }
    return orders;
}

struct ConvergenceReport {
    std::vector<int> m_levels;
    std::vector<ErrorRow> rows;
    std::array<std::vector<std::optional<double>>, 6> orders;

    void compute_orders() {
        std::vector<double> col(rows.size());
        for (std::size_t k = 0; k < 6; ++k) {
            for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i].as_array()[k];
            orders[k] = convergence_orders(col, m_levels);
        }
    }
};

// ---------------------------------------------------------------------------
// Linear interpolation of fine references onto coarse nodes
// ---------------------------------------------------------------------------

/// Values on a uniform periodic grid x_j = a + j h, h = (b-a)/n.
inline double interp_periodic(std::span<const double> vals, double a, double b,
                              double x) {
    const std::size_t n = vals.size();
    const double len = b - a;
    const double h = len / static_cast<double>(n);
    double s = (x - a) / h;
    s -= std::floor(s / static_cast<double>(n)) * static_cast<double>(n);
    std::size_t j = static_cast<std::size_t>(s);
    if (j >= n) j = 0;
    const double frac = s - static_cast<double>(j);
    const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
    return (1.0 - frac) * vals[j] + frac * vals[jp];
}

/// Values at the interior nodes of a Dirichlet grid, zero at both ends.
inline double interp_dirichlet(std::span<const double> vals, double a, double b,
                               double x) {
    const std::size_t n = vals.size();
    const double h = (b - a) / static_cast<double>(n + 1);
    double s = (x - a) / h;  // node j sits at s = j + 1
    if (s <= 0.0 || s >= static_cast<double>(n + 1)) return 0.0;
    const std::size_t k = static_cast<std::size_t>(s);  // segment [k, k+1]
    const double frac = s - static_cast<double>(k);
    const double left = (k == 0) ? 0.0 : vals[k - 1];
    const double right = (k >= n) ? 0.0 : vals[k];
    return (1.0 - frac) * left + frac * right;
}

// ---------------------------------------------------------------------------
// Convergence experiments
// ---------------------------------------------------------------------------

namespace detail {

/// Largest step count <= ceil(T/tau_nominal) with tau = T/n exactly, so
/// every level lands on the same final time.
inline std::size_t steps_for(double T, double tau_nominal) {
    return static_cast<std::size_t>(std::ceil(T / tau_nominal - 1e-12));
}

inline State sample_ic(const Grid1D& grid, const std::function<double(double)>& f,
                       double c) {
    State s = State::zero(grid.n_nodes);
    for (std::size_t j = 0; j < grid.n_nodes; ++j) {
        s.u[j] = f(grid.node_x(j));
        s.v[j] = c * s.u[j];
    }
    return s;
}

}  // namespace detail

/// Upwind advection refinement study against a fine-grid reference run.
/// All levels (the reference included) use the same Courant number
/// lambda = q tau / h, with tau shaved to divide T exactly.
inline ConvergenceReport run_advection_convergence(const ExperimentConfig& cfg) {
    if (cfg.m_levels.size() < 2)
        throw config_error("advection-conv: need at least 2 refinement levels");
    if (cfg.m_fine <= *std::max_element(cfg.m_levels.begin(), cfg.m_levels.end()))
        throw config_error("advection-conv: M_fine must exceed every M");
    if (!(cfg.lambda > 0.0 && cfg.lambda <= 1.0))
        throw config_error("advection-conv: lambda must be in (0, 1]");
    const auto f0 = ic_by_name(cfg.ic);
    const WeightParams w{cfg.c, cfg.alpha};

    auto level_run = [&](int m) {
        Grid1D grid(cfg.domain_a, cfg.domain_b, static_cast<std::size_t>(m),
                    Boundary::Periodic);
        SchemeSpec spec{SchemeKind::ExplicitAdvection, 0.0, cfg.q, w, grid};
        const double tau_nom = cfg.lambda * grid.h() / cfg.q;
        const std::size_t n = detail::steps_for(cfg.T, tau_nom);
        State s = detail::sample_ic(grid, f0, cfg.c);
        s = integrate(spec, std::move(s), cfg.T / static_cast<double>(n), n);
        return std::pair<Grid1D, State>(grid, std::move(s));
    };

    const auto [fine_grid, fine] = level_run(cfg.m_fine);

    ConvergenceReport report;
    report.m_levels = cfg.m_levels;
    for (int m : cfg.m_levels) {
        const auto [grid, sol] = level_run(m);
        std::vector<double> ref_u(grid.n_nodes), ref_v(grid.n_nodes);
        for (std::size_t j = 0; j < grid.n_nodes; ++j) {
            const double x = grid.node_x(j);
            ref_u[j] = interp_periodic(fine.u, cfg.domain_a, cfg.domain_b, x);
            ref_v[j] = interp_periodic(fine.v, cfg.domain_a, cfg.domain_b, x);
        }
        report.rows.push_back(error_quantities(sol, ref_u, ref_v, cfg.c, grid));
    }
    report.compute_orders();
    return report;
}

/// Fully implicit diffusion refinement study with tau = nu h^2 / d. The
/// fine reference is re-run for every level with that level's tau, so the
/// measured gap isolates the O(h^2) spatial error.
inline ConvergenceReport run_diffusion_convergence(const ExperimentConfig& cfg) {
    if (cfg.m_levels.size() < 2)
        throw config_error("diffusion-conv: need at least 2 refinement levels");
    if (cfg.m_fine <= *std::max_element(cfg.m_levels.begin(), cfg.m_levels.end()))
        throw config_error("diffusion-conv: M_fine must exceed every M");
    if (!(cfg.d > 0.0)) throw config_error("diffusion-conv: d must be > 0");
    if (!(cfg.nu > 0.0)) throw config_error("diffusion-conv: nu must be > 0");
    const auto f0 = ic_by_name(cfg.ic);
    const WeightParams w{cfg.c, cfg.alpha};

    auto level_run = [&](int m, double tau, std::size_t n_steps) {
        Grid1D grid(cfg.domain_a, cfg.domain_b, static_cast<std::size_t>(m),
                    Boundary::Dirichlet);
        SchemeSpec spec{SchemeKind::ImplicitDiffusion, cfg.d, 0.0, w, grid};
        State s = detail::sample_ic(grid, f0, cfg.c);
        s = integrate(spec, std::move(s), tau, n_steps);
        return std::pair<Grid1D, State>(grid, std::move(s));
    };

    ConvergenceReport report;
    report.m_levels = cfg.m_levels;
    for (int m : cfg.m_levels) {
        Grid1D grid(cfg.domain_a, cfg.domain_b, static_cast<std::size_t>(m),
                    Boundary::Dirichlet);
        const double tau_nom = cfg.nu * grid.h() * grid.h() / cfg.d;
        const std::size_t n = detail::steps_for(cfg.T, tau_nom);
        const double tau = cfg.T / static_cast<double>(n);
        const auto [cg, sol] = level_run(m, tau, n);
        const auto [fg, fine] = level_run(cfg.m_fine, tau, n);
        std::vector<double> ref_u(cg.n_nodes), ref_v(cg.n_nodes);
        for (std::size_t j = 0; j < cg.n_nodes; ++j) {
            const double x = cg.node_x(j);
            ref_u[j] = interp_dirichlet(fine.u, cfg.domain_a, cfg.domain_b, x);
            ref_v[j] = interp_dirichlet(fine.v, cfg.domain_a, cfg.domain_b, x);
        }
        report.rows.push_back(error_quantities(sol, ref_u, ref_v, cfg.c, cg));
    }
    report.compute_orders();
    return report;
}

// ---------------------------------------------------------------------------
// 0-d instability report
// ---------------------------------------------------------------------------

/// Constants and norm traces of the scalar (one-node) fully implicit
/// iteration w^n = (I + tau B)^{-1} w^{n-1}, B = coupling + diag(L, 0).
struct ZerodReport {
    double op_norm = 0.0;      // ||(I + tau B)^{-1}||_2
    double eig_max = 0.0;      // largest eigenvalue modulus of the inverse
    double sym_op_norm = 0.0;  // ||(I + tau Bt)^{-1}||_2, symmetrized variables
    double gamma = 0.0;        // slope of the discrete asymptote v = gamma u
    NormTrace trace;
};

inline ZerodReport run_zerod_instability(const ExperimentConfig& cfg) {
    const WeightParams w{cfg.c, cfg.alpha};
    const CouplingBlock blk = coupling_blocks(w);
    const Mat2d transport{cfg.scalar_l, 0.0, 0.0, 0.0};
    const Mat2d m = Mat2d::identity() + (blk.raw + transport).scaled(cfg.tau);
    const Mat2d mt = Mat2d::identity() + (blk.symmetrized + transport).scaled(cfg.tau);
    const Mat2d minv = m.inverse();

    ZerodReport rep;
    rep.op_norm = spectral_norm(minv);
    const auto [e1, e2] = eigenvalues(minv);
    rep.eig_max = std::max(std::abs(e1), std::abs(e2));
    rep.sym_op_norm = spectral_norm(mt.inverse());

    // dominant eigenvector [u, gamma u] of the inverse iteration matrix
    const cplx lam_dom = std::abs(e2) >= std::abs(e1) ? e2 : e1;
    if (std::abs(lam_dom.imag()) > 1e-14 * std::abs(lam_dom))
        throw numeric_error("run_zerod_instability: complex dominant eigenvalue");
    if (std::abs(minv.b) > 1e-300)
        rep.gamma = (lam_dom.real() - minv.a) / minv.b;
    else
        rep.gamma = 0.0;

    // trace via the production stepper: 1-node Dirichlet grid with h = 1,
    // scalar transport L realized as 2 d / h^2 with d = L/2
    Grid1D grid = Grid1D::scalar();
    SchemeSpec spec{SchemeKind::ImplicitDiffusion, 0.5 * cfg.scalar_l, 0.0, w, grid};
    State s0({1.0}, {1.0});
    auto [final_state, trace] =
        run(spec, s0, cfg.tau, static_cast<std::size_t>(cfg.n_steps));
    (void)final_state;
    rep.trace = std::move(trace);
    return rep;
}

// ---------------------------------------------------------------------------
// Kinetic vs equilibrium comparison
// ---------------------------------------------------------------------------

struct KineticSnapshot {
    std::string model;  // "kinetic" or "equilibrium"
    double alpha = 0.0; // 0 for the equilibrium model
    double t = 0.0;
    std::vector<double> u, v;
};

struct KineticVsEqResult {
    std::vector<double> x;
    std::vector<KineticSnapshot> snapshots;
    std::vector<std::pair<double, double>> final_gaps;  // (alpha, ||u_kin - u_eq||)
};

namespace detail {

/// Scalar periodic upwind run used for the equilibrium limit model
/// (1+c) u_t + q u_x = 0, i.e. speed q/(1+c).
inline std::vector<double> scalar_upwind(std::vector<double> u, double speed,
                                         double h, double T, double lambda_cap) {
    if (T <= 0.0 || speed <= 0.0) return u;
    const double tau_nom = lambda_cap * h / speed;
    const std::size_t n_steps = steps_for(T, tau_nom);
    const double tau = T / static_cast<double>(n_steps);
    const double lam = speed * tau / h;
    const std::size_t n = u.size();
    std::vector<double> next(n);
    for (std::size_t k = 0; k < n_steps; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t jm = (j == 0) ? n - 1 : j - 1;
            next[j] = u[j] - lam * (u[j] - u[jm]);
        }
        u.swap(next);
    }
    return u;
}

}  // namespace detail

inline KineticVsEqResult run_kinetic_vs_equilibrium(const ExperimentConfig& cfg) {
    const int m = cfg.m_levels.empty() ? 400 : cfg.m_levels.front();
    Grid1D grid(cfg.domain_a, cfg.domain_b, static_cast<std::size_t>(m),
                Boundary::Periodic);
    const auto f0 = ic_by_name(cfg.ic);
    std::vector<double> times = cfg.snapshot_times;
    if (times.empty()) times = {0.25 * cfg.T, 0.5 * cfg.T, cfg.T};
    std::vector<double> alphas = cfg.alphas;
    if (alphas.empty()) alphas = {cfg.alpha};

    KineticVsEqResult res;
    res.x.resize(grid.n_nodes);
    for (std::size_t j = 0; j < grid.n_nodes; ++j) res.x[j] = grid.node_x(j);

    // kinetic runs, one per alpha
    std::vector<std::vector<double>> final_u;
    for (double alpha : alphas) {
        const WeightParams w{cfg.c, alpha};
        SchemeSpec spec{SchemeKind::ExplicitAdvection, 0.0, cfg.q, w, grid};
        State s = detail::sample_ic(grid, f0, cfg.c);
        double t_prev = 0.0;
        for (double t_snap : times) {
            const double span = t_snap - t_prev;
            if (span < 0.0)
                throw config_error("kinetic-vs-eq: snapshot times must increase");
            if (span > 0.0) {
                const double tau_nom = cfg.lambda * grid.h() / cfg.q;
                const std::size_t n = detail::steps_for(span, tau_nom);
                s = integrate(spec, std::move(s), span / static_cast<double>(n), n);
            }
            res.snapshots.push_back({"kinetic", alpha, t_snap, s.u, s.v});
            t_prev = t_snap;
        }
        final_u.push_back(s.u);
    }

    // equilibrium limit model at the same snapshot times
    const double speed = cfg.q / (1.0 + cfg.c);
    {
        std::vector<double> u(grid.n_nodes);
        for (std::size_t j = 0; j < grid.n_nodes; ++j) u[j] = f0(grid.node_x(j));
        double t_prev = 0.0;
        for (double t_snap : times) {
            u = detail::scalar_upwind(std::move(u), speed, grid.h(), t_snap - t_prev,
                                      cfg.lambda);
            std::vector<double> v(u.size());
            for (std::size_t j = 0; j < u.size(); ++j) v[j] = cfg.c * u[j];
            res.snapshots.push_back({"equilibrium", 0.0, t_snap, u, v});
            t_prev = t_snap;
        }
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            std::vector<double> gap(u.size());
            for (std::size_t j = 0; j < u.size(); ++j) gap[j] = final_u[i][j] - u[j];
            res.final_gaps.emplace_back(alphas[i], grid_norm_p(gap, grid, 2.0));
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Von Neumann parameter sweep
// ---------------------------------------------------------------------------

struct VnSweepRow {
    std::string scheme;
    std::string param;  // "dtau_h2" or "lambda"
    double value = 0.0;
    double sup_norm = 0.0;
    std::string verdict;
};

inline std::string verdict_name(const StabilityVerdict& v) {
    if (!v.stable) return "unstable";
    return v.marginal ? "marginal" : "stable";
}

/// Sweeps each scheme over its stability parameter: 20 log-spaced
/// dtau/h^2 in [1e-3, 2] for diffusion kinds, 20 uniform lambda in [0, 2]
/// for advection kinds; the IMEX scheme sweeps lambda at fixed nu.
inline std::vector<VnSweepRow> run_vn_sweep(const ExperimentConfig& cfg) {
    const double h = 0.01, tau = 0.1;
    std::vector<VnSweepRow> rows;
    auto push = [&](SchemeKind kind, const std::string& param, double value,
                    double d, double q) {
        const StabilityVerdict v = scan(kind, d, q, cfg.alpha, cfg.c, tau, h);
        rows.push_back({to_string(kind), param, value, v.sup_norm, verdict_name(v)});
    };

    std::vector<double> nus(20), lams(20);
    for (int i = 0; i < 20; ++i) {
        nus[i] = std::pow(10.0, -3.0 + (std::log10(2.0) + 3.0) * i / 19.0);
        lams[i] = 2.0 * i / 19.0;
    }
    for (double nu : nus) {
        const double d = nu * h * h / tau;
        push(SchemeKind::ImplicitDiffusion, "dtau_h2", nu, d, 0.0);
        push(SchemeKind::ExplicitDiffusion, "dtau_h2", nu, d, 0.0);
    }
    for (double lam : lams) {
        const double q = lam * h / tau;
        push(SchemeKind::ImplicitAdvection, "lambda", lam, 0.0, q);
        push(SchemeKind::ExplicitAdvection, "lambda", lam, 0.0, q);
        push(SchemeKind::ImexAdvectionDiffusion, "lambda", lam, cfg.nu * h * h / tau, q);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Volterra cross-check
// ---------------------------------------------------------------------------

struct VolterraGapRow {
    std::string problem;
    double tau = 0.0;
    double gap = 0.0;  // max-over-time sup gap, relative to sup |u|
};

/// Runs the coupled fully implicit scheme and the decoupled nonlocal
/// solver on the same problem and reports their relative gap per tau.
inline VolterraGapRow volterra_gap(const std::string& label, const SpatialOp& op,
                                   const SchemeSpec& spec,
                                   std::span<const double> u0,
                                   std::span<const double> v0, double tau,
                                   double T) {
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(T / tau));
    NonlocalTrajectory traj =
        solve_nonlocal(op, u0, v0, spec.w, tau, n_steps);

    detail::StepEngine engine(spec, tau);
    State s(std::vector<double>(u0.begin(), u0.end()),
            std::vector<double>(v0.begin(), v0.end()));
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        s = engine.advance(s, nullptr);
        for (std::size_t j = 0; j < s.size(); ++j) {
            worst = std::max(worst, std::abs(s.u[j] - traj.u[k][j]));
            scale = std::max(scale, std::abs(s.u[j]));
        }
    }
    return {label, tau, scale > 0.0 ? worst / scale : worst};
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

inline std::string csv_report(const ConvergenceReport& rep) {
    std::string out = "M";
    for (const char* col : kErrorColumns) {
        const bool combined = col[0] == 'E';  // E_CQ, E_QoI carry no _err suffix
        out += std::string(",") + col + (combined ? "" : "_err") + ",order_" + col;
    }
    out += "\n";
    for (std::size_t i = 0; i < rep.m_levels.size(); ++i) {
        out += std::to_string(rep.m_levels[i]);
        const auto errs = rep.rows[i].as_array();
        for (std::size_t k = 0; k < 6; ++k) {
            out += "," + fmt_num(errs[k]) + ",";
            if (rep.orders[k][i]) out += fmt_num(*rep.orders[k][i]);
        }
        out += "\n";
    }
    return out;
}

inline std::string csv_zerod_constants(const ZerodReport& rep) {
    std::string out = "op_norm,eig_max,sym_op_norm,gamma\n";
    out += fmt_num(rep.op_norm) + "," + fmt_num(rep.eig_max) + "," +
           fmt_num(rep.sym_op_norm) + "," + fmt_num(rep.gamma) + "\n";
    return out;
}

inline std::string csv_trace(const NormTrace& trace) {
    std::string out = "step,t,weighted_norm,euclid_norm,equilibrium_gap\n";
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        const TraceRecord& r = trace.records[k];
        out += std::to_string(k) + "," + fmt_num(r.t) + "," + fmt_num(r.weighted) +
               "," + fmt_num(r.euclid) + "," + fmt_num(r.equilibrium_gap) + "\n";
    }
    return out;
}

inline std::string csv_vn_sweep(const std::vector<VnSweepRow>& rows) {
    std::string out = "scheme,param,value,sup_norm,verdict\n";
    for (const VnSweepRow& r : rows)
        out += r.scheme + "," + r.param + "," + fmt_num(r.value) + "," +
               fmt_num(r.sup_norm) + "," + r.verdict + "\n";
    return out;
}

inline std::string csv_snapshots(const KineticVsEqResult& res) {
    std::string out = "model,alpha,t,x,u,v\n";
    for (const KineticSnapshot& s : res.snapshots)
        for (std::size_t j = 0; j < s.u.size(); ++j)
            out += s.model + "," + fmt_num(s.alpha) + "," + fmt_num(s.t) + "," +
                   fmt_num(res.x[j]) + "," + fmt_num(s.u[j]) + "," +
                   fmt_num(s.v[j]) + "\n";
    return out;
}

inline std::string csv_volterra(const std::vector<VolterraGapRow>& rows) {
    std::string out = "problem,tau,rel_gap\n";
    for (const VolterraGapRow& r : rows)
        out += r.problem + "," + fmt_num(r.tau) + "," + fmt_num(r.gap) + "\n";
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file: " + path);
    out << content;
    if (!out) throw config_error("failed writing output file: " + path);
}

}  // namespace kinlab
