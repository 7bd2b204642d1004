#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kinlab/grid.hpp"
#include "kinlab/mat2.hpp"
#include "kinlab/scheme.hpp"

namespace kinlab {

/// Dimensionless symbol ingredients of the one-step schemes at Fourier
/// frequency xi in [-pi/h, pi/h]:
///   s_D(xi)      = 2 (d tau/h^2) (1 - cos(xi h))        (real, >= 0)
///   s_lambda(xi) = (q tau/h) (1 - exp(-i xi h))          (complex)
struct SymbolParams {
    double b = 0.0;        // alpha * tau
    double c = 1.0;        // partition coefficient
    double dtau_h2 = 0.0;  // d tau / h^2
    double lam = 0.0;      // q tau / h
    double h = 1.0;        // grid spacing

    double s_diffusion(double xi) const {
        return 2.0 * dtau_h2 * (1.0 - std::cos(xi * h));
    }
    cplx s_advection(double xi) const {
        return lam * (cplx(1.0) - std::exp(cplx(0.0, -xi * h)));
    }
};

/// The 2x2 Fourier-symbol pair of a scheme in the symmetrized variables:
/// H1 w^n = H0 w^{n-1}, amplification matrix G = H1^{-1} H0.
struct AmplificationPair {
    Mat2c H1, H0;

    Mat2c amplification() const { return H1.inverse() * H0; }
};

/// Assembles the symbol pair for one scheme kind at frequency xi.
/// The coupling contributes the symmetric block [[bc, -b sqrt(c)],
/// [-b sqrt(c), b]] to H1; an implicit transport term adds its symbol to
/// the (1,1) entry of H1, an explicit one puts 1 - symbol into H0.
inline AmplificationPair build_pair(SchemeKind kind, const SymbolParams& p, double xi) {
    const double off = -p.b * std::sqrt(p.c);
    const cplx d11 = 1.0 + p.b * p.c;
    const cplx d22 = 1.0 + p.b;
    AmplificationPair pair;
    pair.H0 = Mat2c::identity();
    pair.H1 = Mat2c{d11, off, off, d22};
    switch (kind) {
        case SchemeKind::ImplicitDiffusion:
            pair.H1.a += p.s_diffusion(xi);
            break;
        case SchemeKind::ExplicitDiffusion:
            pair.H0.a = 1.0 - p.s_diffusion(xi);
            break;
        case SchemeKind::ImplicitAdvection:
            pair.H1.a += p.s_advection(xi);
            break;
        case SchemeKind::ExplicitAdvection:
            pair.H0.a = 1.0 - p.s_advection(xi);
            break;
        case SchemeKind::ImexAdvectionDiffusion:
            pair.H1.a += p.s_diffusion(xi);
            pair.H0.a = 1.0 - p.s_advection(xi);
            break;
    }
    if (std::abs(pair.H1.det()) == 0.0)
        throw numeric_error("build_pair: singular H1 symbol");
    return pair;
}

struct StabilityVerdict {
    SchemeKind kind = SchemeKind::ImplicitDiffusion;
    double sup_norm = 0.0;
    double worst_xi = 0.0;
    bool stable = false;    // sup ||G|| <= 1 + 1e-10
    bool marginal = false;  // sup ||G|| within 1e-10 of 1
};

inline constexpr double kStabilityTol = 1e-10;

/// Scans ||G(xi)|| over n_samples uniform frequencies in [-pi/h, pi/h]
/// (endpoints included; xi = 0 is appended if the grid misses it).
inline StabilityVerdict scan(SchemeKind kind, double d, double q, double alpha,
                             double c, double tau, double h,
                             std::size_t n_samples = 1025) {
    if (n_samples < 3) throw std::invalid_argument("scan: n_samples must be >= 3");
    SymbolParams p;
    p.b = alpha * tau;
    p.c = c;
    p.dtau_h2 = d * tau / (h * h);
    p.lam = q * tau / h;
    p.h = h;

    const double xi_max = std::numbers::pi / h;
    StabilityVerdict v;
    v.kind = kind;
    auto probe = [&](double xi) {
        const double g = spectral_norm_2x2(build_pair(kind, p, xi).amplification());
        if (g > v.sup_norm) {
            v.sup_norm = g;
            v.worst_xi = xi;
        }
    };
    bool saw_zero = false;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double xi = -xi_max + 2.0 * xi_max * static_cast<double>(i) /
                                        static_cast<double>(n_samples - 1);
        probe(xi);
        if (xi == 0.0) saw_zero = true;
    }
    if (!saw_zero) probe(0.0);

    v.stable = v.sup_norm <= 1.0 + kStabilityTol;
    v.marginal = std::abs(v.sup_norm - 1.0) <= kStabilityTol;
    return v;
}

/// Determinant certificate for the implicit advection symbol: with
/// X = 1 + bc + Re(s_lambda), gamma = 1 + b, beta = b sqrt(c), returns
/// X gamma - beta^2. A value >= 1 gives det(H1 H1*) >= 1 and hence
/// ||H1|| >= 1 (unconditional stability of the scheme).
inline double implicit_advection_certificate(const SymbolParams& p, double xi) {
    if (p.lam < 0.0)
        throw std::invalid_argument("implicit_advection_certificate: lam must be >= 0");
    const double x = 1.0 + p.b * p.c + p.s_advection(xi).real();
    const double gamma = 1.0 + p.b;
    const double beta = p.b * std::sqrt(p.c);
    return x * gamma - beta * beta;
}

/// Eigenvalues of the explicit-scheme H1 (no transport symbol). One is
/// exactly 1 and the other 1 + b(1+c), so ||H1^{-1}|| = 1.
inline std::pair<double, double> explicit_h1_norm_check(double b, double c) {
    if (!(b > 0.0) || !(c > 0.0))
        throw std::invalid_argument("explicit_h1_norm_check: requires b, c > 0");
    SymbolParams p;
    p.b = b;
    p.c = c;
    const Mat2c h1 = build_pair(SchemeKind::ExplicitDiffusion, p, 0.0).H1;
    auto [lo, hi] = hermitian_eigenvalues(h1);
    const double expect_hi = 1.0 + b * (1.0 + c);
    const double scale = std::max(1.0, expect_hi);
    if (std::abs(lo - 1.0) > 1e-12 * scale || std::abs(hi - expect_hi) > 1e-12 * scale)
        throw numeric_error("explicit_h1_norm_check: eigenvalue identity violated");
    return {lo, hi};
}

}  // namespace kinlab
