#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "kinlab/stepper.hpp"
#include "kinlab/vonneumann.hpp"
#include "support/test_oracles.hpp"

using namespace kinlab;

TEST_CASE("build_pair reproduces the printed symbol entries") {
    SymbolParams p;
    p.b = 0.2;
    p.c = 5.0;
    p.dtau_h2 = 0.3;
    p.h = 1.0;

    // implicit diffusion at xi = 0: s_D = 0
    auto imp = build_pair(SchemeKind::ImplicitDiffusion, p, 0.0);
    CHECK(imp.H1.a == cplx(2.0));
    CHECK(imp.H1.b == cplx(-0.2 * std::sqrt(5.0)));
    CHECK(imp.H1.c == imp.H1.b);
    CHECK(imp.H1.d == cplx(1.2));
    CHECK(imp.H0.a == cplx(1.0));
    CHECK(imp.H0.b == cplx(0.0));
    CHECK(imp.H0.d == cplx(1.0));

    // explicit diffusion with s_D = 2 gives H0 = diag(-1, 1)
    SymbolParams pd = p;
    pd.dtau_h2 = 0.5;  // s_D(pi) = 2
    auto expl = build_pair(SchemeKind::ExplicitDiffusion, pd, std::numbers::pi);
    CHECK(expl.H0.a.real() == Catch::Approx(-1.0).margin(1e-15));
    CHECK(expl.H0.d == cplx(1.0));
    CHECK(expl.H1.a == cplx(2.0));  // no s_D in H1 for the explicit kind

    // b = 0 decouples: implicit diffusion H1 = diag(1 + s_D, 1)
    SymbolParams p0 = p;
    p0.b = 0.0;
    auto dec = build_pair(SchemeKind::ImplicitDiffusion, p0, std::numbers::pi);
    CHECK(dec.H1.b == cplx(0.0));
    CHECK(dec.H1.a.real() == Catch::Approx(1.0 + 4.0 * 0.3));
    CHECK(dec.H1.d == cplx(1.0));

    // IMEX: H1 carries s_D, H0 carries 1 - s_lambda
    SymbolParams pi2 = p;
    pi2.lam = 0.7;
    auto imex = build_pair(SchemeKind::ImexAdvectionDiffusion, pi2, 1.3);
    auto impd = build_pair(SchemeKind::ImplicitDiffusion, pi2, 1.3);
    auto eadv = build_pair(SchemeKind::ExplicitAdvection, pi2, 1.3);
    CHECK(imex.H1.a == impd.H1.a);
    CHECK(imex.H0.a == eadv.H0.a);
}

TEST_CASE("spectral_norm_2x2 matches an independent SVD oracle") {
    CHECK(spectral_norm_2x2(Mat2c::identity()) == Catch::Approx(1.0));
    CHECK(spectral_norm_2x2(Mat2c{0.5, 0.0, 0.0, 2.0}) == Catch::Approx(2.0));

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const Mat2c g = oracle::random_mat2c(rng);
        const double fast = spectral_norm_2x2(g);
        const double ref = oracle::svd_sigma_max(g);
        CHECK(fast == Catch::Approx(ref).epsilon(1e-12).margin(1e-12));
    }
}

TEST_CASE("scan verdicts reproduce the CFL table") {
    const double h = 0.02, tau = 0.05, alpha = 2.0, c = 5.0;

    // implicit kinds: stable for any tested coefficient
    for (double coeff : {1e-3, 0.1, 1.0, 25.0}) {
        const double d = coeff * h * h / tau;
        const double q = coeff * h / tau;
        CHECK(scan(SchemeKind::ImplicitDiffusion, d, 0.0, alpha, c, tau, h).stable);
        CHECK(scan(SchemeKind::ImplicitAdvection, 0.0, q, alpha, c, tau, h).stable);
    }

    // explicit diffusion flips at d tau/h^2 = 1/2
    auto ed_lo = scan(SchemeKind::ExplicitDiffusion, 0.49 * h * h / tau, 0.0, alpha,
                      c, tau, h);
    auto ed_hi = scan(SchemeKind::ExplicitDiffusion, 0.6 * h * h / tau, 0.0, alpha,
                      c, tau, h);
    CHECK(ed_lo.stable);
    CHECK_FALSE(ed_hi.stable);
    CHECK(std::abs(ed_hi.worst_xi) == Catch::Approx(std::numbers::pi / h));

    // explicit advection flips at lambda = 1
    auto ea_lo =
        scan(SchemeKind::ExplicitAdvection, 0.0, 0.99 * h / tau, alpha, c, tau, h);
    auto ea_hi =
        scan(SchemeKind::ExplicitAdvection, 0.0, 1.01 * h / tau, alpha, c, tau, h);
    CHECK(ea_lo.stable);
    CHECK_FALSE(ea_hi.stable);

    // amplification at xi = 0 is exactly 1 (conserved equilibrium mode),
    // so conditionally stable schemes report as marginal
    CHECK(ea_lo.marginal);
    CHECK(ed_lo.marginal);

    CHECK_THROWS_AS(scan(SchemeKind::ExplicitDiffusion, 1.0, 0.0, alpha, c, tau, h, 2),
                    std::invalid_argument);
}

TEST_CASE("table sweep: verdict grid over 20 x 20 parameters") {
    const double h = 0.01, tau = 0.1, alpha = 2.0, c = 0.7;
    for (int i = 0; i < 20; ++i) {
        const double nu = std::pow(10.0, -3.0 + (std::log10(2.0) + 3.0) * i / 19.0);
        const double d = nu * h * h / tau;
        CHECK(scan(SchemeKind::ImplicitDiffusion, d, 0.0, alpha, c, tau, h).stable);
        const bool ed_stable =
            scan(SchemeKind::ExplicitDiffusion, d, 0.0, alpha, c, tau, h).stable;
        CHECK(ed_stable == (nu <= 0.5 + 1e-12));

        const double lam = 2.0 * i / 19.0;
        const double q = lam * h / tau;
        CHECK(scan(SchemeKind::ImplicitAdvection, 0.0, q, alpha, c, tau, h).stable);
        const bool ea_stable =
            scan(SchemeKind::ExplicitAdvection, 0.0, q, alpha, c, tau, h).stable;
        CHECK(ea_stable == (lam <= 1.0 + 1e-12));
    }
}

TEST_CASE("implicit diffusion: true uniform bound is 1, attained only at xi = 0") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> dist(0.05, 4.0);
    const double h = 0.02;
    for (int trial = 0; trial < 20; ++trial) {
        const double tau = dist(rng), alpha = dist(rng), c = dist(rng), d = dist(rng);
        const auto v = scan(SchemeKind::ImplicitDiffusion, d, 0.0, alpha, c, tau, h);
        CHECK(v.sup_norm <= 1.0 + 1e-12);
        CHECK(v.sup_norm >= 1.0 - 1e-12);  // the xi = 0 neutral mode
        // away from xi = 0 the symbol contracts strictly
        SymbolParams p{alpha * tau, c, d * tau / (h * h), 0.0, h};
        const double mid = spectral_norm_2x2(
            build_pair(SchemeKind::ImplicitDiffusion, p, 0.5 * std::numbers::pi / h)
                .amplification());
        CHECK(mid < 1.0);
    }
}

TEST_CASE("implicit advection certificate and dense determinant oracle") {
    SymbolParams p0{0.0, 3.0, 0.0, 0.8, 1.0};
    const double at0 = implicit_advection_certificate(p0, 2.0);  // b = 0 limit
    CHECK(at0 == Catch::Approx(1.0 + 0.8 * (1.0 - std::cos(2.0))).epsilon(1e-14));

    SymbolParams p1{0.3, 2.0, 0.0, 1.1, 1.0};
    CHECK(implicit_advection_certificate(p1, 0.0) ==
          Catch::Approx(1.0 + 0.3 * 2.0 + 0.3).epsilon(1e-14));

    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> dist(0.01, 3.0);
    std::uniform_real_distribution<double> xid(-std::numbers::pi, std::numbers::pi);
    for (int trial = 0; trial < 1000; ++trial) {
        SymbolParams p{dist(rng), dist(rng), 0.0, dist(rng), 1.0};
        const double xi = xid(rng);
        const double cert = implicit_advection_certificate(p, xi);
        CHECK(cert >= 1.0 - 1e-12);

        // det(H1 H1*) = Y^2 gamma^2 + (X gamma - beta^2)^2
        const Mat2c h1 = build_pair(SchemeKind::ImplicitAdvection, p, xi).H1;
        const Mat2c k = h1 * h1.adjoint();
        const double detk = (k.a * k.d - k.b * k.c).real();
        const double y = p.s_advection(xi).imag();
        const double gamma = 1.0 + p.b;
        const double residual = detk - y * y * gamma * gamma;
        CHECK(cert * cert == Catch::Approx(residual).epsilon(1e-12).margin(1e-12));
    }
}

TEST_CASE("explicit H1 eigenvalues are {1, 1 + b(1+c)}") {
    auto [lo, hi] = explicit_h1_norm_check(0.2, 5.0);
    CHECK(lo == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(hi == Catch::Approx(2.2).epsilon(1e-13));

    auto [l2, h2] = explicit_h1_norm_check(1e-9, 3.0);
    CHECK(l2 == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(h2 == Catch::Approx(1.0).epsilon(1e-7));

    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> dist(0.01, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double b = dist(rng), c = dist(rng);
        auto [e1, e2] = explicit_h1_norm_check(b, c);
        SymbolParams p{b, c, 0.0, 0.0, 1.0};
        const Mat2c h1 = build_pair(SchemeKind::ExplicitDiffusion, p, 0.0).H1;
        Matrix m(2, 2);
        m(0, 0) = h1.a.real();
        m(0, 1) = h1.b.real();
        m(1, 0) = h1.c.real();
        m(1, 1) = h1.d.real();
        const auto eig = oracle::jacobi_eigenvalues(m);
        CHECK(e1 == Catch::Approx(eig[0]).epsilon(1e-12));
        CHECK(e2 == Catch::Approx(eig[1]).epsilon(1e-12));
        // hence ||H1^{-1}|| = 1
        CHECK(spectral_norm_2x2(h1.inverse()) == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("time-domain cross-validation of the symbol analysis") {
    // single Fourier mode on a periodic grid: per-step amplification of the
    // symmetrized state never exceeds sigma_max(G(xi_p))
    const std::size_t n = 64;
    Grid1D grid(0.0, 1.0, n, Boundary::Periodic);
    const double h = grid.h();
    std::mt19937_64 rng(36);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    struct Case {
        SchemeKind kind;
        double d, q, tau;
    };
    const WeightParams w{3.0, 1.5};
    const Case cases[] = {
        {SchemeKind::ImplicitDiffusion, 0.9, 0.0, 0.4},
        {SchemeKind::ExplicitDiffusion, 0.9, 0.0, 0.45 * h * h / 0.9},
        {SchemeKind::ImplicitAdvection, 0.0, 1.2, 0.4},
        {SchemeKind::ExplicitAdvection, 0.0, 1.2, 0.9 * h / 1.2},
        {SchemeKind::ImexAdvectionDiffusion, 0.9, 1.2, 0.9 * h / 1.2},
    };
    for (const Case& tc : cases) {
        for (std::size_t p : {std::size_t{1}, std::size_t{3}, n / 2}) {
            const double xi = 2.0 * std::numbers::pi * static_cast<double>(p);
            const double sigma =
                spectral_norm_2x2(build_pair(tc.kind,
                                             SymbolParams{w.alpha * tc.tau, w.c,
                                                          tc.d * tc.tau / (h * h),
                                                          tc.q * tc.tau / h, h},
                                             xi)
                                      .amplification());
            const double ph = phase(rng);
            State s0 = State::zero(n);
            for (std::size_t j = 0; j < n; ++j) {
                const double x = grid.node_x(j);
                s0.u[j] = std::cos(xi * x + ph);
                s0.v[j] = 0.7 * std::sin(xi * x + ph) - 0.2 * std::cos(xi * x + ph);
            }
            SchemeSpec spec{tc.kind, tc.d, tc.q, w, grid};
            auto [sf, trace] = run(spec, s0, tc.tau, 20);
            (void)sf;
            for (std::size_t k = 1; k < trace.records.size(); ++k) {
                const double prev = trace.records[k - 1].weighted;
                if (prev < 1e-250) break;
                CHECK(trace.records[k].weighted / prev <= sigma + 1e-10);
            }
        }
    }
}

TEST_CASE("method-of-lines consistency for Dirichlet explicit diffusion") {
    // eigenvalues of I - tau L_h lie in [-1, 1] iff 2 d tau / h^2 <= 1;
    // at the boundary the time-domain weighted norm is still monotone
    const std::size_t n = 31;
    Grid1D grid(0.0, 1.0, n, Boundary::Dirichlet);
    const double h = grid.h();
    const double d = 1.4;
    const double tau = 0.5 * h * h / d;  // 2 d tau / h^2 = 1
    for (std::size_t p = 1; p <= n; ++p) {
        const double lam_p =
            d / (h * h) * 2.0 *
            (1.0 - std::cos(static_cast<double>(p) * std::numbers::pi * h));
        CHECK(std::abs(1.0 - tau * lam_p) <= 1.0 + 1e-12);
    }
    std::mt19937_64 rng(37);
    SchemeSpec spec{SchemeKind::ExplicitDiffusion, d, 0.0, {2.5, 0.9}, grid};
    State s0(oracle::random_vector(rng, n), oracle::random_vector(rng, n));
    auto [sf, trace] = run(spec, s0, tau, 200);
    (void)sf;
    for (std::size_t k = 1; k < trace.records.size(); ++k)
        CHECK(trace.records[k].weighted <=
              trace.records[k - 1].weighted * (1.0 + 1e-12));
}
