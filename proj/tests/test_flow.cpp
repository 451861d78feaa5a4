#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bkm/errors.hpp"
#include "bkm/flow.hpp"
#include "bkm/residuals.hpp"

#include <cmath>
#include <random>

using namespace bkm;

namespace {

VectorXd ev(std::initializer_list<double> xs) {
    VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

std::vector<double> linspace(double lo, double hi, size_t n) {
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

// eigenvalue-at-roots start with zero momentum sits exactly on the level surface
PhasePoint start_from_roots(const std::vector<double>& eigen) {
    Poly w{1.0};
    for (double y : eigen)
        w = w * Poly{-y, 1.0};
    const int N = static_cast<int>(eigen.size());
    VectorXd wv(N);
    for (int k = 1; k <= N; ++k)
        wv(k - 1) = w.coeff(N - k);
    return {wv, VectorXd::Zero(N)};
}

} // namespace

TEST_CASE("equilibrium stays put") {
    // N=1, m=1, c=mu^3: gradient vanishes at the origin
    const FlowConfig cfg;
    const auto pts = flow_h({ev({0.0}), ev({0.0})}, {-2.0, -1.0, 0.0, 1.0, 2.0},
                            cfg, Poly::monomial(3), Poly{1.0});
    for (const auto& pt : pts) {
        CHECK(std::abs(pt.w(0)) <= 1e-12);
        CHECK(std::abs(pt.p(0)) <= 1e-12);
    }
}

TEST_CASE("energy is conserved over long spans") {
    const FlowConfig cfg;
    // bounded quasiperiodic systems with N = 1..4
    struct Case { std::vector<double> roots; std::vector<double> eigen; };
    const std::vector<Case> cases = {
        {{-1.0, 0.3, 0.7}, {0.3}},
        {{-1.1, -0.5, 0.1, 0.6, 0.9}, {-0.5, 0.6}},
        {{-1.2, -0.9, -0.5, -0.1, 0.3, 0.6, 0.8}, {-0.9, -0.1, 0.6}},
        {{-1.3, -1.0, -0.7, -0.35, 0.0, 0.3, 0.55, 0.8, 1.0}, {-1.0, -0.35, 0.3, 0.8}},
    };
    for (const auto& cs : cases) {
        const Poly c = Poly::from_roots(cs.roots);
        const Poly m{1.0};
        const PhasePoint start = start_from_roots(cs.eigen);
        const double h0 = hamiltonian_h(start, c, m);
        const auto pts = flow_h(start, {5.0, 12.0, 20.0}, cfg, c, m);
        for (const auto& pt : pts)
            CHECK(std::abs(hamiltonian_h(pt, c, m) - h0) <= 1e-8 * (1.0 + std::abs(h0)));
    }
}

TEST_CASE("flow_f conserves its generator and the whole family") {
    const FlowConfig cfg;
    const Poly c = Poly::from_roots({-1.1, -0.5, 0.1, 0.6, 0.9});
    const Poly m{1.0};
    const PhasePoint start = start_from_roots({-0.5, 0.6});
    const VectorXd a0 = integral_coefficients(start, c, m).values;
    for (SpectralParam lam : {SpectralParam::infinity(), SpectralParam::finite(1.4)}) {
        const auto pts = flow_f(start, lam, {-3.0, 2.0, 6.0}, cfg, c, m);
        for (const auto& pt : pts) {
            const VectorXd a = integral_coefficients(pt, c, m).values;
            CHECK((a - a0).cwiseAbs().maxCoeff() <= 1e-8);
        }
    }
}

TEST_CASE("reversibility") {
    const FlowConfig cfg;
    const Poly c = Poly::from_roots({-1.2, -0.9, -0.5, -0.1, 0.3, 0.6, 0.8});
    const Poly m{1.0};
    const PhasePoint start = start_from_roots({-0.9, -0.1, 0.6});
    const auto fwd = flow_h(start, {5.0}, cfg, c, m);
    const auto back = flow_h(fwd[0], {-5.0}, cfg, c, m);
    CHECK((back[0].w - start.w).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((back[0].p - start.p).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("both integrator methods agree") {
    FlowConfig cfg45;
    FlowConfig cfg78;
    cfg78.method = FlowConfig::Method::AdaptiveRK78;
    const Poly c = Poly::from_roots({-1.1, -0.5, 0.1, 0.6, 0.9});
    const Poly m{1.0};
    const PhasePoint start = start_from_roots({-0.5, 0.6});
    const auto a = flow_h(start, {3.0}, cfg45, c, m);
    const auto b = flow_h(start, {3.0}, cfg78, c, m);
    CHECK((a[0].w - b[0].w).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK((a[0].p - b[0].p).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("build_grid basics") {
    const FlowConfig cfg;
    const Poly c = Poly::from_roots({-1.1, -0.5, 0.1, 0.6, 0.9});
    const Poly m{1.0};
    const PhasePoint start = start_from_roots({-0.5, 0.6});
    const auto tn = linspace(-0.4, 0.4, 5);
    const auto xn = linspace(-1.0, 1.0, 9);
    const PhaseGrid grid = build_grid(start, tn, xn, SpectralParam::infinity(), cfg, c, m);

    // the t = 0 row is exactly the H-flow output
    const auto spine = flow_h(start, xn, cfg, c, m);
    const size_t i0 = 2;  // tn[2] == 0
    for (size_t j = 0; j < xn.size(); ++j) {
        CHECK(grid.at(i0, j).w == spine[j].w);
        CHECK(grid.at(i0, j).p == spine[j].p);
    }

    // integral coefficients stay on the level surface across the grid
    for (const auto& d : grid.diagnostics)
        CHECK(d.integral_drift <= 1e-8);
}

TEST_CASE("sweep orders commute") {
    const FlowConfig cfg;
    const Poly c = Poly::from_roots({-1.2, -0.9, -0.5, -0.1, 0.3, 0.6, 0.8});
    const Poly m{1.0};
    const PhasePoint start = start_from_roots({-0.9, -0.1, 0.6});
    const auto rep = commutativity_report(start, 1.0, 1.0, SpectralParam::infinity(),
                                          cfg, c, m);
    CHECK(rep.max_abs <= 1e-6);
}

TEST_CASE("off-level-set starts are rejected") {
    const FlowConfig cfg;
    const Poly c = Poly::from_roots({-1.0, 0.3, 0.7});
    const PhasePoint off{ev({-0.3}), ev({0.5})};  // nonzero momentum off the surface
    CHECK_THROWS_AS(build_grid(off, linspace(0.0, 0.1, 3), linspace(0.0, 0.1, 3),
                               SpectralParam::infinity(), cfg, c, Poly{1.0}),
                    OffLevelSet);
}

TEST_CASE("blow-up is detected") {
    FlowConfig cfg;
    cfg.blowup_norm = 1e4;
    // H = p^2/2 + w^3 runs away from (-2, 0)
    CHECK_THROWS_AS(flow_h({ev({-2.0}), ev({0.0})}, {50.0}, cfg, Poly::monomial(3), Poly{1.0}),
                    BlowUp);
}

TEST_CASE("singular potential matrix surfaces as SingularityHit") {
    const FlowConfig cfg;
    const VectorXd w = ev({-(1e-13 + 1.0), 1e-13});  // eigenvalue of M at 1e-13
    const PhasePoint start{w, ev({0.0, 0.0})};
    CHECK_THROWS_AS(flow_h(start, {0.5}, cfg, Poly::monomial(5), Poly{0.0, 1.0}),
                    SingularityHit);
}
