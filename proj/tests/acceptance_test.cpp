// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include "bkm/errors.hpp"
#include "bkm/operators.hpp"
#include "bkm/pipeline.hpp"
#include "bkm/residuals.hpp"
#include "bkm/rho_map.hpp"
#include "bkm/scenario.hpp"
#include "bkm/stackel.hpp"
#include "bkm/synthesis.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

using namespace bkm;

namespace {

int failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("[%d/9] %-28s %s  (%s)\n", idx, name, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass)
        ++failures;
}

std::string fmt(double x) { return format_double(x); }

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

// ---- 1: exact-solution golden test on the full published grid ----
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario s = preset("kb-exact");  // 101 x 41, x in [-3,3], t in [-1,1]
    const RunResult res = run_scenario(s);
    double worst = 0.0;
    for (size_t it = 0; it < res.solution.t_nodes.size(); ++it)
        for (size_t jx = 0; jx < res.solution.x_nodes.size(); ++jx) {
            const auto cf = closed_form_kb(res.solution.t_nodes[it], res.solution.x_nodes[jx]);
            const VectorXd& u = res.solution.u_at(it, jx);
            worst = std::max({worst, std::abs(u(0) - cf.u1), std::abs(u(1) - cf.u2)});
        }
    const double secs = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    report(1, "kb-exact golden", worst <= 1e-6 && secs <= 60.0,
           "max err " + fmt(worst) + " <= 1e-6, " + fmt(secs) + " s <= 60 s");
}

// ---- 2: KdV regression with two grid halvings ----
void criterion_2() {
    const Poly c = Poly::from_roots({-1.0, 0.3, 0.7});
    const BkmSpec spec{1, Poly{1.0}, SpectralParam::infinity(), Chart::FirstCompanion};
    const ReductionSpec red{1, c};
    const PhasePoint start{ev({-0.3}), ev({0.0})};
    const FlowConfig cfg;

    auto residual = [&](double h) {
        const auto count = [&](double span) { return static_cast<size_t>(2 * span / h + 1.5); };
        const auto tn = linspace(-0.2, 0.2, count(0.2));
        const auto xn = linspace(-1.4, 1.4, count(1.4));
        GridFactory fac = [&](const std::vector<double>& t, const std::vector<double>& x,
                              SweepOrder ord) {
            return build_grid(start, t, x, spec.lambda, cfg, c, spec.m, ord);
        };
        const SolutionGrid sol = synthesize_infinite(fac, spec, red, tn, xn);
        // u_t = (1/2) u_xxx + (3/2) u u_x with 4th-order stencils
        const double dt = tn[1] - tn[0], dx = xn[1] - xn[0];
        double worst = 0.0;
        for (size_t it = 2; it + 2 < tn.size(); ++it)
            for (size_t jx = 3; jx + 3 < xn.size(); ++jx) {
                auto u = [&](int kt, int kx) {
                    return sol.u_at(it + static_cast<size_t>(kt),
                                     jx + static_cast<size_t>(kx))(0);
                };
                const double ut = (-u(2, 0) + 8 * u(1, 0) - 8 * u(-1, 0) + u(-2, 0)) / (12 * dt);
                const double ux = (-u(0, 2) + 8 * u(0, 1) - 8 * u(0, -1) + u(0, -2)) / (12 * dx);
                const double uxxx = (-u(0, 3) + 8 * u(0, 2) - 13 * u(0, 1) + 13 * u(0, -1) -
                                     8 * u(0, -2) + u(0, -3)) / (8 * dx * dx * dx);
                worst = std::max(worst, std::abs(ut - 0.5 * uxxx - 1.5 * u(0, 0) * ux));
            }
        return worst;
    };

    const double r0 = residual(0.040);
    const double r1 = residual(0.020);
    const double r2 = residual(0.010);
    const double ord1 = fit_order(r0, r1);
    const double ord2 = fit_order(r1, r2);
    const bool pass = std::abs(ord1 - 4.0) <= 0.5 && std::abs(ord2 - 4.0) <= 0.5 && r2 <= 1e-5;
    report(2, "KdV regression", pass,
           "orders " + fmt(ord1) + ", " + fmt(ord2) + " in 4 +- 0.5; finest " + fmt(r2) +
               " <= 1e-5");
}

// ---- 3: u = 2 w_1 reconstruction identity ----
void criterion_3() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    const BkmSpec spec{1, Poly{1.0}, SpectralParam::infinity(), Chart::FirstCompanion};
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::uniform_int_distribution<int> Nd(1, 4);
        const int N = Nd(rng);
        std::vector<double> cc(static_cast<size_t>(2 * N + 1) + 1);
        for (auto& x : cc)
            x = cd(rng);
        cc.back() = 1.0;
        cc[cc.size() - 2] = 0.0;  // c_1 = 0
        const Poly c(std::move(cc));
        VectorXd w(N);
        for (int i = 0; i < N; ++i)
            w(i) = cd(rng);
        const VectorXd u = map_r(w, spec, c);
        worst = std::max(worst, std::abs(u(0) - 2.0 * w(0)));
    }
    report(3, "u = 2 w1 identity", worst <= 1e-10, "max |u - 2 w1| " + fmt(worst) + " <= 1e-10");
}

// ---- 4: Poisson brackets and the Stackel relation ----
void criterion_4() {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    double worst_pb = 0.0, worst_st = 0.0;
    int used = 0;
    while (used < 100) {
        std::uniform_int_distribution<int> Nd(1, 4);
        const int N = Nd(rng);
        std::vector<double> cc(static_cast<size_t>(2 * N + 1) + 1);
        for (auto& x : cc)
            x = cd(rng);
        cc.back() = 1.0;
        const Poly c(std::move(cc));
        const Poly m{1.0, 0.3};
        VectorXd w(N), p(N);
        for (int i = 0; i < N; ++i) {
            w(i) = cd(rng);
            p(i) = cd(rng);
        }
        std::vector<PhaseGradient> g;
        try {
            g = grad_integral_coefficients({w, p}, c, m);
        } catch (const Error&) {
            continue;
        }
        ++used;
        auto norm = [](const PhaseGradient& x) {
            return std::sqrt(x.dw.squaredNorm() + x.dp.squaredNorm());
        };
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                const double scale =
                    1.0 + norm(g[static_cast<size_t>(i)]) * norm(g[static_cast<size_t>(j)]);
                worst_pb = std::max(worst_pb,
                                    std::abs(poisson_bracket(g[static_cast<size_t>(i)],
                                                             g[static_cast<size_t>(j)])) / scale);
            }
        // Stackel relation at a separated random point
        std::vector<double> q, pq;
        for (int i = 0; i < N; ++i) {
            q.push_back(-1.5 + 3.0 * i / std::max(N - 1, 1) + 0.2 * cd(rng));
            pq.push_back(cd(rng));
        }
        bool sep = true;
        for (size_t i = 1; i < q.size(); ++i)
            sep = sep && q[i] - q[i - 1] > 0.2;
        if (sep) {
            try {
                worst_st = std::max(worst_st, stackel_check(q, pq, c, m));
            } catch (const Error&) {
            }
        }
    }
    report(4, "integrability suite", worst_pb <= 1e-8 && worst_st <= 1e-8,
           "brackets " + fmt(worst_pb) + ", stackel " + fmt(worst_st) + " <= 1e-8");
}

// ---- 5: commuting flows ----
void criterion_5() {
    const Poly c = Poly::from_roots({-1.2, -0.9, -0.5, -0.1, 0.3, 0.6, 0.8});
    const FlowConfig cfg;
    const PhasePoint start{ev({0.4, -0.51, -0.054}), ev({0.0, 0.0, 0.0})};
    const auto rep_inf = commutativity_report(start, 1.0, 1.0, SpectralParam::infinity(),
                                              cfg, c, Poly{1.0});
    const auto rep_fin = commutativity_report(start, 1.0, 1.0, SpectralParam::finite(1.5),
                                              cfg, c, Poly{1.0});
    const double worst = std::max(rep_inf.max_abs, rep_fin.max_abs);
    report(5, "flow commutativity", worst <= 1e-6, "max discrepancy " + fmt(worst) + " <= 1e-6");
}

// ---- 6: level surface and conservation across every preset ----
void criterion_6() {
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    double worst_start = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> Nd(1, 4);
        const int N = Nd(rng);
        std::vector<double> cc(static_cast<size_t>(2 * N + 1) + 1);
        for (auto& x : cc)
            x = cd(rng);
        cc.back() = 1.0;
        const Poly c(std::move(cc));
        VectorXd w(N), p(N);
        for (int i = 0; i < N; ++i) {
            w(i) = cd(rng);
            p(i) = cd(rng);
        }
        const PhasePoint pt{w, p};
        const VectorXd before = integral_coefficients(pt, c, Poly{1.0}).values;
        const Poly cn = repair_c(c, Poly{1.0}, pt);
        const VectorXd after = integral_coefficients(pt, cn, Poly{1.0}).values;
        const double scale = std::max(1.0, before.cwiseAbs().maxCoeff());
        worst_start = std::max(worst_start, after.cwiseAbs().maxCoeff() / scale);
    }
    double worst_drift = 0.0;
    for (const auto& name : preset_names()) {
        Scenario s = preset(name);
        if (name == "kdv-2soliton" || name == "bkm-n2-loop") {
            s.x_axis.count = 151;  // keep the acceptance run quick; spans unchanged
        }
        const RunResult res = run_scenario(s);
        for (const auto& d : res.phase.diagnostics)
            worst_drift = std::max(worst_drift, d.integral_drift);
    }
    report(6, "level set + conservation", worst_start <= 1e-9 && worst_drift <= 1e-7,
           "start " + fmt(worst_start) + " <= 1e-9, drift " + fmt(worst_drift) + " <= 1e-7");
}

// ---- 7: dual-path reconstruction ----
void criterion_7() {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    double worst = 0.0;
    int used = 0;
    while (used < 500) {
        std::uniform_int_distribution<int> nd(1, 3), Nd(1, 4);
        const int n = nd(rng), N = Nd(rng);
        std::vector<double> roots;
        for (int i = 0; i < n; ++i)
            roots.push_back(-1.5 + 3.0 * i / std::max(n - 1, 1) + 0.2 * cd(rng));
        bool sep = true;
        for (size_t i = 1; i < roots.size(); ++i)
            sep = sep && roots[i] - roots[i - 1] > 0.5;
        if (!sep)
            continue;
        const Poly m = Poly::from_roots(roots);
        std::vector<double> cc(static_cast<size_t>(2 * N + n) + 1);
        for (auto& x : cc)
            x = cd(rng);
        cc.back() = 1.0;
        const Poly c(std::move(cc));
        VectorXd w(N);
        for (int i = 0; i < N; ++i)
            w(i) = cd(rng);
        try {
            const Poly a = rho_by_interpolation(c, roots, w);
            const Poly b = solve_rho(c, m, w).rho;
            for (int k = 0; k <= n; ++k)
                worst = std::max(worst, std::abs(a.coeff(k) - b.coeff(k)) /
                                            std::max(1.0, std::abs(a.coeff(k))));
        } catch (const Error&) {
            continue;
        }
        ++used;
    }
    report(7, "rho dual-path", worst <= 1e-9, "max rel disagreement " + fmt(worst) + " <= 1e-9");
}

// ---- 8: base-equation and solitonic residual convergence on kb-exact ----
void criterion_8() {
    const Poly c{0.0, 0.0, 1.0, 0.0, -2.0, 0.0, 1.0};
    const Poly m{1.0};
    const FlowConfig cfg;
    const PhasePoint start{ev({0.0, 0.0}), ev({0.0, 0.0})};
    auto make = [&](double h) {
        const auto count = [&](double span) { return static_cast<size_t>(2 * span / h + 1.5); };
        return build_grid(start, linspace(-0.3, 0.3, count(0.3)),
                          linspace(-0.8, 0.8, count(0.8)), SpectralParam::infinity(), cfg, c,
                          m);
    };
    const PhaseGrid coarse = make(0.04), fine = make(0.02);
    const std::vector<double> mus{-2.0, -0.5, 0.5, 2.0};
    const auto b0 = residual_base(coarse, mus, c, m);
    const auto b1 = residual_base(fine, mus, c, m);
    const auto s0 = residual_solitonic(coarse, 2.0, SpectralParam::infinity());
    const auto s1 = residual_solitonic(fine, 2.0, SpectralParam::infinity());
    const double ob = fit_order(b0.max_abs, b1.max_abs);
    const double os = fit_order(s0.max_abs, s1.max_abs);
    const bool pass = ob >= 2.0 && os >= 2.0 && b1.max_abs <= 1e-4 && s1.max_abs <= 1e-4;
    report(8, "base + solitonic residuals", pass,
           "orders " + fmt(ob) + ", " + fmt(os) + " >= 2; finest " + fmt(b1.max_abs) + ", " +
               fmt(s1.max_abs) + " <= 1e-4");
}

// ---- 9: soliton asymptotics ----
void criterion_9() {
    Scenario s = preset("kdv-2soliton");
    const RunResult res = run_scenario(s);
    const SolutionGrid& sol = res.solution;
    const size_t nt = sol.t_nodes.size(), nx = sol.x_nodes.size();
    const VectorXd ref = sol.u_at(nt / 2, nx - 1);  // u(0, x_max)
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        const size_t it = (nt - 1) * static_cast<size_t>(k) / 4;
        worst = std::max(worst, (sol.u_at(it, 0) - ref).lpNorm<Eigen::Infinity>());
        worst = std::max(worst, (sol.u_at(it, nx - 1) - ref).lpNorm<Eigen::Infinity>());
    }
    report(9, "soliton asymptotics", worst <= 1e-3,
           "max |u(t,+-15) - u_inf| " + fmt(worst) + " <= 1e-3");
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures)
        std::printf("%d criterion(s) FAILED\n", failures);
    else
        std::printf("all 9 criteria passed\n");
    return failures;
}
