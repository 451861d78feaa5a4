#include "bkm/residuals.hpp"
#include "bkm/errors.hpp"
#include "bkm/fd.hpp"
#include "bkm/operators.hpp"
#include "bkm/rho_map.hpp"
#include "bkm/roots.hpp"

#include <algorithm>
#include <cmath>

namespace bkm {

namespace {

double uniform_spacing(const std::vector<double>& nodes, const char* axis) {
    if (nodes.size() < 7)
        throw GridTooCoarse(std::string("residual grids need at least 7 nodes per axis (") +
                            axis + ")");
    const double h = nodes[1] - nodes[0];
    for (size_t i = 1; i + 1 < nodes.size(); ++i)
        if (std::abs(nodes[i + 1] - nodes[i] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw ConfigError(std::string("residual grids must be uniform along ") + axis);
    return h;
}

struct Stats {
    double max_abs = 0.0;
    double sumsq = 0.0;
    size_t count = 0;
    void add(double r) {
        max_abs = std::max(max_abs, std::abs(r));
        sumsq += r * r;
        ++count;
    }
    void merge(const Stats& o) {
        max_abs = std::max(max_abs, o.max_abs);
        sumsq += o.sumsq;
        count += o.count;
    }
    void fill(ResidualReport& rep) const {
        rep.max_abs = max_abs;
        rep.rms = count ? std::sqrt(sumsq / static_cast<double>(count)) : 0.0;
        rep.sampled_nodes = count;
    }
};

// common scaffolding for the two BKM residuals
struct BkmFields {
    size_t nt, nx;
    double dt, dx;
    std::vector<MatrixXd> u_cols;  // u as n x 1 per node? stored flat below
};

} // namespace

double fit_order(double coarse, double fine) {
    if (coarse <= 0.0 || fine <= 0.0)
        return 0.0;
    return std::log2(coarse / fine);
}

BkmResiduals residual_bkm_finite(const SolutionGrid& sol, bool parallel) {
    if (sol.spec.lambda.infinite)
        throw ConfigError("residual_bkm_finite: solution has lambda = infinity");
    const double lambda = sol.spec.lambda.value;
    const double dt = uniform_spacing(sol.t_nodes, "t");
    const double dx = uniform_spacing(sol.x_nodes, "x");
    const size_t nt = sol.t_nodes.size(), nx = sol.x_nodes.size();
    const int n = sol.spec.n;
    const Poly& m = sol.spec.m;
    const double m_lam = m.eval(lambda);

    // lambda must stay away from the spectrum of L(u) on the whole grid
    for (size_t k = 0; k < nt * nx; ++k) {
        const double sig = sigma_poly(sol.u[k], sol.spec.chart).eval(lambda);
        if (std::abs(sig) < 1e-10 * (1.0 + std::pow(std::abs(lambda), n)))
            throw EigenvalueCollision("residual_bkm_finite: lambda meets an eigenvalue of L(u)");
    }

    Stats evo, con;
    std::exception_ptr failure = nullptr;
#pragma omp parallel if (parallel)
    {
        Stats evo_l, con_l;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t itt = fd::margin1; itt < static_cast<std::ptrdiff_t>(nt) - fd::margin1; ++itt) {
            try {
                const auto it = static_cast<size_t>(itt);
                for (size_t jx = fd::margin3; jx + fd::margin3 < nx; ++jx) {
                    auto uc = [&](int comp) {
                        return [&, comp](int k) { return sol.u_at(it, jx + static_cast<size_t>(k))(comp); };
                    };
                    auto ut = [&](int comp) {
                        return [&, comp](int k) { return sol.u_at(it + static_cast<size_t>(k), jx)(comp); };
                    };
                    auto qx = [&](int k) { return sol.q_at(it, jx + static_cast<size_t>(k)); };

                    const VectorXd& u = sol.u_at(it, jx);
                    const double q = sol.q_at(it, jx);
                    VectorXd u_t(n), u_x(n);
                    for (int cpt = 0; cpt < n; ++cpt) {
                        u_t(cpt) = fd::d1(ut(cpt), dt);
                        u_x(cpt) = fd::d1(uc(cpt), dx);
                    }
                    const double q_x = fd::d1(qx, dx);
                    const double q_xx = fd::d2(qx, dx);
                    const double q_xxx = fd::d3(qx, dx);

                    MatrixXd Lm = l_operator(u, sol.spec.chart);
                    Lm.diagonal().array() -= lambda;
                    Eigen::PartialPivLU<MatrixXd> lu(Lm);
                    const VectorXd zv = lu.solve(zeta(u, m, sol.spec.chart));
                    const VectorXd uxv = lu.solve(u_x);
                    const VectorXd r = u_t - q_xxx * zv - q * uxv;
                    for (int cpt = 0; cpt < n; ++cpt)
                        evo_l.add(r(cpt));

                    const double sig = sigma_poly(u, sol.spec.chart).eval(lambda);
                    con_l.add(1.0 + m_lam * (q_xx * q - 0.5 * q_x * q_x) - sig * q * q);
                }
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
#pragma omp critical
        {
            evo.merge(evo_l);
            con.merge(con_l);
        }
    }
    if (failure)
        std::rethrow_exception(failure);

    BkmResiduals out;
    out.evolution.name = "bkm_finite_evolution";
    out.constraint.name = "bkm_finite_constraint";
    evo.fill(out.evolution);
    con.fill(out.constraint);
    out.evolution.dt = out.constraint.dt = dt;
    out.evolution.dx = out.constraint.dx = dx;
    return out;
}

BkmResiduals residual_bkm_infinite(const SolutionGrid& sol, bool parallel) {
    if (!sol.spec.lambda.infinite)
        throw ConfigError("residual_bkm_infinite: solution has finite lambda");
    const double dt = uniform_spacing(sol.t_nodes, "t");
    const double dx = uniform_spacing(sol.x_nodes, "x");
    const size_t nt = sol.t_nodes.size(), nx = sol.x_nodes.size();
    const int n = sol.spec.n;
    const Poly& m = sol.spec.m;
    const double m_top = m.coeff(n);
    const double tr_sign = (sol.spec.chart == Chart::FirstCompanion) ? 1.0 : -1.0;

    Stats evo, con;
    std::exception_ptr failure = nullptr;
#pragma omp parallel if (parallel)
    {
        Stats evo_l, con_l;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t itt = fd::margin1; itt < static_cast<std::ptrdiff_t>(nt) - fd::margin1; ++itt) {
            try {
                const auto it = static_cast<size_t>(itt);
                for (size_t jx = fd::margin3; jx + fd::margin3 < nx; ++jx) {
                    auto uc = [&](int comp) {
                        return [&, comp](int k) { return sol.u_at(it, jx + static_cast<size_t>(k))(comp); };
                    };
                    auto ut = [&](int comp) {
                        return [&, comp](int k) { return sol.u_at(it + static_cast<size_t>(k), jx)(comp); };
                    };
                    auto qx = [&](int k) { return sol.q_at(it, jx + static_cast<size_t>(k)); };

                    const VectorXd& u = sol.u_at(it, jx);
                    const double q = sol.q_at(it, jx);
                    VectorXd u_t(n), u_x(n);
                    for (int cpt = 0; cpt < n; ++cpt) {
                        u_t(cpt) = fd::d1(ut(cpt), dt);
                        u_x(cpt) = fd::d1(uc(cpt), dx);
                    }
                    const double q_xxx = fd::d3(qx, dx);

                    const MatrixXd Lm = l_operator(u, sol.spec.chart);
                    const VectorXd r =
                        u_t - q_xxx * zeta(u, m, sol.spec.chart) - (Lm * u_x + q * u_x);
                    for (int cpt = 0; cpt < n; ++cpt)
                        evo_l.add(r(cpt));

                    const double tr_l = tr_sign * u(0);
                    if (m_top == 0.0) {
                        con_l.add(q - 0.5 * tr_l);
                    } else {
                        const double q_xx = fd::d2(qx, dx);
                        con_l.add(2.0 * q - m_top * q_xx - tr_l);
                    }
                }
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
#pragma omp critical
        {
            evo.merge(evo_l);
            con.merge(con_l);
        }
    }
    if (failure)
        std::rethrow_exception(failure);

    BkmResiduals out;
    out.evolution.name = "bkm_infinite_evolution";
    out.constraint.name = "bkm_infinite_constraint";
    evo.fill(out.evolution);
    con.fill(out.constraint);
    out.evolution.dt = out.constraint.dt = dt;
    out.evolution.dx = out.constraint.dx = dx;
    return out;
}

ResidualReport residual_base(const PhaseGrid& grid, const std::vector<double>& mu_samples,
                             const Poly& c_new, const Poly& m, bool parallel) {
    const double dx = uniform_spacing(grid.x_nodes, "x");
    const size_t nt = grid.t_nodes.size(), nx = grid.x_nodes.size();

    Stats st;
    std::exception_ptr failure = nullptr;
#pragma omp parallel if (parallel)
    {
        Stats local;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t itt = 0; itt < static_cast<std::ptrdiff_t>(nt); ++itt) {
            try {
                const auto it = static_cast<size_t>(itt);
                for (size_t jx = fd::margin1; jx + fd::margin1 < nx; ++jx) {
                    const RhoResult rr = solve_rho(c_new, m, grid.at(it, jx).w);
                    for (double mu : mu_samples) {
                        auto W = [&](int k) {
                            return char_poly_w(grid.at(it, jx + static_cast<size_t>(k)).w).eval(mu);
                        };
                        const double Wv = W(0);
                        const double Wx = fd::d1(W, dx);
                        const double Wxx = fd::d2(W, dx);
                        local.add(m.eval(mu) * (Wxx * Wv - 0.5 * Wx * Wx) -
                                  rr.rho.eval(mu) * Wv * Wv + c_new.eval(mu));
                    }
                }
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
#pragma omp critical
        st.merge(local);
    }
    if (failure)
        std::rethrow_exception(failure);

    ResidualReport rep;
    rep.name = "base_equation";
    st.fill(rep);
    rep.dx = dx;
    rep.dt = grid.t_nodes.size() > 1 ? grid.t_nodes[1] - grid.t_nodes[0] : 0.0;
    return rep;
}

ResidualReport residual_solitonic(const PhaseGrid& grid, double mu, SpectralParam lambda,
                                  bool parallel) {
    if (!lambda.infinite && std::abs(mu - lambda.value) < 1e-12)
        throw MuEqualsLambda("residual_solitonic: mu equals lambda");
    const double dt = uniform_spacing(grid.t_nodes, "t");
    const double dx = uniform_spacing(grid.x_nodes, "x");
    const size_t nt = grid.t_nodes.size(), nx = grid.x_nodes.size();

    Stats st;
#pragma omp parallel if (parallel)
    {
        Stats local;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t itt = fd::margin1; itt < static_cast<std::ptrdiff_t>(nt) - fd::margin1; ++itt) {
            const auto it = static_cast<size_t>(itt);
            for (size_t jx = fd::margin1; jx + fd::margin1 < nx; ++jx) {
                auto Wx_ = [&](int k) {
                    return char_poly_w(grid.at(it, jx + static_cast<size_t>(k)).w).eval(mu);
                };
                auto Wt_ = [&](int k) {
                    return char_poly_w(grid.at(it + static_cast<size_t>(k), jx).w).eval(mu);
                };
                const double W = Wx_(0);
                const double Wt = fd::d1(Wt_, dt);
                const double Wx = fd::d1(Wx_, dx);
                double rhs;
                if (lambda.infinite) {
                    const double w1 = grid.at(it, jx).w(0);
                    auto w1x_ = [&](int k) { return grid.at(it, jx + static_cast<size_t>(k)).w(0); };
                    rhs = mu * Wx + Wx * w1 - W * fd::d1(w1x_, dx);
                } else {
                    auto WL_ = [&](int k) {
                        return char_poly_w(grid.at(it, jx + static_cast<size_t>(k)).w).eval(lambda.value);
                    };
                    rhs = (Wx * WL_(0) - W * fd::d1(WL_, dx)) / (mu - lambda.value);
                }
                local.add(Wt - rhs);
            }
        }
#pragma omp critical
        st.merge(local);
    }

    ResidualReport rep;
    rep.name = "solitonic";
    st.fill(rep);
    rep.dt = dt;
    rep.dx = dx;
    return rep;
}

ResidualReport separation_oracle(const PhaseGrid& grid, const Poly& c_new, const Poly& m) {
    const double dx = uniform_spacing(grid.x_nodes, "x");
    const size_t nt = grid.t_nodes.size(), nx = grid.x_nodes.size();
    const int N = grid.points.empty() ? 0 : grid.points.front().dim();

    Stats st;
    size_t skipped = 0, candidates = 0;
    for (size_t it = 0; it < nt; ++it) {
        // eigenvalues per node with branch tracking along the row
        std::vector<std::optional<std::vector<double>>> ys(nx);
        const std::vector<double>* ref = nullptr;
        for (size_t jx = 0; jx < nx; ++jx) {
            std::vector<double> wv(grid.at(it, jx).w.data(),
                                   grid.at(it, jx).w.data() + N);
            ys[jx] = tracked_real_eigenvalues(wv, 1e-6, ref);
            if (ys[jx])
                ref = &*ys[jx];
        }
        for (size_t jx = fd::margin1; jx + fd::margin1 < nx; ++jx) {
            ++candidates;
            bool ok = true;
            for (int k = -fd::margin1; k <= fd::margin1; ++k)
                ok = ok && ys[jx + static_cast<size_t>(k)].has_value();
            if (!ok) {
                ++skipped;
                continue;
            }
            const auto& y = *ys[jx];
            bool bad_m = false;
            for (int alpha = 0; alpha < N; ++alpha)
                if (std::abs(m.eval(y[static_cast<size_t>(alpha)])) < 1e-12)
                    bad_m = true;
            if (bad_m) {
                ++skipped;
                continue;
            }
            for (int alpha = 0; alpha < N; ++alpha) {
                auto ya = [&](int k) { return (*ys[jx + static_cast<size_t>(k)])[static_cast<size_t>(alpha)]; };
                const double ydot = fd::d1(ya, dx);
                double prod = 1.0;
                for (int i = 0; i < N; ++i)
                    if (i != alpha)
                        prod *= y[static_cast<size_t>(alpha)] - y[static_cast<size_t>(i)];
                const double ya0 = y[static_cast<size_t>(alpha)];
                st.add(0.5 * (ydot * prod) * (ydot * prod) - c_new.eval(ya0) / m.eval(ya0));
            }
        }
    }

    ResidualReport rep;
    rep.name = "separation";
    st.fill(rep);
    rep.dt = grid.t_nodes.size() > 1 ? grid.t_nodes[1] - grid.t_nodes[0] : 0.0;
    rep.dx = dx;
    rep.skipped_nodes = skipped;
    rep.inconclusive = candidates > 0 && skipped * 5 > candidates;  // > 20%
    return rep;
}

ResidualReport conservation_report(const PhaseGrid& grid, const Poly& c_new, const Poly& m) {
    Stats st;
    for (const auto& pt : grid.points)
        st.add(integral_coefficients(pt, c_new, m).values.cwiseAbs().maxCoeff());
    ResidualReport rep;
    rep.name = "conservation";
    st.fill(rep);
    rep.dt = grid.t_nodes.size() > 1 ? grid.t_nodes[1] - grid.t_nodes[0] : 0.0;
    rep.dx = grid.x_nodes.size() > 1 ? grid.x_nodes[1] - grid.x_nodes[0] : 0.0;
    return rep;
}

ResidualReport commutativity_report(const PhasePoint& start, double t_span, double x_span,
                                    SpectralParam lambda, const FlowConfig& cfg,
                                    const Poly& c_new, const Poly& m) {
    auto linspace = [](double lo, double hi, size_t count) {
        std::vector<double> v(count);
        for (size_t i = 0; i < count; ++i)
            v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        return v;
    };
    const auto tn = linspace(-t_span, t_span, 5);
    const auto xn = linspace(-x_span, x_span, 5);
    const PhaseGrid a = build_grid(start, tn, xn, lambda, cfg, c_new, m, SweepOrder::XThenT);
    const PhaseGrid b = build_grid(start, tn, xn, lambda, cfg, c_new, m, SweepOrder::TThenX);

    Stats st;
    for (size_t k = 0; k < a.points.size(); ++k) {
        st.add((a.points[k].w - b.points[k].w).lpNorm<Eigen::Infinity>());
        st.add((a.points[k].p - b.points[k].p).lpNorm<Eigen::Infinity>());
    }
    ResidualReport rep;
    rep.name = "commutativity";
    st.fill(rep);
    rep.dt = tn[1] - tn[0];
    rep.dx = xn[1] - xn[0];
    return rep;
}

} // namespace bkm
