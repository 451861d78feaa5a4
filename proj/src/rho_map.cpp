#include "bkm/rho_map.hpp"
#include "bkm/errors.hpp"
#include "bkm/operators.hpp"

#include <cmath>
#include <string>

namespace bkm {

namespace {

struct RhoSystem {
    MatrixXd A;
    VectorXd rhs;
    int n;
};

// Coefficient-matching system for rho(mu,w) w^2(mu) - m(mu) Q(mu,w) = c(mu);
// unknowns rho_1..rho_n (powers n-1..0) then q_1..q_2N (powers 2N-1..0),
// equation j matches the mu^j coefficient.
RhoSystem assemble(const Poly& c, const Poly& m, const VectorXd& w) {
    const int N = static_cast<int>(w.size());
    const int n = c.degree() - 2 * N;
    if (n < 1)
        throw ConfigError("solve_rho: deg c must be 2N+n with n >= 1");
    if (m.is_zero())
        throw ConfigError("solve_rho: m must not be the zero polynomial");

    const Poly wp = char_poly_w(w);
    const Poly w2 = wp * wp;
    const int dim = 2 * N + n;
    RhoSystem sys{MatrixXd::Zero(dim, dim), VectorXd(dim), n};
    for (int j = 0; j < dim; ++j) {
        for (int k = 1; k <= n; ++k) {
            const int idx = j - (n - k);
            if (idx >= 0 && idx <= w2.degree())
                sys.A(j, k - 1) += w2.coeff(idx);
        }
        for (int l = 1; l <= 2 * N; ++l) {
            const int idx = j - (2 * N - l);
            if (idx >= 0 && idx <= m.degree())
                sys.A(j, n + l - 1) -= m.coeff(idx);
        }
        double r = c.coeff(j);
        const int idx = j - n;
        if (idx >= 0 && idx <= w2.degree())
            r -= w2.coeff(idx);  // known monic mu^n * w^2 part
        sys.rhs(j) = r;
    }
    return sys;
}

} // namespace

double rho_condition(const Poly& c, const Poly& m, const VectorXd& w) {
    const RhoSystem sys = assemble(c, m, w);
    Eigen::PartialPivLU<MatrixXd> lu(sys.A);
    const double rc = lu.rcond();
    return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

RhoResult solve_rho(const Poly& c, const Poly& m, const VectorXd& w) {
    const int N = static_cast<int>(w.size());
    const RhoSystem sys = assemble(c, m, w);
    const int n = sys.n;

    Eigen::PartialPivLU<MatrixXd> lu(sys.A);
    const double rc = lu.rcond();
    const double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!(cond < 1e12))
        throw SharedRoot("solve_rho: system condition " + std::to_string(cond) +
                         " - eigenvalue of M near a root of m");
    const VectorXd sol = lu.solve(sys.rhs);

    std::vector<double> rc_(static_cast<size_t>(n) + 1, 0.0);
    rc_.back() = 1.0;
    for (int k = 1; k <= n; ++k)
        rc_[static_cast<size_t>(n - k)] = sol(k - 1);
    std::vector<double> qc(static_cast<size_t>(2 * N), 0.0);
    for (int l = 1; l <= 2 * N; ++l)
        qc[static_cast<size_t>(2 * N - l)] = sol(n + l - 1);
    RhoResult out{Poly(std::move(rc_)), Poly(std::move(qc)), cond};

    // defining identity re-checked coefficientwise after every solve
    const Poly wp = char_poly_w(w);
    const Poly resid = out.rho * (wp * wp) - m * out.q - c;
    double cscale = 0.0;
    for (double ci : c.coeffs())
        cscale = std::max(cscale, std::abs(ci));
    for (double ri : resid.coeffs())
        if (std::abs(ri) > 1e-9 * std::max(1.0, cscale))
            throw SharedRoot("solve_rho: residual check failed, ill-conditioned reconstruction");
    return out;
}

Poly rho_by_interpolation(const Poly& c, const std::vector<double>& m_roots,
                          const VectorXd& w) {
    const int n = static_cast<int>(m_roots.size());
    const int N = static_cast<int>(w.size());
    const Poly wp = char_poly_w(w);
    std::vector<std::pair<double, double>> pts;
    for (double lam : m_roots) {
        const double wl = wp.eval(lam);
        if (std::abs(wl) < 1e-10 * (1.0 + std::pow(std::abs(lam), N)))
            throw EvaluationAtEigenvalue("rho_by_interpolation: w(lambda_i) vanishes at a root of m");
        pts.emplace_back(lam, c.eval(lam) / (wl * wl) - std::pow(lam, n));
    }
    return Poly::monomial(n) + lagrange(pts);
}

VectorXd u_from_rho(const Poly& rho, int n, Chart chart) {
    const double s = (chart == Chart::FirstCompanion) ? -1.0 : 1.0;
    VectorXd u(n);
    for (int i = 1; i <= n; ++i)
        u(i - 1) = s * rho.coeff(n - i);
    return u;
}

VectorXd map_r(const VectorXd& w, const BkmSpec& spec, const Poly& c) {
    const RhoResult rr = solve_rho(c, spec.m, w);
    return u_from_rho(rr.rho, spec.n, spec.chart);
}

} // namespace bkm
