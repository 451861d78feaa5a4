#include "bkm/stackel.hpp"
#include "bkm/errors.hpp"
#include "bkm/operators.hpp"

#include <cmath>
#include <string>

namespace bkm {

namespace {

bool is_constant(const Poly& m) { return m.degree() == 0; }

// Shared per-point precomputation for values and gradients.
struct Workspace {
    int N;
    MatrixXd M;
    MatrixXd G;
    VectorXd Gp;
    std::vector<MatrixXd> P;   // M^0 .. M^L
    std::vector<MatrixXd> h;   // h_k(M), k = 0..N-1
    VectorXd U;
    Eigen::PartialPivLU<MatrixXd> lu_m;
    bool m_const;
    double m0;

    Workspace(const PhasePoint& pt, const Poly& c, const Poly& m) {
        N = pt.dim();
        const VectorXd& w = pt.w;
        M = CompanionMatrix{N, w, CompanionMatrix::Sign::MinusW}.realize();
        G = g0_inverse(w);
        Gp = G * pt.p;
        const int L = std::max({c.degree(), m.degree(), N});
        P.reserve(static_cast<size_t>(L) + 1);
        P.push_back(MatrixXd::Identity(N, N));
        for (int a = 1; a <= L; ++a)
            P.push_back(P.back() * M);
        h.reserve(static_cast<size_t>(N));
        h.push_back(MatrixXd::Identity(N, N));
        for (int k = 1; k < N; ++k)
            h.push_back(h.back() * M + w(k - 1) * MatrixXd::Identity(N, N));
        m_const = is_constant(m);
        m0 = m.coeff(0);
        if (m_const) {
            if (m0 == 0.0)
                throw ConfigError("m must not be the zero polynomial");
            U = eval_at_matrix(c, M).col(N - 1) / m0;
        } else {
            const MatrixXd mM = eval_at_matrix(m, M);
            lu_m.compute(mM);
            const double rc = lu_m.rcond();
            if (!(rc > 1e-12))
                throw SingularMmatrix("potentials: cond(m(M)) exceeds 1e12 - eigenvalue of M near a root of m");
            U = lu_m.solve(eval_at_matrix(c, M).col(N - 1));
        }
    }

    double w_coef(const VectorXd& w, int idx) const {  // w_0 = 1
        return idx == 0 ? 1.0 : w(idx - 1);
    }

    VectorXd coefficients(const PhasePoint& pt) const {
        VectorXd a(N);
        for (int k = 0; k < N; ++k)
            a(k) = -0.5 * pt.p.dot(h[static_cast<size_t>(k)] * Gp) + U(k);
        return a;
    }

    // Gradients of every a_k with respect to (w, p).
    std::vector<PhaseGradient> coefficient_gradients(const PhasePoint& pt,
                                                     const Poly& c, const Poly& m) const {
        const VectorXd& w = pt.w;
        const VectorXd& p = pt.p;
        const int L = static_cast<int>(P.size()) - 1;

        // dU/dw: differentiate m(M) x = c(M) e_N with dM/dw_j = -e_j e_1^T.
        // rhs_j = sum_a gamma_a P_a.col(j) with the scalar streams
        // s_b = (P_b)(0,N-1), r_b = P_b.row(0) . x.
        VectorXd s(L + 1), r(L + 1);
        for (int b = 0; b <= L; ++b) {
            s(b) = P[static_cast<size_t>(b)](0, N - 1);
            r(b) = P[static_cast<size_t>(b)].row(0).dot(U);
        }
        MatrixXd Gamma = MatrixXd::Zero(N, N);
        for (int a = 0; a < L; ++a) {
            double g = 0.0;
            for (int l = a + 1; l <= c.degree(); ++l)
                g -= c.coeff(l) * s(l - 1 - a);
            for (int l = a + 1; l <= m.degree(); ++l)
                g += m.coeff(l) * r(l - 1 - a);
            if (g != 0.0)
                Gamma += g * P[static_cast<size_t>(a)];
        }
        MatrixXd dU;  // (k, j) = dU_k/dw_j
        if (m_const)
            dU = Gamma / m0;
        else
            dU = lu_m.solve(Gamma);

        // kinetic pieces
        VectorXd pPGp(N);  // p^T P_k G p
        std::vector<VectorXd> alpha(static_cast<size_t>(N));
        VectorXd beta(N);
        for (int k = 0; k < N; ++k) {
            pPGp(k) = p.dot(P[static_cast<size_t>(k)] * Gp);
            alpha[static_cast<size_t>(k)] = P[static_cast<size_t>(k)].transpose() * p;
            beta(k) = P[static_cast<size_t>(k)].row(0).dot(Gp);
        }
        std::vector<VectorXd> hTp(static_cast<size_t>(N));
        for (int k = 0; k < N; ++k)
            hTp[static_cast<size_t>(k)] = h[static_cast<size_t>(k)].transpose() * p;

        std::vector<PhaseGradient> out(static_cast<size_t>(N));
        for (int k = 0; k < N; ++k) {
            PhaseGradient g;
            const MatrixXd A = h[static_cast<size_t>(k)] * G;
            g.dp = -0.5 * (A + A.transpose()) * p;
            g.dw = VectorXd::Zero(N);
            for (int j = 1; j <= N; ++j) {
                // p^T d(h_k)/dw_j G p
                double quad = (j <= k) ? pPGp(k - j) : 0.0;
                for (int i = 1; i <= k; ++i)
                    for (int a = 0; a <= i - 1; ++a)
                        quad -= w_coef(w, k - i) * alpha[static_cast<size_t>(a)](j - 1) * beta(i - 1 - a);
                // p^T h_k dG/dw_j p ; dG has ones where row+col = N+1+j (1-based)
                double gq = 0.0;
                for (int rr = 1; rr <= N; ++rr) {
                    const int ss = N + 1 + j - rr;
                    if (ss >= 1 && ss <= N)
                        gq += hTp[static_cast<size_t>(k)](rr - 1) * p(ss - 1);
                }
                g.dw(j - 1) = -0.5 * (quad + gq) + dU(k, j - 1);
            }
            out[static_cast<size_t>(k)] = std::move(g);
        }
        return out;
    }
};

} // namespace

MatrixXd g0_inverse(const VectorXd& w) {
    const int N = static_cast<int>(w.size());
    MatrixXd G = MatrixXd::Zero(N, N);
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) {
            const int s = i + j;
            if (s == N + 1)
                G(i - 1, j - 1) = 1.0;
            else if (s > N + 1)
                G(i - 1, j - 1) = w(s - N - 2);
        }
    return G;
}

VectorXd potentials(const VectorXd& w, const Poly& c, const Poly& m) {
    PhasePoint pt{w, VectorXd::Zero(w.size())};
    return Workspace(pt, c, m).U;
}

double potentials_condition(const VectorXd& w, const Poly& m) {
    if (is_constant(m))
        return 1.0;
    const int N = static_cast<int>(w.size());
    const MatrixXd M = CompanionMatrix{N, w, CompanionMatrix::Sign::MinusW}.realize();
    Eigen::PartialPivLU<MatrixXd> lu(eval_at_matrix(m, M));
    const double rc = lu.rcond();
    return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

double hamiltonian_h(const PhasePoint& pt, const Poly& c, const Poly& m) {
    Workspace ws(pt, c, m);
    return 0.5 * pt.p.dot(ws.Gp) - ws.U(0);
}

IntegralVector integral_coefficients(const PhasePoint& pt, const Poly& c, const Poly& m) {
    Workspace ws(pt, c, m);
    return {ws.coefficients(pt)};
}

double integral_f(const PhasePoint& pt, SpectralParam mu, const Poly& c, const Poly& m) {
    Workspace ws(pt, c, m);
    const VectorXd a = ws.coefficients(pt);
    const int N = pt.dim();
    if (mu.infinite)
        return N >= 2 ? -a(1) : 0.0;
    double f = 0.0;
    for (int k = 0; k < N; ++k)
        f += a(k) * std::pow(mu.value, N - 1 - k);
    return f;
}

std::vector<PhaseGradient> grad_integral_coefficients(const PhasePoint& pt,
                                                      const Poly& c, const Poly& m) {
    Workspace ws(pt, c, m);
    return ws.coefficient_gradients(pt, c, m);
}

PhaseGradient grad_h(const PhasePoint& pt, const Poly& c, const Poly& m) {
    auto g = grad_integral_coefficients(pt, c, m);
    return {-g[0].dw, -g[0].dp};
}

PhaseGradient grad_f(const PhasePoint& pt, SpectralParam lambda, const Poly& c, const Poly& m) {
    const int N = pt.dim();
    if (lambda.infinite && N == 1)
        return {VectorXd::Zero(1), VectorXd::Zero(1)};
    auto g = grad_integral_coefficients(pt, c, m);
    if (lambda.infinite)
        return {-g[1].dw, -g[1].dp};
    PhaseGradient out{VectorXd::Zero(N), VectorXd::Zero(N)};
    for (int k = 0; k < N; ++k) {
        const double f = std::pow(lambda.value, N - 1 - k);
        out.dw += f * g[static_cast<size_t>(k)].dw;
        out.dp += f * g[static_cast<size_t>(k)].dp;
    }
    return out;
}

double poisson_bracket(const PhaseGradient& a, const PhaseGradient& b) {
    return a.dw.dot(b.dp) - a.dp.dot(b.dw);
}

double poisson_bracket_coeffs(int i, int j, const PhasePoint& pt, const Poly& c, const Poly& m) {
    auto g = grad_integral_coefficients(pt, c, m);
    return poisson_bracket(g[static_cast<size_t>(i)], g[static_cast<size_t>(j)]);
}

double poisson_bracket_h_f(const PhasePoint& pt, SpectralParam mu, const Poly& c, const Poly& m) {
    return poisson_bracket(grad_h(pt, c, m), grad_f(pt, mu, c, m));
}

Poly repair_c(const Poly& c, const Poly& m, const PhasePoint& pt) {
    const int N = pt.dim();
    const VectorXd a = integral_coefficients(pt, c, m).values;
    std::vector<double> shift(static_cast<size_t>(N), 0.0);
    for (int k = 0; k < N; ++k)
        shift[static_cast<size_t>(N - 1 - k)] = a(k);
    const Poly c_new = c - m * Poly(std::move(shift));
    const VectorXd check = integral_coefficients(pt, c_new, m).values;
    double scale = 1.0;
    for (int k = 0; k < N; ++k)
        scale = std::max(scale, std::abs(a(k)));
    if (check.cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw Error("repair_c: post-repair integral coefficients failed to vanish");
    return c_new;
}

double stackel_check(const std::vector<double>& q, const std::vector<double>& p_q,
                     const Poly& c, const Poly& m) {
    const int N = static_cast<int>(q.size());
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (std::abs(q[static_cast<size_t>(i)] - q[static_cast<size_t>(j)]) < 1e-8)
                throw DegenerateEigenvalues("stackel_check: eigenvalue gap below 1e-8");

    // w_k = (-1)^k e_k(q) via root expansion
    Poly wpoly{1.0};
    for (double qi : q)
        wpoly = wpoly * Poly{-qi, 1.0};
    VectorXd w(N);
    for (int k = 1; k <= N; ++k)
        w(k - 1) = wpoly.coeff(N - k);

    // cotangent map: p_w solves J^T p_w = p_q with J_kj = dw_k/dq_j
    MatrixXd J(N, N);
    for (int j = 0; j < N; ++j) {
        Poly partial{1.0};
        for (int i = 0; i < N; ++i)
            if (i != j)
                partial = partial * Poly{-q[static_cast<size_t>(i)], 1.0};
        for (int k = 1; k <= N; ++k)
            J(k - 1, j) = -partial.coeff(N - k);  // d/dq_j of (-1)^k e_k
    }
    Eigen::Map<const VectorXd> pq(p_q.data(), N);
    const VectorXd pw = J.transpose().partialPivLu().solve(pq);

    const VectorXd a = integral_coefficients({w, pw}, c, m).values;
    double worst = 0.0;
    for (int alpha = 0; alpha < N; ++alpha) {
        const double qa = q[static_cast<size_t>(alpha)];
        if (m.eval(qa) == 0.0)
            throw SingularMmatrix("stackel_check: m vanishes at an eigenvalue");
        double lhs = 0.0;
        for (int j = 0; j < N; ++j)
            lhs += a(j) * std::pow(qa, N - 1 - j);
        const double rhs = -0.5 * pq(alpha) * pq(alpha) + c.eval(qa) / m.eval(qa);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace bkm
