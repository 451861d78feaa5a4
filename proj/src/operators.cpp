#include "bkm/operators.hpp"

namespace bkm {

MatrixXd CompanionMatrix::realize() const {
    MatrixXd M = MatrixXd::Zero(size, size);
    const double s = (sign == Sign::PlusU) ? 1.0 : -1.0;
    for (int i = 0; i < size; ++i) {
        M(i, 0) = s * first_column(i);
        if (i + 1 < size)
            M(i, i + 1) = 1.0;
    }
    return M;
}

Poly char_poly(const CompanionMatrix& cm) {
    std::vector<double> c(static_cast<size_t>(cm.size) + 1, 0.0);
    c.back() = 1.0;
    const double s = (cm.sign == CompanionMatrix::Sign::PlusU) ? -1.0 : 1.0;
    for (int i = 0; i < cm.size; ++i)
        c[static_cast<size_t>(cm.size - 1 - i)] = s * cm.first_column(i);
    return Poly(std::move(c));
}

Poly char_poly_w(const VectorXd& w) {
    return char_poly({static_cast<int>(w.size()), w, CompanionMatrix::Sign::MinusW});
}

Poly sigma_poly(const VectorXd& u, Chart chart) {
    const int n = static_cast<int>(u.size());
    std::vector<double> c(static_cast<size_t>(n) + 1, 0.0);
    c.back() = 1.0;
    const double s = (chart == Chart::FirstCompanion) ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i)
        c[static_cast<size_t>(n - 1 - i)] = s * u(i);
    return Poly(std::move(c));
}

MatrixXd l_operator(const VectorXd& u, Chart chart) {
    CompanionMatrix cm{static_cast<int>(u.size()), u,
                       chart == Chart::FirstCompanion ? CompanionMatrix::Sign::PlusU
                                                      : CompanionMatrix::Sign::MinusW};
    return cm.realize();
}

VectorXd zeta(const VectorXd& u, const Poly& m, Chart chart) {
    const int n = static_cast<int>(u.size());
    const double mn = m.coeff(n);
    VectorXd z(n);
    for (int i = 1; i <= n; ++i) {
        if (chart == Chart::FirstCompanion)
            z(i - 1) = mn * u(i - 1) + m.coeff(n - i);
        else
            z(i - 1) = mn * u(i - 1) - m.coeff(n - i);
    }
    return z;
}

MatrixXd eval_at_matrix(const Poly& p, const MatrixXd& M) {
    const auto n = M.rows();
    MatrixXd R = MatrixXd::Zero(n, n);
    const auto& c = p.coeffs();
    for (size_t k = c.size(); k-- > 0;) {
        R = R * M;
        R.diagonal().array() += c[k];
    }
    return R;
}

MatrixXd m_lambda(const VectorXd& w, double lambda) {
    const int N = static_cast<int>(w.size());
    const Poly wp = char_poly_w(w);
    // synthetic division: d(mu) = (w(mu) - w(lambda)) / (mu - lambda), exact quotient
    std::vector<double> d(static_cast<size_t>(N), 0.0);
    double carry = wp.coeff(N);
    for (int k = N - 1; k >= 0; --k) {
        d[static_cast<size_t>(k)] = carry;
        carry = wp.coeff(k) + carry * lambda;
    }
    const MatrixXd M = CompanionMatrix{N, w, CompanionMatrix::Sign::MinusW}.realize();
    return -eval_at_matrix(Poly(std::move(d)), M);
}

MatrixXd m_infinity(const VectorXd& w) {
    const int N = static_cast<int>(w.size());
    MatrixXd M = CompanionMatrix{N, w, CompanionMatrix::Sign::MinusW}.realize();
    M.diagonal().array() += w(0);  // tr M = -w_1
    return M;
}

} // namespace bkm
