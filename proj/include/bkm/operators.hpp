#pragma once

#include "bkm/types.hpp"

namespace bkm {

/// Companion-form matrix: ones on the superdiagonal, the only free entries in
/// column 1. PlusU realizes L (entries +u_i), MinusW realizes M (entries -w_i).
struct CompanionMatrix {
    enum class Sign { PlusU, MinusW };

    int size = 0;
    VectorXd first_column;
    Sign sign = Sign::MinusW;

    MatrixXd realize() const;
};

/// Characteristic polynomial read directly off the first column:
/// MinusW -> mu^N + w_1 mu^{N-1} + ... + w_N,
/// PlusU  -> mu^n - u_1 mu^{n-1} - ... - u_n.
Poly char_poly(const CompanionMatrix& cm);

/// det(mu Id - M(w)) for the MinusW companion of w.
Poly char_poly_w(const VectorXd& w);

/// sigma(mu, u) in the given chart.
Poly sigma_poly(const VectorXd& u, Chart chart);

/// Realized L(u) under the chart (PlusU for FirstCompanion, -u column for KbForm).
MatrixXd l_operator(const VectorXd& u, Chart chart);

/// The vector field zeta fixed by L_zeta sigma(mu,u) = m_n sigma(mu,u) - m(mu)
/// in the chart's sigma convention.
VectorXd zeta(const VectorXd& u, const Poly& m, Chart chart = Chart::FirstCompanion);

/// M_lambda = det(lambda Id - M) (M - lambda Id)^{-1}, computed as -d(M) with
/// d(mu) = (w(mu) - w(lambda))/(mu - lambda). Continuous through eigenvalues.
MatrixXd m_lambda(const VectorXd& w, double lambda);

/// M_infinity = M - tr M * Id = M + w_1 Id.
MatrixXd m_infinity(const VectorXd& w);

/// Evaluate a polynomial at a square matrix (Horner).
MatrixXd eval_at_matrix(const Poly& p, const MatrixXd& M);

} // namespace bkm
