#pragma once

#include "bkm/types.hpp"

#include <vector>

namespace bkm {

/// Coefficients a_0..a_{N-1} of the integral polynomial
/// A(mu) = a_0 mu^{N-1} + ... + a_{N-1}; the level surface X is {a = 0}.
struct IntegralVector {
    VectorXd values;
};

struct PhaseGradient {
    VectorXd dw;
    VectorXd dp;
};

/// Contravariant flat metric, anti-diagonal Hankel pattern of 1, w_1, w_2, ...
MatrixXd g0_inverse(const VectorXd& w);

/// U_0..U_{N-1} from the last column of c(M) m(M)^{-1}; throws SingularMmatrix
/// when cond(m(M)) > 1e12.
VectorXd potentials(const VectorXd& w, const Poly& c, const Poly& m);

/// cond(m(M)); 1 for constant m. Used by the integrator's slowdown guard.
double potentials_condition(const VectorXd& w, const Poly& m);

/// H(w,p) = 1/2 g0^{-1}(p,p) - U_0(w).
double hamiltonian_h(const PhasePoint& pt, const Poly& c, const Poly& m);

/// The commuting integral family. Finite mu evaluates A(mu); infinity gives
/// the t-flow generator 1/2 g0^{-1}(M_inf* p, p) - U_1 = -a_1 (zero when N=1).
double integral_f(const PhasePoint& pt, SpectralParam mu, const Poly& c, const Poly& m);

IntegralVector integral_coefficients(const PhasePoint& pt, const Poly& c, const Poly& m);

/// Analytic phase-space gradients (finite differences live in the tests only).
PhaseGradient grad_h(const PhasePoint& pt, const Poly& c, const Poly& m);
PhaseGradient grad_f(const PhasePoint& pt, SpectralParam lambda, const Poly& c, const Poly& m);
std::vector<PhaseGradient> grad_integral_coefficients(const PhasePoint& pt,
                                                      const Poly& c, const Poly& m);

/// Canonical bracket sum_i (dA/dw_i dB/dp_i - dA/dp_i dB/dw_i).
double poisson_bracket(const PhaseGradient& a, const PhaseGradient& b);
double poisson_bracket_coeffs(int i, int j, const PhasePoint& pt, const Poly& c, const Poly& m);
double poisson_bracket_h_f(const PhasePoint& pt, SpectralParam mu, const Poly& c, const Poly& m);

/// Shift c so that all integral coefficients vanish at pt:
/// c_new = c - m * A(mu; pt). Leaves rho and the map R unchanged.
Poly repair_c(const Poly& c, const Poly& m, const PhasePoint& pt);

/// Max violation of the Vandermonde (Stackel) relation
/// sum_j q_alpha^{N-1-j} a_j = -1/2 p_alpha^2 + c(q_alpha)/m(q_alpha)
/// for the point given in eigenvalue coordinates (q, p_q).
double stackel_check(const std::vector<double>& q, const std::vector<double>& p_q,
                     const Poly& c, const Poly& m);

} // namespace bkm
