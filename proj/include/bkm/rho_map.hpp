#pragma once

#include "bkm/types.hpp"

namespace bkm {

/// Result of resolving rho(mu,w) w^2(mu) - m(mu) Q(mu,w) = c(mu).
struct RhoResult {
    Poly rho;                // monic, degree n
    Poly q;                  // degree <= 2N-1
    double condition_number; // of the linear solve
};

/// Unique (rho, Q) of the divisibility condition, from the dense
/// (2N+n) x (2N+n) linear system in the unknown coefficients.
/// Throws SharedRoot when the system conditioning exceeds 1e12, which signals
/// an eigenvalue of M(w) meeting a root of m.
RhoResult solve_rho(const Poly& c, const Poly& m, const VectorXd& w);

/// Interpolation route, valid when deg m = n with distinct real roots:
/// rho(lambda_i) = c(lambda_i) / w^2(lambda_i). Test oracle for solve_rho.
Poly rho_by_interpolation(const Poly& c, const std::vector<double>& m_roots,
                          const VectorXd& w);

/// Reconstruction map R: w -> u. FirstCompanion reports u_i = -rho_i,
/// KbForm reports u_i = +rho_i.
VectorXd map_r(const VectorXd& w, const BkmSpec& spec, const Poly& c);

/// Chart projection of an already-solved rho.
VectorXd u_from_rho(const Poly& rho, int n, Chart chart);

/// Condition number of the reconstruction system alone; never throws.
/// Used for grid diagnostics near the SharedRoot locus.
double rho_condition(const Poly& c, const Poly& m, const VectorXd& w);

} // namespace bkm
