#pragma once

#include "bkm/flow.hpp"
#include "bkm/synthesis.hpp"

#include <optional>
#include <string>

namespace bkm {

struct ResidualReport {
    std::string name;
    double max_abs = 0.0;
    double rms = 0.0;
    double dt = 0.0;
    double dx = 0.0;
    std::optional<double> convergence_order;
    size_t sampled_nodes = 0;
    size_t skipped_nodes = 0;
    bool inconclusive = false;
};

/// Evolution and constraint residuals of one synthesized solution.
struct BkmResiduals {
    ResidualReport evolution;
    ResidualReport constraint;
};

/// Residuals of the lambda-finite system
///   u_t = q_xxx (L - lambda)^{-1} zeta + q (L - lambda)^{-1} u_x,
///   1 = -m(lambda)(q_xx q - q_x^2/2) + sigma(lambda,u) q^2,
/// with 4th-order interior stencils. Throws EigenvalueCollision when lambda
/// meets the spectrum of L(u) on the grid, GridTooCoarse below 7 nodes/axis.
BkmResiduals residual_bkm_finite(const SolutionGrid& sol, bool parallel = true);

/// Residuals of the lambda = infinity system
///   u_t = q_xxx zeta + (L + q Id) u_x,   0 = 2q - m_n q_xx - tr L
/// (the constraint is checked algebraically as q - tr L / 2 when m_n = 0).
BkmResiduals residual_bkm_infinite(const SolutionGrid& sol, bool parallel = true);

/// Base-equation residual m(mu)(W_xx W - W_x^2/2) - rho(mu,w) W^2 + c(mu)
/// of the scalar field W = w(t,x,mu), per mu sample.
ResidualReport residual_base(const PhaseGrid& grid, const std::vector<double>& mu_samples,
                             const Poly& c_new, const Poly& m, bool parallel = true);

/// Universal solitonic equation residual at one mu:
/// finite lambda:  W_t - (W_x W(lambda) - W W_x(lambda)) / (mu - lambda),
/// infinite:       W_t - (mu W_x + W_x w_1 - W (w_1)_x).
ResidualReport residual_solitonic(const PhaseGrid& grid, double mu, SpectralParam lambda,
                                  bool parallel = true);

/// Separated-coordinate oracle: max violation of
/// (1/2)(dy_a/dx prod_{i!=a}(y_a - y_i))^2 = c_new(y_a)/m(y_a)
/// over nodes with real, separated eigenvalues; others are skipped and counted.
ResidualReport separation_oracle(const PhaseGrid& grid, const Poly& c_new, const Poly& m);

/// Max and rms of the integral-coefficient drift across the grid.
ResidualReport conservation_report(const PhaseGrid& grid, const Poly& c_new, const Poly& m);

/// Swap the sweep order on a small grid and report the worst phase discrepancy.
ResidualReport commutativity_report(const PhasePoint& start, double t_span, double x_span,
                                    SpectralParam lambda, const FlowConfig& cfg,
                                    const Poly& c_new, const Poly& m);

/// Fitted order from one halving step: log2(coarse/fine).
double fit_order(double coarse, double fine);

} // namespace bkm
