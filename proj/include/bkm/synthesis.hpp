#pragma once

#include "bkm/flow.hpp"
#include "bkm/types.hpp"

#include <functional>

namespace bkm {

/// Sampled solution fields u(t,x), q(t,x) with provenance metadata.
struct SolutionGrid {
    std::vector<double> t_nodes;
    std::vector<double> x_nodes;
    std::vector<VectorXd> u;   // row-major [it * nx + jx], each of size n
    std::vector<double> q;     // same layout
    BkmSpec spec;
    ReductionSpec reduction;   // carries c_new
    double a = 0.0;            // sqrt(c_new(lambda)), finite lambda only
    double max_rho_condition = 0.0;

    const VectorXd& u_at(size_t it, size_t jx) const { return u[it * x_nodes.size() + jx]; }
    double q_at(size_t it, size_t jx) const { return q[it * x_nodes.size() + jx]; }
};

/// Produces the phase grid for requested node sets; the pipeline binds this to
/// build_grid with its start point and flow configuration.
using GridFactory = std::function<PhaseGrid(const std::vector<double>& t_nodes,
                                            const std::vector<double>& x_nodes,
                                            SweepOrder order)>;

/// Finite-lambda synthesis: requests the phase grid at internal times t/a with
/// a = sqrt(c_new(lambda)) (no interpolation), then u = R(w), q = w(lambda)/a.
/// Throws NonpositiveCLambda when c_new(lambda) <= 0.
SolutionGrid synthesize_finite(const GridFactory& grid_fn, const BkmSpec& spec,
                               const ReductionSpec& reduction,
                               const std::vector<double>& t_nodes,
                               const std::vector<double>& x_nodes,
                               bool parallel = true);

/// lambda = infinity synthesis: phase values at shifted arguments x + (c_1/2) t
/// obtained by direct integration per t-row; u = R(w), q = w_1 - c_1/2.
SolutionGrid synthesize_infinite(const GridFactory& grid_fn, const BkmSpec& spec,
                                 const ReductionSpec& reduction,
                                 const std::vector<double>& t_nodes,
                                 const std::vector<double>& x_nodes,
                                 bool parallel = true);

/// Exact Kaup-Boussinesq-type reference solution (n=2, N=2, m=1,
/// c = mu^2 (mu^2-1)^2, lambda = infinity). Golden oracle only.
struct KbClosedForm {
    double q1, q2, u1, u2;
};
KbClosedForm closed_form_kb(double t, double x);

} // namespace bkm
