#include "bkm/synthesis.hpp"
#include "bkm/errors.hpp"
#include "bkm/operators.hpp"
#include "bkm/rho_map.hpp"

#include <cmath>
#include <string>

namespace bkm {

namespace {

// Pointwise reconstruction over a phase grid; u and q writers are per-node.
void apply_map(SolutionGrid& sol, const PhaseGrid& grid, const BkmSpec& spec,
               const Poly& c_new, const std::function<double(const PhasePoint&)>& q_of,
               bool parallel) {
    const size_t nt = grid.t_nodes.size(), nx = grid.x_nodes.size();
    sol.u.resize(nt * nx);
    sol.q.resize(nt * nx);
    double worst_cond = 0.0;
    std::exception_ptr failure = nullptr;
    const auto total = static_cast<std::ptrdiff_t>(nt * nx);
#pragma omp parallel for schedule(static) reduction(max : worst_cond) if (parallel)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
        try {
            const PhasePoint& pt = grid.points[static_cast<size_t>(k)];
            const RhoResult rr = solve_rho(c_new, spec.m, pt.w);
            sol.u[static_cast<size_t>(k)] = u_from_rho(rr.rho, spec.n, spec.chart);
            sol.q[static_cast<size_t>(k)] = q_of(pt);
            worst_cond = std::max(worst_cond, rr.condition_number);
        } catch (...) {
#pragma omp critical
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    sol.max_rho_condition = worst_cond;
}

} // namespace

SolutionGrid synthesize_finite(const GridFactory& grid_fn, const BkmSpec& spec,
                               const ReductionSpec& reduction,
                               const std::vector<double>& t_nodes,
                               const std::vector<double>& x_nodes,
                               bool parallel) {
    if (spec.lambda.infinite)
        throw ConfigError("synthesize_finite requires a finite lambda");
    const Poly& c_new = reduction.c;
    const double cl = c_new.eval(spec.lambda.value);
    if (!(cl > 0.0))
        throw NonpositiveCLambda("synthesize_finite: c_new(lambda) = " + std::to_string(cl) +
                                 " must be positive");
    const double a = std::sqrt(cl);

    std::vector<double> internal_t(t_nodes.size());
    for (size_t i = 0; i < t_nodes.size(); ++i)
        internal_t[i] = t_nodes[i] / a;
    const PhaseGrid grid = grid_fn(internal_t, x_nodes, SweepOrder::XThenT);

    SolutionGrid sol;
    sol.t_nodes = t_nodes;
    sol.x_nodes = x_nodes;
    sol.spec = spec;
    sol.reduction = reduction;
    sol.a = a;
    const double lambda = spec.lambda.value;
    apply_map(sol, grid, spec, c_new,
              [&](const PhasePoint& pt) { return char_poly_w(pt.w).eval(lambda) / a; },
              parallel);
    return sol;
}

SolutionGrid synthesize_infinite(const GridFactory& grid_fn, const BkmSpec& spec,
                                 const ReductionSpec& reduction,
                                 const std::vector<double>& t_nodes,
                                 const std::vector<double>& x_nodes,
                                 bool parallel) {
    if (!spec.lambda.infinite)
        throw ConfigError("synthesize_infinite requires lambda = infinity");
    const Poly& c_new = reduction.c;
    const int deg = c_new.degree();
    const double c1 = c_new.coeff(deg - 1);

    SolutionGrid sol;
    sol.t_nodes = t_nodes;
    sol.x_nodes = x_nodes;
    sol.spec = spec;
    sol.reduction = reduction;

    const auto q_of = [&](const PhasePoint& pt) { return pt.w(0) - 0.5 * c1; };

    if (c1 == 0.0) {
        const PhaseGrid grid = grid_fn(t_nodes, x_nodes, SweepOrder::XThenT);
        apply_map(sol, grid, spec, c_new, q_of, parallel);
        return sol;
    }

    // shifted arguments x + (c1/2) t differ per row: integrate each row directly
    const size_t nt = t_nodes.size(), nx = x_nodes.size();
    sol.u.resize(nt * nx);
    sol.q.resize(nt * nx);
    double worst = 0.0;
    for (size_t it = 0; it < nt; ++it) {
        std::vector<double> shifted(nx);
        for (size_t j = 0; j < nx; ++j)
            shifted[j] = x_nodes[j] + 0.5 * c1 * t_nodes[it];
        const PhaseGrid row = grid_fn({t_nodes[it]}, shifted, SweepOrder::TThenX);
        SolutionGrid tmp;
        tmp.t_nodes = {t_nodes[it]};
        tmp.x_nodes = shifted;
        apply_map(tmp, row, spec, c_new, q_of, parallel);
        for (size_t j = 0; j < nx; ++j) {
            sol.u[it * nx + j] = tmp.u[j];
            sol.q[it * nx + j] = tmp.q[j];
        }
        worst = std::max(worst, tmp.max_rho_condition);
    }
    sol.max_rho_condition = worst;
    return sol;
}

KbClosedForm closed_form_kb(double t, double x) {
    const double s2 = std::sqrt(2.0);
    const double e2x = std::exp(2.0 * s2 * x);
    const double ea = std::exp(s2 * (x - t));
    const double eb = std::exp(-s2 * (x + t));
    KbClosedForm r;
    r.q1 = -eb * (e2x - 1.0) / (ea + eb + 2.0);
    r.q2 = (e2x - 1.0) / (2.0 * ea + e2x + 1.0);
    r.u1 = 2.0 * r.q1 + 2.0 * r.q2;
    r.u2 = 3.0 * r.q1 * r.q1 + 4.0 * r.q1 * r.q2 + 3.0 * r.q2 * r.q2 - 2.0;
    return r;
}

} // namespace bkm
