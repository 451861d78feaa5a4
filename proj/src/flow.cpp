#include "bkm/flow.hpp"
#include "bkm/errors.hpp"
#include "bkm/rho_map.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

namespace bkm {

namespace {

// Hamilton's equations dz = (dF/dp, -dF/dw) for the generator picked by `lambda`;
// H itself when `use_h`.
OdeRhs hamilton_rhs(bool use_h, SpectralParam lambda, const Poly& c, const Poly& m, int N) {
    return [=](double, const VectorXd& z) -> VectorXd {
        PhasePoint pt{z.head(N), z.tail(N)};
        PhaseGradient g;
        try {
            g = use_h ? grad_h(pt, c, m) : grad_f(pt, lambda, c, m);
        } catch (const SingularMmatrix& e) {
            throw SingularityHit(e.what());
        }
        VectorXd dz(2 * N);
        dz.head(N) = g.dp;
        dz.tail(N) = -g.dw;
        return dz;
    };
}

StepLimiter condition_limiter(const Poly& m, const FlowConfig& cfg, int N, bool* warn) {
    if (m.degree() == 0)
        return nullptr;  // cond(m(M)) == 1 identically
    return [&m, cfg, N, warn](const VectorXd& z) -> double {
        const double cond = potentials_condition(z.head(N), m);
        if (cond > 1e10) {
            if (warn) *warn = true;
            return cfg.max_step / 16.0;
        }
        return cfg.max_step;
    };
}

std::vector<PhasePoint> sweep(const PhasePoint& start, const std::vector<double>& targets,
                              const OdeRhs& rhs, const FlowConfig& cfg, const StepLimiter& lim) {
    const int N = start.dim();
    VectorXd z0(2 * N);
    z0 << start.w, start.p;

    // split targets around 0 and integrate each direction separately
    std::vector<size_t> order(targets.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return targets[a] < targets[b]; });

    std::vector<double> fwd, bwd;
    std::vector<size_t> fwd_idx, bwd_idx;
    for (size_t i : order) {
        if (targets[i] >= 0.0) { fwd.push_back(targets[i]); fwd_idx.push_back(i); }
    }
    for (size_t k = order.size(); k-- > 0;) {
        const size_t i = order[k];
        if (targets[i] < 0.0) { bwd.push_back(targets[i]); bwd_idx.push_back(i); }
    }

    std::vector<PhasePoint> out(targets.size());
    auto run = [&](const std::vector<double>& ts, const std::vector<size_t>& idx) {
        if (ts.empty()) return;
        auto states = integrate_to(rhs, 0.0, z0, ts, cfg.ode(), lim);
        for (size_t k = 0; k < ts.size(); ++k)
            out[idx[k]] = PhasePoint{states[k].head(N), states[k].tail(N)};
    };
    run(fwd, fwd_idx);
    run(bwd, bwd_idx);
    return out;
}

} // namespace

std::vector<PhasePoint> flow_h(const PhasePoint& start, const std::vector<double>& x_targets,
                               const FlowConfig& cfg, const Poly& c, const Poly& m) {
    if (!start.finite())
        throw ConfigError("flow_h: start point must be finite");
    bool warn = false;
    return sweep(start, x_targets, hamilton_rhs(true, {}, c, m, start.dim()), cfg,
                 condition_limiter(m, cfg, start.dim(), &warn));
}

std::vector<PhasePoint> flow_f(const PhasePoint& start, SpectralParam lambda,
                               const std::vector<double>& t_targets,
                               const FlowConfig& cfg, const Poly& c, const Poly& m) {
    if (!start.finite())
        throw ConfigError("flow_f: start point must be finite");
    bool warn = false;
    return sweep(start, t_targets, hamilton_rhs(false, lambda, c, m, start.dim()), cfg,
                 condition_limiter(m, cfg, start.dim(), &warn));
}

PhaseGrid build_grid(const PhasePoint& start, const std::vector<double>& t_nodes,
                     const std::vector<double>& x_nodes, SpectralParam lambda,
                     const FlowConfig& cfg, const Poly& c, const Poly& m,
                     SweepOrder order, bool parallel) {
    const int N = start.dim();
    {
        const VectorXd a = integral_coefficients(start, c, m).values;
        if (a.cwiseAbs().maxCoeff() > 1e-8)
            throw OffLevelSet("build_grid: start is off the common level surface; run repair_c first");
    }

    PhaseGrid grid;
    grid.t_nodes = t_nodes;
    grid.x_nodes = x_nodes;
    const size_t nt = t_nodes.size(), nx = x_nodes.size();
    grid.points.resize(nt * nx);
    grid.diagnostics.resize(nt * nx);

    const auto h_rhs = hamilton_rhs(true, {}, c, m, N);
    const auto f_rhs = hamilton_rhs(false, lambda, c, m, N);
    bool warn = false;
    const auto lim = condition_limiter(m, cfg, N, &warn);

    const bool x_first = (order == SweepOrder::XThenT);
    const auto& primary = x_first ? x_nodes : t_nodes;
    const auto& secondary = x_first ? t_nodes : x_nodes;
    const auto& primary_rhs = x_first ? h_rhs : f_rhs;
    const auto& secondary_rhs = x_first ? f_rhs : h_rhs;

    const auto spine = sweep(start, primary, primary_rhs, cfg, lim);

    // exceptions must not escape an omp region; capture and rethrow annotated
    std::exception_ptr failure = nullptr;
    std::string failed_at;

    auto fill_column = [&](size_t jp) {
        const auto col = sweep(spine[jp], secondary, secondary_rhs, cfg, lim);
        for (size_t is = 0; is < secondary.size(); ++is) {
            const size_t it = x_first ? is : jp;
            const size_t jx = x_first ? jp : is;
            grid.points[it * nx + jx] = col[is];
        }
    };

    const auto np = static_cast<std::ptrdiff_t>(primary.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t jp = 0; jp < np; ++jp) {
        try {
            fill_column(static_cast<size_t>(jp));
        } catch (...) {
#pragma omp critical
            if (!failure) {
                failure = std::current_exception();
                failed_at = (x_first ? "x index " : "t index ") + std::to_string(jp);
            }
        }
    }
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const Error& e) {
            throw Error(std::string(e.what()) + " [grid sweep at " + failed_at + "]");
        }
    }

    // per-node diagnostics; a node on the singular locus reports inf instead of failing
    const auto total = static_cast<std::ptrdiff_t>(grid.points.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
        const auto& pt = grid.points[static_cast<size_t>(k)];
        try {
            grid.diagnostics[static_cast<size_t>(k)] = {
                integral_coefficients(pt, c, m).values.cwiseAbs().maxCoeff(),
                rho_condition(c, m, pt.w)};
        } catch (const Error&) {
            const double inf = std::numeric_limits<double>::infinity();
            grid.diagnostics[static_cast<size_t>(k)] = {inf, inf};
        }
    }
    grid.condition_warning = warn;
    return grid;
}

} // namespace bkm
