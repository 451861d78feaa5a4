#pragma once

#include "bkm/ode.hpp"
#include "bkm/stackel.hpp"
#include "bkm/types.hpp"

#include <vector>

namespace bkm {

struct FlowConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.5;
    double blowup_norm = 1e8;
    enum class Method { AdaptiveRK45, AdaptiveRK78 } method = Method::AdaptiveRK45;

    OdeOptions ode() const {
        return {rel_tol, abs_tol, max_step, blowup_norm,
                method == Method::AdaptiveRK78 ? RkMethod::Dop853 : RkMethod::Dopri5};
    }
};

struct NodeDiagnostics {
    double integral_drift = 0.0;  // max |a_k| at the node
    double rho_condition = 0.0;
};

/// Sampled phase field on a rectangular (t, x) grid.
struct PhaseGrid {
    std::vector<double> t_nodes;
    std::vector<double> x_nodes;
    std::vector<PhasePoint> points;            // row-major: [it * nx + jx]
    std::vector<NodeDiagnostics> diagnostics;  // same layout
    bool condition_warning = false;            // rho/potential cond passed 1e10 somewhere

    const PhasePoint& at(size_t it, size_t jx) const { return points[it * x_nodes.size() + jx]; }
    PhasePoint& at(size_t it, size_t jx) { return points[it * x_nodes.size() + jx]; }
};

enum class SweepOrder { XThenT, TThenX };

/// Hamiltonian flow of H through each x target (targets need not be sorted;
/// integration splits at the start).
std::vector<PhasePoint> flow_h(const PhasePoint& start, const std::vector<double>& x_targets,
                               const FlowConfig& cfg, const Poly& c, const Poly& m);

/// Flow of the t-generator F_lambda (finite) or -a_1 (infinite).
std::vector<PhasePoint> flow_f(const PhasePoint& start, SpectralParam lambda,
                               const std::vector<double>& t_targets,
                               const FlowConfig& cfg, const Poly& c, const Poly& m);

/// Grid of the commuting R^2-action: start must lie on the level surface
/// (max |a_k| <= 1e-8, else OffLevelSet). The sweeps along the second
/// direction are independent and run in parallel; `parallel=false` selects
/// the serial reference used by tests and the benchmark.
PhaseGrid build_grid(const PhasePoint& start, const std::vector<double>& t_nodes,
                     const std::vector<double>& x_nodes, SpectralParam lambda,
                     const FlowConfig& cfg, const Poly& c, const Poly& m,
                     SweepOrder order = SweepOrder::XThenT, bool parallel = true);

} // namespace bkm
