#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bkm/pipeline.hpp"
#include "bkm/residuals.hpp"
#include "bkm/scenario.hpp"

using namespace bkm;

// The OpenMP kernels must reproduce the serial reference exactly: every
// iteration is independent and writes its own slot, so the merged result
// cannot depend on the schedule.

namespace {

Scenario small_scenario() {
    Scenario s = preset("kb-exact");
    s.t_axis = {-0.4, 0.4, 9};
    s.x_axis = {-1.0, 1.0, 17};
    return s;
}

} // namespace

TEST_CASE("grid assembly: serial reference equals parallel kernel") {
    const Scenario s = small_scenario();
    const Poly c = repair_c(s.reduction.c, s.bkm.m, s.start);
    const auto tn = s.t_axis.nodes();
    const auto xn = s.x_axis.nodes();
    const PhaseGrid par = build_grid(s.start, tn, xn, s.bkm.lambda, s.flow, c, s.bkm.m,
                                     SweepOrder::XThenT, true);
    const PhaseGrid ser = build_grid(s.start, tn, xn, s.bkm.lambda, s.flow, c, s.bkm.m,
                                     SweepOrder::XThenT, false);
    REQUIRE(par.points.size() == ser.points.size());
    for (size_t k = 0; k < par.points.size(); ++k) {
        CHECK(par.points[k].w == ser.points[k].w);
        CHECK(par.points[k].p == ser.points[k].p);
        CHECK(par.diagnostics[k].integral_drift == ser.diagnostics[k].integral_drift);
        CHECK(par.diagnostics[k].rho_condition == ser.diagnostics[k].rho_condition);
    }
}

TEST_CASE("full pipeline: serial reference equals parallel kernel") {
    const Scenario s = small_scenario();
    const RunResult par = run_scenario(s, true);
    const RunResult ser = run_scenario(s, false);
    REQUIRE(par.solution.u.size() == ser.solution.u.size());
    for (size_t k = 0; k < par.solution.u.size(); ++k) {
        CHECK(par.solution.u[k] == ser.solution.u[k]);
        CHECK(par.solution.q[k] == ser.solution.q[k]);
    }
    REQUIRE(par.reports.size() == ser.reports.size());
    for (size_t i = 0; i < par.reports.size(); ++i) {
        CHECK(par.reports[i].max_abs == ser.reports[i].max_abs);
        CHECK(par.reports[i].rms == ser.reports[i].rms);
    }
}
