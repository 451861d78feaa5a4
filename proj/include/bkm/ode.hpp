#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace bkm {

enum class RkMethod { Dopri5, Dop853 };

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 1.0;
    double blowup_norm = 1e8;
    RkMethod method = RkMethod::Dopri5;
};

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// Optional per-state cap on |h| (used for the near-singularity slowdown).
using StepLimiter = std::function<double(const Eigen::VectorXd&)>;

/// Integrate y' = f(t,y) from (t0, y0), landing exactly on every target time.
/// Targets must be sorted monotonically away from t0 (all >= t0 or all <= t0).
/// Throws BlowUp / ToleranceFailure; exceptions from f propagate.
std::vector<Eigen::VectorXd> integrate_to(const OdeRhs& f, double t0,
                                          const Eigen::VectorXd& y0,
                                          const std::vector<double>& targets,
                                          const OdeOptions& opts,
                                          const StepLimiter& limiter = nullptr);

} // namespace bkm
