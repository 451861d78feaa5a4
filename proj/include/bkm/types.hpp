#pragma once

#include "bkm/poly.hpp"

#include <Eigen/Dense>

namespace bkm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Sign convention for the u-coordinates.
/// FirstCompanion: sigma(mu,u) = mu^n - u_1 mu^{n-1} - ... - u_n, L has +u_i in column 1.
/// KbForm:         sigma(mu,u) = mu^n + u_1 mu^{n-1} + ... + u_n, L has -u_i in column 1.
enum class Chart { FirstCompanion, KbForm };

/// Spectral parameter lambda in R or the distinguished value infinity.
struct SpectralParam {
    double value = 0.0;
    bool infinite = false;

    static SpectralParam finite(double v) { return {v, false}; }
    static SpectralParam infinity() { return {0.0, true}; }
};

/// One system of the family: component count n, polynomial m of degree <= n,
/// spectral parameter, and the u-sign chart.
struct BkmSpec {
    int n = 1;
    Poly m{1.0};
    SpectralParam lambda = SpectralParam::infinity();
    Chart chart = Chart::FirstCompanion;

    /// Highest coefficient m_n (zero when deg m < n).
    double m_top() const { return m.coeff(n); }
};

/// Reduction data: degrees of freedom N and the monic polynomial c of degree 2N+n.
struct ReductionSpec {
    int N = 1;
    Poly c;
};

/// A point (w, p) of the reduced phase space T*R^N.
struct PhasePoint {
    VectorXd w;
    VectorXd p;

    int dim() const { return static_cast<int>(w.size()); }
    bool finite() const { return w.allFinite() && p.allFinite(); }
};

} // namespace bkm
