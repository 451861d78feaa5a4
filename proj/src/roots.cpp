#include "bkm/roots.hpp"
#include "bkm/operators.hpp"

#include <algorithm>
#include <cmath>

namespace bkm {

std::vector<std::complex<double>> all_roots(const Poly& p) {
    using C = std::complex<double>;
    const int deg = p.degree();
    if (deg < 1 || p.is_zero())
        return {};
    // normalize to monic
    std::vector<C> a(static_cast<size_t>(deg) + 1);
    for (int k = 0; k <= deg; ++k)
        a[static_cast<size_t>(k)] = p.coeff(k) / p.leading();
    auto eval = [&](C z) {
        C r = 0.0;
        for (size_t k = a.size(); k-- > 0;)
            r = r * z + a[k];
        return r;
    };
    // Durand-Kerner from a non-real seed spiral
    double radius = 0.0;
    for (int k = 0; k < deg; ++k)
        radius = std::max(radius, std::abs(p.coeff(k) / p.leading()));
    radius = 1.0 + radius;
    std::vector<C> z(static_cast<size_t>(deg));
    const C seed(0.4, 0.9);
    C acc(1.0, 0.0);
    for (int i = 0; i < deg; ++i) {
        acc *= seed;
        z[static_cast<size_t>(i)] = radius * acc;
    }
    for (int iter = 0; iter < 500; ++iter) {
        double shift = 0.0;
        for (int i = 0; i < deg; ++i) {
            C denom = 1.0;
            for (int j = 0; j < deg; ++j)
                if (j != i)
                    denom *= z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)];
            C dz = eval(z[static_cast<size_t>(i)]) / denom;
            z[static_cast<size_t>(i)] -= dz;
            shift = std::max(shift, std::abs(dz));
        }
        if (shift < 1e-14 * radius)
            break;
    }
    return z;
}

std::vector<double> real_roots(const Poly& p, double imag_tol) {
    std::vector<double> out;
    for (const auto& z : all_roots(p))
        if (std::abs(z.imag()) <= imag_tol * (1.0 + std::abs(z.real())))
            out.push_back(z.real());
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::vector<double>> tracked_real_eigenvalues(
    const std::vector<double>& w, double min_gap,
    const std::vector<double>* reference) {
    Eigen::Map<const VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
    const Poly wp = char_poly_w(wv);
    auto zs = all_roots(wp);
    std::vector<double> ys;
    for (const auto& z : zs) {
        if (std::abs(z.imag()) > 1e-8 * (1.0 + std::abs(z.real())))
            return std::nullopt;
        ys.push_back(z.real());
    }
    std::sort(ys.begin(), ys.end());
    for (size_t i = 1; i < ys.size(); ++i)
        if (ys[i] - ys[i - 1] < min_gap)
            return std::nullopt;
    if (reference && reference->size() == ys.size()) {
        // greedy nearest-match to keep branch continuity along a sweep
        std::vector<double> ordered(ys.size());
        std::vector<bool> used(ys.size(), false);
        for (size_t r = 0; r < reference->size(); ++r) {
            size_t best = 0;
            double bd = std::numeric_limits<double>::max();
            for (size_t i = 0; i < ys.size(); ++i) {
                if (used[i]) continue;
                double d = std::abs(ys[i] - (*reference)[r]);
                if (d < bd) { bd = d; best = i; }
            }
            used[best] = true;
            ordered[r] = ys[best];
        }
        return ordered;
    }
    return ys;
}

} // namespace bkm
