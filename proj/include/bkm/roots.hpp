#pragma once

#include "bkm/poly.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace bkm {

/// All complex roots of p by the Durand-Kerner iteration.
std::vector<std::complex<double>> all_roots(const Poly& p);

/// Real roots only, sorted ascending; a root counts as real when
/// |Im| <= imag_tol * (1 + |Re|).
std::vector<double> real_roots(const Poly& p, double imag_tol = 1e-9);

/// Roots of char_poly_w(w) if all real and pairwise separated by min_gap,
/// ordered to match the reference ordering when given (nearest-match tracking).
std::optional<std::vector<double>> tracked_real_eigenvalues(
    const std::vector<double>& w, double min_gap,
    const std::vector<double>* reference = nullptr);

} // namespace bkm
