#include "bkm/poly.hpp"
#include "bkm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bkm {

Poly Poly::monomial(int degree, double a) {
    std::vector<double> c(static_cast<size_t>(degree) + 1, 0.0);
    c.back() = a;
    return Poly(std::move(c));
}

Poly Poly::from_roots(const std::vector<double>& roots) {
    Poly p{1.0};
    for (double r : roots)
        p = p * Poly{-r, 1.0};
    return p;
}

double Poly::eval(double x) const {
    double r = 0.0;
    for (size_t k = c_.size(); k-- > 0;)
        r = r * x + c_[k];
    return r;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1)
        return Poly{};
    std::vector<double> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k)
        d[k - 1] = static_cast<double>(k) * c_[k];
    return Poly(std::move(d));
}

void Poly::trim(double eps) {
    while (c_.size() > 1 && std::abs(c_.back()) <= eps)
        c_.pop_back();
    if (c_.empty())
        c_.push_back(0.0);
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
    return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
    std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (size_t k = 0; k < b.c_.size(); ++k) c[k] -= b.c_[k];
    return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero())
        return Poly{};
    std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j)
            c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
}

Poly operator*(double s, const Poly& p) {
    std::vector<double> c = p.c_;
    for (double& x : c) x *= s;
    return Poly(std::move(c));
}

std::pair<Poly, Poly> div_rem(const Poly& a, const Poly& b) {
    if (b.is_zero())
        throw DivisionByZeroPoly();
    std::vector<double> r = a.coeffs();
    const int db = b.degree();
    const int da = a.degree();
    if (da < db)
        return {Poly{}, a};
    std::vector<double> q(static_cast<size_t>(da - db) + 1, 0.0);
    const double lead = b.leading();
    for (int k = da; k >= db; --k) {
        double f = r[static_cast<size_t>(k)] / lead;
        q[static_cast<size_t>(k - db)] = f;
        if (f == 0.0)
            continue;
        for (int j = 0; j <= db; ++j)
            r[static_cast<size_t>(k - db + j)] -= f * b.coeff(j);
        r[static_cast<size_t>(k)] = 0.0;  // eliminated exactly
    }
    r.resize(static_cast<size_t>(std::max(db, 1)));
    Poly rem(std::move(r));
    return {Poly(std::move(q)), rem};
}

Poly lagrange(const std::vector<std::pair<double, double>>& points) {
    const size_t n = points.size();
    double scale = 0.0;
    for (const auto& [x, y] : points)
        scale = std::max(scale, std::abs(x));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (std::abs(points[i].first - points[j].first) <= 1e-12 * scale)
                throw DuplicateNode("lagrange: coincident interpolation nodes");
    Poly sum{};
    for (size_t i = 0; i < n; ++i) {
        Poly basis{1.0};
        double denom = 1.0;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            basis = basis * Poly{-points[j].first, 1.0};
            denom *= points[i].first - points[j].first;
        }
        sum = sum + (points[i].second / denom) * basis;
    }
    return sum;
}

} // namespace bkm
