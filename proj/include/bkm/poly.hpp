#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

namespace bkm {

/// Dense real polynomial, coefficients stored in ascending degree:
/// coeffs[k] multiplies mu^k. The zero polynomial is the single coefficient 0.
class Poly {
public:
    Poly() : c_{0.0} {}
    Poly(std::initializer_list<double> coeffs) : c_(coeffs) { trim(0.0); }
    explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(0.0); }

    static Poly constant(double a) { return Poly{a}; }
    static Poly monomial(int degree, double a = 1.0);
    /// Monic polynomial with the given real roots.
    static Poly from_roots(const std::vector<double>& roots);

    const std::vector<double>& coeffs() const { return c_; }
    double coeff(int k) const { return k < static_cast<int>(c_.size()) ? c_[static_cast<size_t>(k)] : 0.0; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.size() == 1 && c_[0] == 0.0; }
    double leading() const { return c_.back(); }

    double eval(double x) const;
    Poly derivative() const;

    /// Drop trailing coefficients with |coeff| <= eps (always keeps one entry).
    void trim(double eps);

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(double s, const Poly& p);
    bool operator==(const Poly& o) const { return c_ == o.c_; }

private:
    std::vector<double> c_;
};

/// Division with remainder: a = b*q + r, deg r < deg b. Throws DivisionByZeroPoly.
std::pair<Poly, Poly> div_rem(const Poly& a, const Poly& b);

/// Unique interpolant of degree < #points. Nodes must be pairwise distinct
/// within 1e-12 * max|node|; throws DuplicateNode otherwise.
Poly lagrange(const std::vector<std::pair<double, double>>& points);

} // namespace bkm
