#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bkm/errors.hpp"
#include "bkm/poly.hpp"

#include <cmath>
#include <random>

using namespace bkm;

namespace {

Poly random_poly(std::mt19937& rng, int max_deg) {
    std::uniform_int_distribution<int> dd(0, max_deg);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    const int d = dd(rng);
    std::vector<double> c(static_cast<size_t>(d) + 1);
    for (auto& x : c)
        x = cd(rng);
    if (std::abs(c.back()) < 1e-3)
        c.back() = 1.0;
    return Poly(std::move(c));
}

} // namespace

TEST_CASE("eval") {
    CHECK(Poly{-1.0, 0.0, 1.0}.eval(1.0) == doctest::Approx(0.0));
    // (mu-1)^2 mu^2 (mu+1)^2 expanded
    const Poly p{0.0, 0.0, 1.0, 0.0, -2.0, 0.0, 1.0};
    CHECK(p.eval(2.0) == doctest::Approx(36.0));
    CHECK(Poly{1.0}.eval(7.3) == doctest::Approx(1.0));
}

TEST_CASE("mul / add / derivative") {
    CHECK((Poly{-1.0, 1.0} * Poly{1.0, 1.0}) == Poly{-1.0, 0.0, 1.0});
    CHECK(Poly{0.0, 0.0, 1.0, 0.0, -2.0, 0.0, 1.0}.derivative() ==
          Poly{0.0, 2.0, 0.0, -8.0, 0.0, 6.0});
    // exact cancellation trims back to the zero polynomial
    const Poly z = Poly{0.0, 0.0, 1.0} + Poly{0.0, 0.0, -1.0};
    CHECK(z.is_zero());
    CHECK(z.degree() == 0);
}

TEST_CASE("div_rem examples") {
    {
        auto [q, r] = div_rem(Poly{-1.0, 0.0, 1.0}, Poly{-1.0, 1.0});
        CHECK(q == Poly{1.0, 1.0});
        CHECK(r.is_zero());
    }
    {
        auto [q, r] = div_rem(Poly{0.0, 0.0, 0.0, 1.0}, Poly{1.0, 0.0, 1.0});
        CHECK(q == Poly{0.0, 1.0});
        CHECK(r == Poly{0.0, -1.0});
    }
    {
        // dividing c by the characteristic factor with eigenvalues +-1
        auto [q, r] = div_rem(Poly{0.0, 0.0, 1.0, 0.0, -2.0, 0.0, 1.0}, Poly{-1.0, 0.0, 1.0});
        CHECK(q == Poly{0.0, 0.0, -1.0, 0.0, 1.0});
        for (double c : r.coeffs())
            CHECK(std::abs(c) < 1e-14);
    }
    CHECK_THROWS_AS(div_rem(Poly{1.0, 1.0}, Poly{}), DivisionByZeroPoly);
}

TEST_CASE("lagrange examples") {
    CHECK(lagrange({{0.0, 1.0}, {1.0, 2.0}}) == Poly{1.0, 1.0});
    {
        const Poly p = lagrange({{-1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}});
        CHECK(p.coeff(0) == doctest::Approx(0.0));
        CHECK(p.coeff(1) == doctest::Approx(0.0));
        CHECK(p.coeff(2) == doctest::Approx(1.0));
    }
    CHECK(lagrange({{2.0, 36.0}}) == Poly{36.0});
    CHECK_THROWS_AS(lagrange({{1.0, 0.0}, {1.0 + 1e-14, 1.0}}), DuplicateNode);
}

TEST_CASE("div_rem recombination property") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const Poly a = random_poly(rng, 10);
        Poly b = random_poly(rng, 7);
        {
            // keep the divisor well scaled so the quotient stays bounded
            auto c = b.coeffs();
            c.back() = c.back() < 0.0 ? -1.0 : 1.0;
            b = Poly(std::move(c));
        }
        auto [q, r] = div_rem(a, b);
        const Poly back = b * q + r;
        double amax = 1.0;
        for (double ak : a.coeffs())
            amax = std::max(amax, std::abs(ak));
        for (int k = 0; k <= a.degree(); ++k)
            CHECK(std::abs(back.coeff(k) - a.coeff(k)) <= 1e-12 * amax * 4.0);
        CHECK(r.degree() < std::max(b.degree(), 1));
    }
}

TEST_CASE("eval is multiplicative") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> xd(-1.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const Poly a = random_poly(rng, 10);
        const Poly b = random_poly(rng, 10);
        const double x = xd(rng);
        const double lhs = (a * b).eval(x);
        const double rhs = a.eval(x) * b.eval(x);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("lagrange reproduces sampled polynomials") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> dd(0, 6);
        const int d = dd(rng);
        std::vector<double> coef(static_cast<size_t>(d) + 1);
        for (auto& c : coef)
            c = cd(rng);
        if (std::abs(coef.back()) < 1e-3)
            coef.back() = 0.5;
        const Poly p{std::vector<double>(coef)};
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i <= d; ++i)
            pts.emplace_back(-1.0 + 2.0 * i / std::max(d, 1) + 0.01 * cd(rng), 0.0);
        for (auto& [x, y] : pts)
            y = p.eval(x);
        const Poly back = lagrange(pts);
        for (int k = 0; k <= d; ++k)
            CHECK(std::abs(back.coeff(k) - p.coeff(k)) <=
                  1e-9 * std::max(1.0, std::abs(p.coeff(k))));
    }
}

TEST_CASE("from_roots and monomial") {
    CHECK(Poly::from_roots({1.0, -1.0, 0.0}) == Poly{0.0, -1.0, 0.0, 1.0});
    CHECK(Poly::monomial(3).eval(2.0) == doctest::Approx(8.0));
}
