#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bkm/operators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace bkm;

namespace {

VectorXd ev(std::initializer_list<double> xs) {
    VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

} // namespace

TEST_CASE("char_poly reads off the first column") {
    CHECK(char_poly({2, ev({3.0, -2.0}), CompanionMatrix::Sign::MinusW}) ==
          Poly{-2.0, 3.0, 1.0});
    CHECK(char_poly({1, ev({5.0}), CompanionMatrix::Sign::PlusU}) == Poly{-5.0, 1.0});
    CHECK(char_poly({4, ev({0.0, 0.0, 0.0, 0.0}), CompanionMatrix::Sign::MinusW}) ==
          Poly{0.0, 0.0, 0.0, 0.0, 1.0});
}

TEST_CASE("realized companion matches its characteristic polynomial") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> cd(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> nd(1, 6);
        const int N = nd(rng);
        VectorXd w(N);
        for (int i = 0; i < N; ++i)
            w(i) = cd(rng);
        const Poly cp = char_poly_w(w);
        const MatrixXd M = CompanionMatrix{N, w, CompanionMatrix::Sign::MinusW}.realize();
        Eigen::EigenSolver<MatrixXd> es(M);  // dense eigenvalue oracle
        for (int i = 0; i < N; ++i) {
            const std::complex<double> z = es.eigenvalues()(i);
            std::complex<double> val = 0.0;
            for (int k = cp.degree(); k >= 0; --k)
                val = val * z + cp.coeff(k);
            CHECK(std::abs(val) <= 1e-8);
        }
    }
}

TEST_CASE("zeta examples") {
    // n=1, constant m
    CHECK(zeta(ev({0.7}), Poly{2.0}, Chart::FirstCompanion)(0) == doctest::Approx(2.0));
    // n=2, m=1: FirstCompanion gives (0,+1); the KbForm chart mate is (0,-1)
    const VectorXd z_fc = zeta(ev({0.3, -0.5}), Poly{1.0}, Chart::FirstCompanion);
    CHECK(z_fc(0) == doctest::Approx(0.0));
    CHECK(z_fc(1) == doctest::Approx(1.0));
    const VectorXd z_kb = zeta(ev({0.3, -0.5}), Poly{1.0}, Chart::KbForm);
    CHECK(z_kb(0) == doctest::Approx(0.0));
    CHECK(z_kb(1) == doctest::Approx(-1.0));
    // n=3, m = mu^3
    const VectorXd z3 = zeta(ev({1.5, -2.0, 0.25}), Poly{0.0, 0.0, 0.0, 1.0},
                             Chart::FirstCompanion);
    CHECK(z3(0) == doctest::Approx(1.5));
    CHECK(z3(1) == doctest::Approx(-2.0));
    CHECK(z3(2) == doctest::Approx(0.25));
}

TEST_CASE("zeta satisfies the defining Lie-derivative identity") {
    // directional derivative of sigma(mu,u) along zeta equals m_n sigma(mu,u) - m(mu)
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> nd(1, 4);
        const int n = nd(rng);
        VectorXd u(n);
        for (int i = 0; i < n; ++i)
            u(i) = cd(rng);
        std::vector<double> mc(static_cast<size_t>(n) + 1);
        for (auto& x : mc)
            x = cd(rng);
        const Poly m(std::move(mc));
        const double mu = 2.0 * cd(rng);
        for (Chart chart : {Chart::FirstCompanion, Chart::KbForm}) {
            const VectorXd z = zeta(u, m, chart);
            const double h = 1e-6;
            const double plus = sigma_poly(u + h * z, chart).eval(mu);
            const double minus = sigma_poly(u - h * z, chart).eval(mu);
            const double lie = (plus - minus) / (2.0 * h);
            const double want = m.coeff(n) * sigma_poly(u, chart).eval(mu) - m.eval(mu);
            CHECK(std::abs(lie - want) <= 1e-7);
        }
    }
}

TEST_CASE("m_lambda examples") {
    // N=1: d(mu) = 1, so M_lambda = -1 for every lambda
    CHECK(m_lambda(ev({0.4}), 2.7)(0, 0) == doctest::Approx(-1.0));

    // N=2, eigenvalues +-1, lambda at the eigenvalue 1: continuous quotient -(M+I)
    const VectorXd w = ev({0.0, -1.0});
    const MatrixXd ML = m_lambda(w, 1.0);
    const MatrixXd M = CompanionMatrix{2, w, CompanionMatrix::Sign::MinusW}.realize();
    CHECK((ML + (M + MatrixXd::Identity(2, 2))).norm() == doctest::Approx(0.0));

    // w(lambda) = 0 makes the result singular but finite
    CHECK(std::abs(ML.determinant()) <= 1e-14);
    CHECK(ML.allFinite());
}

TEST_CASE("m_infinity") {
    const MatrixXd A = m_infinity(ev({0.7, -0.3}));
    CHECK(A(0, 0) == doctest::Approx(0.0));
    CHECK(A(0, 1) == doctest::Approx(1.0));
    CHECK(A(1, 0) == doctest::Approx(0.3));
    CHECK(A(1, 1) == doctest::Approx(0.7));
    CHECK(m_infinity(ev({1.3})).norm() == doctest::Approx(0.0));
    const VectorXd w3 = ev({1.0, 0.0, 0.0});
    const MatrixXd M3 = CompanionMatrix{3, w3, CompanionMatrix::Sign::MinusW}.realize();
    CHECK((m_infinity(w3) - (M3 + MatrixXd::Identity(3, 3))).norm() == doctest::Approx(0.0));
}

TEST_CASE("resolvent identity (M - lambda Id) M_lambda = w(lambda) Id") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> cd(-2.0, 2.0);
    int used = 0;
    while (used < 1000) {
        std::uniform_int_distribution<int> nd(1, 6);
        const int N = nd(rng);
        VectorXd w(N);
        for (int i = 0; i < N; ++i)
            w(i) = cd(rng);
        const double lambda = 1.5 * cd(rng);
        // skip lambdas within 1e-6 of the spectrum
        const MatrixXd M = CompanionMatrix{N, w, CompanionMatrix::Sign::MinusW}.realize();
        Eigen::EigenSolver<MatrixXd> es(M);
        bool close = false;
        for (int i = 0; i < N; ++i)
            if (std::abs(es.eigenvalues()(i) - std::complex<double>(lambda, 0.0)) < 1e-6)
                close = true;
        if (close)
            continue;
        ++used;
        const double wl = char_poly_w(w).eval(lambda);
        const MatrixXd lhs = (M - lambda * MatrixXd::Identity(N, N)) * m_lambda(w, lambda);
        const MatrixXd want = wl * MatrixXd::Identity(N, N);
        CHECK((lhs - want).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + std::abs(wl)));
    }
}

TEST_CASE("sigma and l_operator agree across charts") {
    const VectorXd u = ev({0.4, -1.1});
    // FirstCompanion: sigma = mu^2 - u1 mu - u2 with +u in column 1
    CHECK(sigma_poly(u, Chart::FirstCompanion) == Poly{1.1, -0.4, 1.0});
    CHECK(sigma_poly(u, Chart::KbForm) == Poly{-1.1, 0.4, 1.0});
    const MatrixXd Lf = l_operator(u, Chart::FirstCompanion);
    CHECK(Lf(0, 0) == doctest::Approx(0.4));
    CHECK(Lf(1, 0) == doctest::Approx(-1.1));
    const MatrixXd Lk = l_operator(u, Chart::KbForm);
    CHECK(Lk(0, 0) == doctest::Approx(-0.4));
    // both realizations have the chart's sigma as characteristic polynomial
    Eigen::EigenSolver<MatrixXd> es(Lk);
    for (int i = 0; i < 2; ++i) {
        const std::complex<double> z = es.eigenvalues()(i);
        std::complex<double> val = 0.0;
        const Poly s = sigma_poly(u, Chart::KbForm);
        for (int k = s.degree(); k >= 0; --k)
            val = val * z + s.coeff(k);
        CHECK(std::abs(val) <= 1e-10);
    }
}
