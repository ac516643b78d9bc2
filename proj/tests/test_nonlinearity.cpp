#include <doctest.h>

#include <cmath>
#include <random>

#include "lelab/nonlinearity.hpp"

using namespace lelab;

TEST_CASE("g_eps closed-form values") {
    const ProblemParams p(0.5, 1.0, 1.0);
    CHECK(g_eps(0.0, p) == 0.0);
    CHECK(g_eps(0.0, p.with_epsilon(0.3)) == 0.0);
    CHECK(g_eps(4.0, p) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g_eps(4.0, p.with_epsilon(3.0)) == doctest::Approx(4.0 / std::pow(25.0, 0.75)).epsilon(1e-14));
    CHECK(g_eps(4.0, p.with_epsilon(3.0)) == doctest::Approx(0.357771).epsilon(1e-6));
}

TEST_CASE("g_eps sign, symmetry and global bound") {
    const ProblemParams p(0.3, 2.0, 2.0, 0.05);
    for (double s = -3.0; s <= 3.0; s += 0.013) {
        CHECK(g_eps(-s, p) == doctest::Approx(-g_eps(s, p)).epsilon(1e-14));
        if (s != 0.0) CHECK((g_eps(s, p) > 0) == (s > 0));
        CHECK(std::abs(g_eps(s, p)) <= 2.0 * std::pow(p.epsilon, p.q - 1.0) * (1 + 1e-12));
    }
}

TEST_CASE("g_eps converges pointwise away from 0") {
    const ProblemParams p(0.5, 1.0, 1.5);
    for (double s : {-2.0, -0.1, 1e-3, 0.5, 7.0}) {
        double prev = std::abs(g_eps(s, p.with_epsilon(1.0)) - g_eps(s, p));
        for (double e = 0.5; e > 1e-9; e *= 0.1) {
            const double err = std::abs(g_eps(s, p.with_epsilon(e)) - g_eps(s, p));
            CHECK(err <= prev + 1e-15);
            prev = err;
        }
        CHECK(prev < 1e-8 * std::abs(g_eps(s, p)) + 1e-12);
    }
}

TEST_CASE("scaling covariance g(cs; cε) = c^{q-1} g(s; ε)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-3, 3), C(0.1, 10), E(0.0, 1.0);
    const ProblemParams base(0.6, 1.0, 0.4);
    for (int i = 0; i < 500; ++i) {
        const double s = U(rng), c = C(rng), e = E(rng);
        const double lhs = g_eps(c * s, base.with_epsilon(c * e));
        const double rhs = std::pow(c, base.q - 1.0) * g_eps(s, base.with_epsilon(e));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
}

TEST_CASE("G_eps values and derivative") {
    const ProblemParams p(0.5, 1.0, 1.0, 0.01);
    CHECK(G_eps(0.0, p) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(G_eps(1.0, ProblemParams(0.5, 1.0, 0.0)) == doctest::Approx(2.0).epsilon(1e-15));
    const ProblemParams pe = p.with_epsilon(0.05);
    const double hs = 1e-6;
    const double fd = (G_eps(0.7 + hs, pe) - G_eps(0.7 - hs, pe)) / (2 * hs);
    CHECK(fd == doctest::Approx(g_eps(0.7, pe)).epsilon(1e-6));
    for (double s = -2; s <= 2; s += 0.1) CHECK(G_eps(s, pe) == doctest::Approx(G_eps(-s, pe)).epsilon(1e-14));
}

TEST_CASE("G_eps converges uniformly on bounded sets") {
    const ProblemParams p(0.5, 1.0, 1.0);
    double prev = 1e300;
    for (double e = 0.1; e > 1e-8; e *= 0.1) {
        double worst = 0.0;
        for (double s = -2; s <= 2; s += 0.001) worst = std::max(worst, std::abs(G_eps(s, p.with_epsilon(e)) - G_eps(s, p)));
        CHECK(worst < prev);
        prev = worst;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("g_eps_prime matches finite differences") {
    const ProblemParams p(0.4, 1.0, 2.0, 0.02);
    for (double s : {-1.0, -0.03, 0.0, 0.01, 0.2, 3.0}) {
        if (s == 0.0) continue;
        const double hs = 1e-7 * std::max(1e-2, std::abs(s));
        const double fd = (g_eps(s + hs, p) - g_eps(s - hs, p)) / (2 * hs);
        CHECK(g_eps_prime(s, p) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("F values") {
    const ProblemParams p(0.5, 1.0, 1.0);
    CHECK(F(0.0, p) == 0.0);
    CHECK(F(1.0, p) == doctest::Approx(1.0));
    CHECK(F(-0.25, ProblemParams(0.5, 3.0, 2.0)) == doctest::Approx(1.0));
    for (double s = -2; s <= 2; s += 0.05) {
        CHECK(F(s, p) >= 0.0);
        CHECK(F(s, p) == doctest::Approx(F(-s, p)));
    }
}

TEST_CASE("exponents") {
    CHECK(gamma_q(0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(gamma_q(2.0 / 3.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(gamma_q(1e-12) == doctest::Approx(1.0));
    double prev = 1.0;
    for (double q = 0.01; q < 1.0; q += 0.01) {
        CHECK(gamma_q(q) > prev);
        CHECK(gamma_q(q) < 2.0);
        CHECK(alpha_max(q) > 0.0);
        CHECK(alpha_max(q) < 1.0);
        prev = gamma_q(q);
    }
    CHECK_THROWS_AS(gamma_q(1.5), InvalidArgument);
    CHECK_THROWS_AS(gamma_q(0.0), InvalidArgument);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ProblemParams(1.5, 1, 1), InvalidArgument);
    CHECK_THROWS_AS(ProblemParams(0.5, -1, 1), InvalidArgument);
    CHECK_THROWS_AS(ProblemParams(0.5, 1, 1, -0.1), InvalidArgument);
    CHECK_NOTHROW(ProblemParams(0.5, 0, 0));
    CHECK(ProblemParams(0.5, 0, 0).harmonic());
}
