#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lelab/solver.hpp"

using namespace lelab;

namespace {

const ProblemParams one_phase(0.5, 1.0, 0.0);

ScalarField bump(const GridPtr& g) {
    return make_field(g, [](double x, double y) { return 0.1 * (1 - x * x - y * y); });
}

ScalarField scaled(const ScalarField& u, double t) {
    ScalarField v = u;
    for (double& x : v.values) x *= t;
    return v;
}

/// Golden-section minimum of t -> energy(t u) over log2 t in [-8, 8].
double best_scaling_energy(const ScalarField& u, const ProblemParams& p) {
    auto E = [&](double s) { return energy(scaled(u, std::exp2(s)), p); };
    double a = -8, b = 8;
    const double phi = (std::sqrt(5.0) - 1) / 2;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = E(c), fd = E(d);
    for (int i = 0; i < 80; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc; c = b - phi * (b - a); fc = E(c);
        } else {
            a = c; c = d; fc = fd; d = a + phi * (b - a); fd = E(d);
        }
    }
    return std::min(fc, fd);
}

}  // namespace

TEST_CASE("energy of the zero field") {
    auto g = build_disc(65);
    ScalarField z(g);
    const ProblemParams p(0.5, 1.0, 1.0);
    CHECK(energy(z, p) == 0.0);
    const double eps = 1e-2;
    const double expect = -static_cast<double>(g->interior_count()) * g->h * g->h * 2 * std::pow(eps, 0.5) / 0.5;
    CHECK(energy(z, p.with_epsilon(eps)) == doctest::Approx(expect).epsilon(1e-12));
    const double area_form = -std::numbers::pi * 2 * std::pow(eps, 0.5) / 0.5;
    CHECK(std::abs(energy(z, p.with_epsilon(eps)) - area_form) < 4 * g->h * std::abs(area_form));
}

TEST_CASE("energy along the scaling family has a negative minimum") {
    auto g = build_disc(65);
    const ProblemParams p(0.5, 1.0, 1.0);
    const auto u = make_field(g, [](double x, double y) { return std::sin(3 * x) * (1 - x * x - y * y); });
    double A = energy(u, ProblemParams(0.5, 0.0, 0.0));
    double B = A - energy(u, p);
    for (double t : {0.01, 0.1, 0.5, 2.0}) {
        CHECK(energy(scaled(u, t), p) == doctest::Approx(t * t * A - std::pow(t, 0.5) * B).epsilon(1e-10));
    }
    CHECK(best_scaling_energy(u, p) < 0.0);
}

TEST_CASE("harmonic case gives the discrete harmonic extension") {
    auto g = build_square(33, -0.5, -0.5, 1.0 / 32);
    auto data = make_field(g, [](double x, double y) { return x * x - y * y + 0.3 * x; });
    ScalarField u0 = data;
    for (int node : g->interior_nodes) u0.values[node] = 0.0;
    const ProblemParams p = ProblemParams(0.5, 0.0, 0.0).with_epsilon(1e-3);
    const auto u = minimize_fixed_eps(u0, p, SolverOptions{});
    for (int node : g->interior_nodes) CHECK(u[node] == doctest::Approx(data[node]).epsilon(1e-9));
    auto d = build_disc(65);
    const auto zero = minimize_fixed_eps(ScalarField(d), p, SolverOptions{});
    CHECK(zero.sup_norm() == 0.0);
}

TEST_CASE("one-phase fixed-eps minimizer") {
    auto g = build_disc(65);
    const ProblemParams p = one_phase.with_epsilon(1e-2);
    const auto u0 = bump(g);
    SolverOptions opt;
    SolveStats st;
    const auto u = minimize_fixed_eps(u0, p, opt, {}, &st);
    CHECK(st.residual <= opt.tol);
    CHECK(euler_lagrange_residual(u, p) <= opt.tol);
    for (int node : g->interior_nodes) CHECK(u[node] > 0.0);
    CHECK(energy(u, p) <= energy(u0, p));
    CHECK(energy(u, p) <= best_scaling_energy(u0, p) + 1e-12);
    CHECK(energy(u, p) < 0.0);
}

TEST_CASE("iteration cap raises with the last iterate") {
    auto g = build_disc(65);
    SolverOptions opt;
    opt.max_iterations = 1;
    try {
        minimize_fixed_eps(bump(g), one_phase.with_epsilon(1e-3), opt);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.residual > opt.tol);
        CHECK(e.last_iterate.values.size() == g->size());
    }
    CHECK_THROWS_AS(minimize_fixed_eps(bump(g), one_phase, opt), InvalidArgument);
}

TEST_CASE("continuation: harmonic and one-phase sequences") {
    auto g = build_disc(65);
    const auto harm = continuation(ProblemParams(0.5, 0.0, 0.0), halving_schedule(0.1, 4), ScalarField(g), SolverOptions{});
    REQUIRE(!harm.failed);
    for (const auto& e : harm.entries) CHECK(e.step_sup == 0.0);

    const auto seq = continuation(one_phase, halving_schedule(0.1, 12), bump(g), SolverOptions{});
    REQUIRE(!seq.failed);
    REQUIRE(seq.entries.size() == 13);
    for (std::size_t i = 0; i < seq.entries.size(); ++i) {
        CHECK(seq.entries[i].residual_inf <= 1e-8);
        CHECK(seq.entries[i].energy < 0.0);
        // the regularized energy increases as ε decreases
        if (i > 0) CHECK(seq.entries[i].energy >= seq.entries[i - 1].energy);
        if (i > 1) CHECK(seq.entries[i].step_h1 < seq.entries[i - 1].step_h1);
    }
    CHECK_THROWS_AS(continuation(one_phase, {0.1, 0.2}, bump(g), SolverOptions{}), InvalidArgument);
}

TEST_CASE("penalized minimization") {
    auto g = build_disc(65);
    const double eps = 1e-2;
    const auto u_bar = minimize_fixed_eps(bump(g), one_phase.with_epsilon(eps), SolverOptions{});
    const auto same = penalized_minimize(u_bar, one_phase, {eps}, SolverOptions{});
    REQUIRE(!same.failed);
    CHECK(same.last().f_sup <= 2e-8);

    const auto seq = continuation(one_phase, halving_schedule(0.1, 12), bump(g), SolverOptions{});
    const auto pen = penalized_minimize(seq.last().u, one_phase, halving_schedule(0.1, 12), SolverOptions{});
    REQUIRE(!pen.failed);
    for (const auto& e : pen.entries) {
        CHECK(e.f_sup <= 2.0 * std::pow(3.0, -0.25) / (1.0 + 1.0 / 3.0) + 1e-9);
        CHECK(e.residual_inf <= 1e-8);
    }
    CHECK(pen.entries.front().f_sup > 1e-3);
    CHECK(pen.last().penalty < 1e-3);
    CHECK(pen.last().penalty < pen.entries.front().penalty);
}

TEST_CASE("local refinement reproduces a smooth solution") {
    auto g = build_disc(129);
    const ProblemParams p = one_phase.with_epsilon(1e-3);
    const auto u = minimize_fixed_eps(bump(g), p, SolverOptions{});
    const auto z = refine_local(u, p, {0.1, 0.2}, 0.1, 65, 0.5, SolverOptions{});
    double worst = 0.0;
    for (int node : z.grid->interior_nodes) {
        const Point x = z.grid->point(node);
        worst = std::max(worst, std::abs(z[node] - bilinear(*g, u.values, x.x, x.y, true)));
    }
    CHECK(worst < 1e-3);
    CHECK(euler_lagrange_residual(z, p) <= 1e-8);
}
