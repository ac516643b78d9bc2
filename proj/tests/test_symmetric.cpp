#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lelab/symmetric.hpp"

using namespace lelab;

namespace {

const ProblemParams symmetric_params(0.5, 1.0, 1.0);

SolverOptions quick() {
    SolverOptions o;
    o.tol = 1e-9;
    return o;
}

}  // namespace

TEST_CASE("distances to the sector boundary and to the rays") {
    CHECK(distance_to_sector_boundary(0.5, 0.25, 2) == doctest::Approx(0.25));
    CHECK(distance_to_sector_boundary(0.0, 0.9, 2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(distance_to_rays(0.3, 0.0, 1) == doctest::Approx(0.0));
    CHECK(distance_to_rays(0.0, 0.4, 2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(distance_to_rays(0.3, 0.3, 2) == doctest::Approx(0.3));
}

TEST_CASE("k = 1 half-disc solution has negative energy and odd reflection symmetry") {
    const auto sched = halving_schedule(0.1, 4);
    const SectorResult r = solve_sector(1, symmetric_params, 65, sched, quick());
    REQUIRE_FALSE(r.sequence.failed);
    const ScalarField u = odd_reflect(r.sequence.last().u, 1);
    const ProblemParams pe = symmetric_params.with_epsilon(sched.back());
    CHECK(energy(u, pe) < 0.0);
    // odd in y, even in x
    const DiscGrid& g = *u.grid;
    double odd = 0.0, even = 0.0;
    for (int node : g.interior_nodes) {
        const int i = g.col(node), j = g.row(node);
        odd = std::max(odd, std::abs(u[node] + u[g.index(i, g.n - 1 - j)]));
        even = std::max(even, std::abs(u[node] - u[g.index(g.n - 1 - i, j)]));
    }
    CHECK(odd <= 1e-12);
    CHECK(even <= 1e-6);
    const SignPatternReport sp = check_sign_pattern(u, 1);
    CHECK(sp.checked > 0);
    CHECK(sp.violations == 0);
}

TEST_CASE("vanishing coefficients give the degenerate zero field") {
    const SectorResult r = solve_sector(2, ProblemParams(0.5, 0.0, 0.0), 65, halving_schedule(0.1, 2), quick());
    CHECK(r.degenerate);
    CHECK(r.sequence.last().u.sup_norm() == 0.0);
}

TEST_CASE("asymmetric coefficients are rejected") {
    CHECK_THROWS_AS(solve_sector(2, ProblemParams(0.5, 1.0, 2.0), 65, halving_schedule(0.1, 2), quick()),
                    InvalidArgument);
}

TEST_CASE("reflection of the zero field is zero") {
    const ScalarField z(build_sector(65, 3));
    CHECK(odd_reflect(z, 3).sup_norm() == 0.0);
}

TEST_CASE("k = 2 reflection is invariant under rotation by pi") {
    const GridPtr s = build_sector(65, 2);
    const ScalarField u = make_field(s, [](double x, double y) { return x * y * (1 - x * x - y * y) + 0.3 * x * x * y * y; });
    const ScalarField v = odd_reflect(u, 2);
    const DiscGrid& g = *v.grid;
    double worst = 0.0;
    for (int node : g.interior_nodes) {
        const int i = g.col(node), j = g.row(node);
        worst = std::max(worst, std::abs(v[node] - v[g.index(g.n - 1 - i, g.n - 1 - j)]));
    }
    CHECK(worst <= 1e-15);
}

TEST_CASE("odd extension of a harmonic function passes verification") {
    // u = y is harmonic and odd across the x-axis
    const GridPtr s = build_sector(65, 1);
    const ScalarField u = make_field(s, [](double, double y) { return y; });
    const ScalarField v = odd_reflect(u, 1);
    const ReflectionReport rep = verify_reflected_solution(v, ProblemParams(0.5, 0.0, 0.0, 1e-3), 1, 1e-10);
    CHECK(rep.off_ray_residual <= 1e-10);
    CHECK(rep.ray_residual <= 1e-10);
    CHECK(rep.pass);
}

TEST_CASE("an even reflection shows up in the ray residual") {
    const GridPtr g = build_disc(65);
    const ScalarField u = make_field(g, [](double, double y) { return std::abs(y); });
    const ReflectionReport rep = verify_reflected_solution(u, ProblemParams(0.5, 0.0, 0.0, 1e-3), 1, 1e-10);
    CHECK(rep.ray_residual > 1.0);
    CHECK(rep.off_ray_residual <= 1e-10);
}
