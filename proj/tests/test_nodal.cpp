#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lelab/nodal.hpp"

using namespace lelab;

namespace {

const ProblemParams params(0.5, 1.0, 1.0);
const double gam = gamma_q(0.5);

ScalarField homogeneous(int n) {
    return make_field(build_disc(n), [](double x, double y) {
        const double r = std::hypot(x, y);
        return r == 0 ? 0.0 : std::pow(r, gam) * std::sin(2 * std::atan2(y, x));
    });
}

}  // namespace

TEST_CASE("least-squares line") {
    const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_line({1.0}, {1.0}), InvalidArgument);
}

TEST_CASE("scaled norm of a linear field") {
    // ∫_B |∇x|² = πr², (1/r)∫_S x² = πr²
    const FieldSampler s(make_field(build_disc(257), [](double x, double) { return x; }), params);
    CHECK(scaled_norm(s, {0, 0}, 0.5) == doctest::Approx(std::sqrt(2 * std::numbers::pi * 0.25)).epsilon(2e-3));
}

TEST_CASE("nodal set of a linear field is one regular line") {
    const FieldSampler s(make_field(build_disc(65), [](double x, double y) { return x - 0.01 + 0 * y; }), params);
    const NodalSet ns = extract_nodal(s, default_tau_grad(s));
    REQUIRE(ns.segments.size() == 1);
    for (const Point& p : ns.segments[0]) CHECK(p.x == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(ns.singular_points.empty());
    CHECK_FALSE(ns.regular_points.empty());
}

TEST_CASE("crossing lines produce one singular cluster at the origin") {
    const FieldSampler s(make_field(build_disc(65), [](double x, double y) { return x * y; }), params);
    const NodalSet ns = extract_nodal(s, default_tau_grad(s));
    REQUIRE(ns.singular_clusters.size() == 1);
    CHECK(std::hypot(ns.singular_clusters[0].x.x, ns.singular_clusters[0].x.y) <= 2 * s.h());
    CHECK(ns.segments.size() >= 2);
}

TEST_CASE("vanishing order distinguishes one, gamma and degenerate") {
    const FieldSampler lin(make_field(build_disc(129), [](double x, double) { return x; }), params);
    const VanishingOrder a = vanishing_order(lin, {0, 0}, 0.05, 0.4);
    CHECK(a.beta == doctest::Approx(1.0).epsilon(0.02));
    CHECK(a.cls == OrderClass::One);

    const FieldSampler hom(homogeneous(129), params);
    const VanishingOrder b = vanishing_order(hom, {0, 0}, 0.05, 0.4);
    CHECK(b.beta == doctest::Approx(gam).epsilon(0.03));
    CHECK(b.cls == OrderClass::Gamma);
    CHECK(b.fit_r2 >= 0.99);

    const FieldSampler zero(ScalarField(build_disc(65)), params);
    CHECK(vanishing_order(zero, {0, 0}, 0.1, 0.4).cls == OrderClass::Degenerate);
    CHECK_THROWS_AS(vanishing_order(lin, {0, 0}, 0.4, 0.1), InvalidArgument);
    CHECK(to_string(OrderClass::Gamma) == "gamma");
}

TEST_CASE("homogeneous field is non-degenerate at its order") {
    const FieldSampler hom(homogeneous(129), params);
    const Nondegeneracy nd = nondegeneracy(hom, {0, 0}, gam, 0.05, 0.4);
    CHECK(nd.ratio >= 0.9);
}

TEST_CASE("blow-up of a homogeneous field is stationary") {
    const FieldSampler hom(homogeneous(257), params);
    const BlowupSequence b = blowup(hom, {0, 0}, {0.5, 0.25, 0.125, 0.0625}, gam);
    REQUIRE(b.delta.size() == 4);
    for (double d : b.delta) CHECK(d <= 3 * hom.h());
    for (double v : b.unit_norm) CHECK(v == doctest::Approx(1.0).epsilon(5e-3));
    // α_r is scale-free for an exactly homogeneous field
    for (double a : b.alpha) CHECK(a == doctest::Approx(b.alpha[0]).epsilon(2e-2));
    CHECK_THROWS_AS(blowup(hom, {0, 0}, {0.5, 0.01}, gam), InvalidArgument);
}

TEST_CASE("level-set area fractions detect a dead core") {
    const ScalarField lin = make_field(build_disc(129), [](double x, double) { return x; });
    const DeadCoreReport a = dead_core_check(lin, default_dead_core_deltas(lin));
    CHECK(a.slope == doctest::Approx(1.0).epsilon(0.05));
    CHECK(a.pass);

    const ScalarField flat = make_field(build_disc(129), [](double x, double) {
        return std::max(x - 0.3, 0.0) - std::max(-x - 0.3, 0.0);
    });
    const DeadCoreReport b = dead_core_check(flat, default_dead_core_deltas(flat));
    CHECK(b.slope < 0.9);
    CHECK_FALSE(b.pass);

    const ScalarField zero(build_disc(65));
    const DeadCoreReport c = dead_core_check(zero, {0.1, 0.05});
    CHECK(c.trivial);
    CHECK_FALSE(c.pass);
}
