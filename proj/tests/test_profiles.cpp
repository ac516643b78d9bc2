#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lelab/nodal.hpp"
#include "lelab/profiles.hpp"

using namespace lelab;

namespace {

const ProblemParams unit(0.5, 1.0, 1.0);

}  // namespace

TEST_CASE("hamiltonian values") {
    CHECK(hamiltonian(0.0, 1.0, unit) == doctest::Approx(0.5));
    CHECK(hamiltonian(0.0625, 0.0, unit) == doctest::Approx(0.5));
    CHECK(hamiltonian(-0.0625, 0.0, unit) == doctest::Approx(0.5));
    CHECK(hamiltonian(0.0, 0.0, unit) == 0.0);
    CHECK(hamiltonian(0.3, -0.2, unit) > 0.0);
}

TEST_CASE("first turning point from (0, 1)") {
    const TurningPoint tp = first_turning_point(0.0, 1.0, unit);
    CHECK(std::abs(tp.w - 0.0625) <= 1e-10);
    // w' = 1 - t/0.5·... integrates to t = 2/3·(2·0.0625)/1
    CHECK(tp.t == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("trajectory conserves the hamiltonian across many crossings") {
    for (double q : {0.3, 0.5, 0.7}) {
        const Trajectory1D tr = integrate_1d(0.0, 1.0, ProblemParams(q, 1.0, 1.0), 5.0, 1e-4, 100);
        CHECK(tr.max_drift <= 1e-9);
        CHECK(tr.t.back() == doctest::Approx(5.0));
        CHECK(tr.t.size() == 501);
    }
    const Trajectory1D big = integrate_1d(0.5, -3.0, unit, 20.0, 1e-3, 10);
    CHECK(big.max_drift <= 1e-8);
    CHECK(big.layers > 0);
}

TEST_CASE("trivial and free trajectories") {
    const Trajectory1D z = integrate_1d(0.0, 0.0, unit, 1.0, 0.1);
    CHECK(z.trivial);
    for (double w : z.w) CHECK(w == 0.0);
    const Trajectory1D f = integrate_1d(0.3, 2.0, ProblemParams(0.5, 0.0, 0.0), 10.0, 1e-2, 100);
    for (std::size_t i = 0; i < f.t.size(); ++i) CHECK(f.w[i] == doctest::Approx(0.3 + 2.0 * f.t[i]).epsilon(1e-13));
    CHECK_THROWS_AS(integrate_1d(0.0, 1.0, ProblemParams(1.5, 1.0, 1.0), 1.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(integrate_1d(0.0, 1.0, unit, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("trajectories from the origin never return to rest") {
    const NoProfileReport r = verify_no_1d_singular_profile(unit, {1.0, 1e-3, 0.0, 10.0});
    REQUIRE(r.slopes.size() == 3);
    CHECK(r.pass);
    CHECK(r.min_H[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.min_H[1] == doctest::Approx(5e-7).epsilon(1e-9));
    // period of the unit slope: four quarter-arcs of 1/6
    CHECK(r.period[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK_THROWS_AS(verify_no_1d_singular_profile(ProblemParams(0.5, 1.0, 0.0), {1.0}), InvalidArgument);
}

TEST_CASE("angular profile for k = 2 and its independent oracle") {
    const AngularProfile a = angular_shoot(2, unit);
    CHECK(a.mu == doctest::Approx(1.54403430951689).epsilon(1e-9));
    CHECK(a.collocation_defect <= 1e-8);
    CHECK(a.periodicity_residual <= 1e-8);
    CHECK(a.energy_defect <= 1e-8);
    CHECK(a.sign_changes == 4);
    CHECK(a.brackets.size() == 1);
    CHECK(a.phi.size() == 2048);
    CHECK(a.phi[256] == doctest::Approx(1.0).epsilon(1e-9));
    // dihedral symmetry: φ(θ + π/2) = -φ(θ), φ(π/2 - θ) = φ(θ)
    for (int i = 0; i < 512; ++i) {
        CHECK(std::abs(a.phi[i + 512] + a.phi[i]) <= 1e-9);
        CHECK(std::abs(a.phi[512 - i] - a.phi[i]) <= 1e-9);
    }
    const RelaxationProfile r = richardson(angular_relax(2, unit, 2048), angular_relax(2, unit, 4096), 0.5);
    double sup = 0.0;
    for (std::size_t i = 0; i < r.phi.size(); ++i) sup = std::max(sup, std::abs(r.phi[i] - a.phi[i]));
    CHECK(sup <= 1e-5);
    CHECK(r.mu == doctest::Approx(a.mu).epsilon(1e-5));
}

TEST_CASE("scaling covariance of the angular equation") {
    const AngularProfile a = angular_shoot(2, unit);
    const CollocationDefect base = collocation_defect(a.phi, a.phip, a.mu, 0.5, 1.0, 16);
    for (double c : {0.25, 3.0}) {
        std::vector<double> phi = a.phi, phip = a.phip;
        for (double& v : phi) v *= c;
        for (double& v : phip) v *= c;
        const CollocationDefect sc = collocation_defect(phi, phip, a.mu * std::pow(c, 1.5), 0.5, 1.0, 16);
        CHECK(std::abs(sc.defect - base.defect) <= 1e-10);
        CHECK(std::abs(sc.energy - base.energy) <= 1e-10);
    }
}

TEST_CASE("bracket failures") {
    // k = 1 would need a quarter period longer than the linear one
    CHECK_THROWS_AS(angular_shoot(1, unit), DomainError);
    // linear problem: γ = 4/3 is not an integer
    CHECK_THROWS_AS(angular_shoot(2, ProblemParams(0.5, 0.0, 0.0)), DomainError);
    CHECK_THROWS_AS(angular_shoot(2, ProblemParams(0.5, 1.0, 2.0)), InvalidArgument);
}

TEST_CASE("synthetic homogeneous field round trip") {
    const AngularProfile a = angular_shoot(2, unit);
    const ScalarField u = make_field(build_disc(129), [&](double x, double y) {
        const double r = std::hypot(x, y);
        return r == 0 ? 0.0 : std::pow(r, a.gamma) * a.evaluate(std::atan2(y, x));
    });
    const FieldSampler s(u, unit.with_epsilon(0.0));
    const VanishingOrder vo = vanishing_order(s, {0, 0}, 4 * s.h(), 0.5);
    CHECK(vo.beta == doctest::Approx(a.gamma).epsilon(0.05 / a.gamma));
    CHECK(vo.cls == OrderClass::Gamma);
    const BlowupSequence b = blowup(s, {0, 0}, {0.5, 0.25, 0.125}, a.gamma);
    for (double d : b.delta) CHECK(d <= 3 * s.h());
    const NodalSet ns = extract_nodal(s, default_tau_grad(s));
    REQUIRE_FALSE(ns.singular_clusters.empty());
    CHECK(std::hypot(ns.singular_clusters[0].x.x, ns.singular_clusters[0].x.y) <= 2 * s.h());
}
