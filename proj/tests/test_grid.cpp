#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "lelab/field_io.hpp"
#include "lelab/grid.hpp"

using namespace lelab;
using std::numbers::pi;

namespace {

int count_lattice_in_disc(int n) {
    int c = 0;
    const double h = 2.0 / (n - 1);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x = -1 + i * h, y = -1 + j * h;
            if (x * x + y * y < 1 - 1e-12) ++c;
        }
    return c;
}

double slope(double e1, double e2, double h1, double h2) { return std::log(e1 / e2) / std::log(h1 / h2); }

}  // namespace

TEST_CASE("build_disc geometry") {
    auto g = build_disc(65);
    CHECK(g->h == doctest::Approx(0.03125));
    CHECK(g->x(32) == doctest::Approx(0.0));
    CHECK(g->interior(g->index(32, 32)));
    CHECK(static_cast<int>(g->interior_count()) == count_lattice_in_disc(65));
    CHECK(static_cast<int>(build_disc(33)->interior_count()) == count_lattice_in_disc(33));
    CHECK_THROWS_AS(build_disc(34), InvalidArgument);
    CHECK_THROWS_AS(build_disc(31), InvalidArgument);
    // every interior node has its stencil inside interior ∪ band
    for (int node : g->interior_nodes)
        for (int nb : {node - 1, node + 1, node - g->n, node + g->n}) CHECK(g->mask[nb] != NodeKind::Exterior);
}

TEST_CASE("build_sector geometry") {
    auto g1 = build_sector(65, 1);
    auto g2 = build_sector(65, 2);
    const int m = 32;
    CHECK(g1->interior(g1->index(m + 3, m + 1)));
    CHECK(!g1->interior(g1->index(m + 3, m)));
    CHECK(g2->interior(g2->index(m + 3, m + 4)));
    CHECK(!g2->interior(g2->index(m + 3, m - 4)));
    CHECK(!g2->interior(g2->index(m, m + 4)));
    int c = 0;
    for (int node : g1->interior_nodes)
        if (g1->col(node) > m) ++c;
    CHECK(static_cast<int>(g2->interior_count()) == c);
    auto g3 = build_sector(65, 3);
    for (int node : g3->interior_nodes) {
        const Point p = g3->point(node);
        const double th = std::atan2(p.y, p.x);
        CHECK(th > 0.0);
        CHECK(th < pi / 3);
        CHECK(std::hypot(p.x, p.y) < 1.0);
    }
    CHECK_THROWS_AS(build_sector(65, 0), InvalidArgument);
}

TEST_CASE("laplacian stencil exactness") {
    auto g = build_disc(65);
    auto c = make_field(g, [](double, double) { return 3.0; });
    auto q = make_field(g, [](double x, double y) { return x * x + y * y; });
    auto l = make_field(g, [](double x, double) { return x; });
    const auto lc = laplacian(c), lq = laplacian(q), ll = laplacian(l);
    for (int node : g->interior_nodes) {
        CHECK(std::abs(lc[node]) < 1e-9);
        CHECK(lq[node] == doctest::Approx(4.0).epsilon(1e-9));
        CHECK(std::abs(ll[node]) < 1e-9);
    }
}

TEST_CASE("circle integrals: closed forms") {
    auto g = build_disc(129);
    auto c = make_field(g, [](double, double) { return 0.7; });
    CHECK(circle_integral(c, {0.1, -0.2}, 0.4, Integrand::U2) == doctest::Approx(0.49 * 2 * pi * 0.4).epsilon(1e-10));
    auto x1 = make_field(g, [](double x, double) { return x; });
    const double h2 = g->h * g->h;
    CHECK(std::abs(circle_integral(x1, {0, 0}, 0.5, Integrand::U2) - pi / 8) < 10 * h2);
    CHECK(std::abs(circle_integral(x1, {0, 0}, 0.5, Integrand::Normal2) - pi / 2) < 10 * h2);
    CHECK_THROWS_AS(circle_integral(x1, {0.5, 0}, 0.6, Integrand::U2), DomainError);
    try {
        circle_integral(x1, {0.5, 0}, 0.6, Integrand::U2);
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()) == "radius out of domain");
    }
}

TEST_CASE("ball integrals: closed forms") {
    auto g = build_disc(129);
    auto x1 = make_field(g, [](double x, double) { return x; });
    CHECK(std::abs(ball_integral(x1, {0, 0}, 0.5, BallIntegrand::Grad2) - pi / 4) < 2 * g->h);
    auto z = ScalarField(g);
    CHECK(ball_integral(z, {0.1, 0.1}, 0.5, BallIntegrand::Grad2) == 0.0);
    auto one = make_field(g, [](double, double) { return 1.0; });
    const ProblemParams p(0.5, 1.0, 1.0);
    CHECK(std::abs(ball_integral(one, {0, 0}, 0.5, BallIntegrand::F, p) - pi / 4) < 2 * g->h);
}

TEST_CASE("refinement orders of the quadratures") {
    // harmonic, non-polynomial test field
    auto u = [](double x, double y) { return std::exp(x) * std::cos(y); };
    const Point c{0.1, 0.05};
    const double r = 0.5;
    double circ_ref = 0.0, grad_ref = 0.0, ball_ref = 0.0;
    const int M = 20000;
    for (int a = 0; a < M; ++a) {
        const double th = 2 * pi * (a + 0.5) / M;
        const double x = c.x + r * std::cos(th), y = c.y + r * std::sin(th);
        circ_ref += u(x, y) * u(x, y);
        grad_ref += std::exp(2 * x);  // |∇u|² = e^{2x}
    }
    circ_ref *= 2 * pi * r / M;
    grad_ref *= 2 * pi * r / M;
    const int R = 2000;
    for (int b = 0; b < R; ++b) {
        const double rho = r * (b + 0.5) / R;
        for (int a = 0; a < 400; ++a) {
            const double th = 2 * pi * (a + 0.5) / 400;
            ball_ref += std::exp(2 * (c.x + rho * std::cos(th))) * rho;
        }
    }
    ball_ref *= (r / R) * (2 * pi / 400);
    double ec[3], eg[3], eb[3], hs[3];
    int idx = 0;
    for (int n : {65, 129, 257}) {
        auto g = build_disc(n);
        auto f = make_field(g, u);
        FieldSampler S(f, ProblemParams{});
        const auto cm = S.circle(c, r);
        ec[idx] = std::abs(cm.u2 - circ_ref);
        eg[idx] = std::abs(cm.grad2 - grad_ref);
        eb[idx] = std::abs(S.ball(c, r).grad2 - ball_ref);
        hs[idx] = g->h;
        ++idx;
    }
    CHECK(slope(ec[0], ec[2], hs[0], hs[2]) >= 1.6);
    CHECK(slope(eg[0], eg[2], hs[0], hs[2]) >= 1.6);
    CHECK(slope(eb[0], eb[2], hs[0], hs[2]) >= 0.8);
}

TEST_CASE("rotate_k keeps circle integrals of R_k²-symmetric fields") {
    auto g = build_disc(129);
    // invariant under rotation by π
    auto f = make_field(g, [](double x, double y) { return x * x - 0.3 * x * y + 0.2 * y * y * y * y + 0.1; });
    const auto rf = rotate_k(f, 2);
    for (double r : {0.1, 0.15}) {
        const double a = circle_integral(f, {0, 0}, r, Integrand::U2);
        const double b = circle_integral(rf, {0, 0}, r, Integrand::U2);
        CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
    const auto back = rotate_k(rotate_k(rotate_k(rf, 2), 2), 2);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(back[i] == f[i]);
}

TEST_CASE("field dump round trip") {
    auto g = build_sector(65, 2);
    auto f = make_field(g, [](double x, double y) { return x * y; });
    const ProblemParams p(0.5, 1.0, 1.0, 1e-3);
    const auto stem = std::filesystem::temp_directory_path() / "lelab_roundtrip";
    const auto bin = write_field(stem, f, p);
    CHECK(std::filesystem::file_size(bin) == f.values.size() * 8);
    const auto back = read_field(stem);
    CHECK(back.field.grid->k == 2);
    CHECK(back.params.epsilon == p.epsilon);
    CHECK(back.field.values == f.values);
    CHECK(crc32_bytes("123456789", 9) == 0xCBF43926u);
}
