#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "lelab/monotonicity.hpp"

using namespace lelab;

namespace {

const ProblemParams linear(0.5, 0.0, 0.0);

ScalarField field_on(int n, double (*fn)(double, double)) {
    return make_field(build_disc(n), fn);
}

double x1(double x, double) { return x; }
double x1x2(double x, double y) { return x * y; }
double re_z3(double x, double y) { return x * x * x - 3 * x * y * y; }
double constant(double, double) { return 0.7; }

}  // namespace

TEST_CASE("linear field has unit frequency and vanishing Weiss energy at gamma = 1") {
    const ScalarField u = field_on(129, x1);
    const FieldSampler s(u, linear);
    const FrequencyScan sc = scan(s, {0, 0}, {0.2, 0.4, 0.6}, {0.0}, {{1.0, 0.0}});
    for (const RadiusRecord& rec : sc.records) {
        CHECK(rec.H == doctest::Approx(std::numbers::pi * std::pow(rec.r, 3)).epsilon(1e-3));
        CHECK(rec.N[0] == doctest::Approx(1.0).epsilon(5e-3));
        CHECK(std::abs(rec.W[0]) <= 1e-2 * rec.H / std::pow(rec.r, 3));
        CHECK(rec.w_identity <= 1e-10);
    }
}

TEST_CASE("zero field is degenerate") {
    const ScalarField u(build_disc(65));
    const FieldSampler s(u, linear);
    const FrequencyScan sc = scan(s, {0, 0}, {0.3}, default_t_list(0.5), default_gt_pairs(0.5));
    REQUIRE(sc.records.size() == 1);
    CHECK(sc.records[0].degenerate);
    CHECK(std::isnan(sc.records[0].N[0]));
}

TEST_CASE("H-derivative controls converge at second order") {
    std::vector<double> lin, cst;
    for (int n : {65, 129, 257}) {
        const double h = 2.0 / (n - 1);
        const FieldSampler a(field_on(n, x1), linear);
        const FieldSampler b(field_on(n, constant), linear);
        lin.push_back(dH_residual(a, {0, 0}, 0.5, h));
        cst.push_back(dH_residual(b, {0, 0}, 0.5, h));
    }
    const double rate = std::log2(lin[1] / lin[2]);
    CHECK(rate >= 1.6);
    CHECK(lin[2] <= 1e-3);
    for (double v : cst) CHECK(v <= 1e-12);
}

TEST_CASE("Pohozaev and D-derivative identities hold for a harmonic linear field") {
    const ScalarField u = field_on(257, x1);
    const FieldSampler s(u, linear);
    for (double r : {0.2, 0.4, 0.6}) {
        CHECK(std::abs(pohozaev_residual(s, {0, 0}, r)) <= 1e-3);
        CHECK(std::abs(dD_residual(s, {0, 0}, r, 0.5, s.h())) <= 5e-3);
        CHECK(std::abs(divergence_residual(s, {0, 0}, r, 0.0)) <= 1e-3);
    }
}

TEST_CASE("frequency of homogeneous harmonic polynomials equals the degree and is monotone") {
    struct Case {
        double (*fn)(double, double);
        double degree;
    };
    for (const Case& c : {Case{x1, 1.0}, Case{x1x2, 2.0}, Case{re_z3, 3.0}}) {
        const FieldSampler s(field_on(129, c.fn), linear);
        const FrequencyScan sc = scan(s, {0, 0}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}, {0.0}, {});
        double last = 0.0;
        for (const RadiusRecord& rec : sc.records) {
            CHECK(rec.N[0] == doctest::Approx(c.degree).epsilon(2e-2));
            CHECK(rec.N[0] >= last - 2e-2);
            last = rec.N[0];
        }
    }
}

TEST_CASE("scan CSV header lists every column") {
    const FieldSampler s(field_on(65, x1), linear);
    const FrequencyScan sc = scan(s, {0, 0}, {0.3}, {0.0, 0.5}, {{1.0, 0.5}});
    std::ostringstream os;
    write_scan_csv(os, sc);
    const std::string text = os.str();
    CHECK(text.rfind("r,H,D_t0,D_t0.5,N_t0,N_t0.5,W_g1_t0.5,poh_res,dH_res,dD_res\n", 0) == 0);
}
