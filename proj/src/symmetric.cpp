#include "lelab/symmetric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lelab {

namespace {

constexpr double kPi = std::numbers::pi;

/// Distance from a point at polar angle phi (relative to a ray) to that ray.
double ray_distance(double rho, double phi) {
    phi = std::remainder(phi, 2.0 * kPi);
    return std::abs(phi) >= kPi / 2 ? rho : rho * std::abs(std::sin(phi));
}

double polar_angle(double x, double y) {
    double th = std::atan2(y, x);
    if (th < 0.0) th += 2.0 * kPi;
    return th;
}

}  // namespace

double distance_to_sector_boundary(double x, double y, int k) {
    DiscGrid g;
    g.shape = Shape::Sector;
    g.k = k;
    return boundary_distance(g, {x, y});
}

double distance_to_rays(double x, double y, int k) {
    const double rho = std::hypot(x, y);
    const double th = polar_angle(x, y);
    const double w = kPi / k;
    const double j = std::floor(th / w);
    return std::min(ray_distance(rho, th - j * w), ray_distance(rho, th - (j + 1) * w));
}

SectorResult solve_sector(int k, const ProblemParams& p, int n, const std::vector<double>& schedule,
                          const SolverOptions& opt) {
    if (k < 1) throw InvalidArgument("sector order k must be >= 1");
    if (p.lambda_plus != p.lambda_minus) {
        throw InvalidArgument("sector construction requires lambda_plus == lambda_minus");
    }
    GridPtr g = build_sector(n, k);
    SectorResult out;
    if (p.harmonic()) {
        out.degenerate = true;
        out.sequence.params = p;
        ApproximationEntry e;
        e.epsilon = schedule.empty() ? 0.0 : schedule.back();
        e.u = ScalarField(g);
        e.f = ScalarField(g);
        out.sequence.entries.push_back(std::move(e));
        return out;
    }
    static constexpr double amplitudes[] = {0.1, 0.3, 0.03, 1.0, 0.01};
    std::string last_failure = "positivity failed";
    for (int seed = 0; seed < 5; ++seed) {
        const double a = amplitudes[seed];
        auto u0 = make_field(g, [&](double x, double y) {
            const double rho2 = x * x + y * y;
            return a * std::abs(std::sin(k * std::atan2(y, x))) * (1.0 - rho2);
        });
        for (int node = 0; node < static_cast<int>(g->size()); ++node) {
            if (!g->interior(node)) u0.values[node] = 0.0;
        }
        auto seq = continuation(p, schedule, u0, opt, true);
        if (seq.failed) {
            last_failure = seq.failure;
            continue;
        }
        const ScalarField& u = seq.last().u;
        bool positive = u.sup_norm() > seq.last().epsilon;
        for (int node : g->interior_nodes) {
            const Point x = g->point(node);
            if (u[node] < 0.0 || (u[node] <= 0.0 && distance_to_sector_boundary(x.x, x.y, k) > 3 * g->h)) {
                positive = false;
                break;
            }
        }
        if (!positive) {
            last_failure = "positivity failed";
            continue;
        }
        out.sequence = std::move(seq);
        out.seed_used = seed;
        return out;
    }
    throw std::runtime_error(last_failure);
}

ScalarField odd_reflect(const ScalarField& u_sector, int k) {
    const DiscGrid& gs = *u_sector.grid;
    if (gs.shape != Shape::Sector || gs.k != k) throw InvalidArgument("odd_reflect: grid mismatch (expected sector k)");
    GridPtr gd = build_disc(gs.n);
    ScalarField out(gd);
    const double w = kPi / k;
    const double tol = 1e-9 * gd->h;
    for (int node = 0; node < static_cast<int>(gd->size()); ++node) {
        if (gd->mask[node] == NodeKind::Exterior) continue;
        const Point x = gd->point(node);
        const double rho = std::hypot(x.x, x.y);
        if (rho == 0.0 || distance_to_rays(x.x, x.y, k) < tol) continue;
        const double th = polar_angle(x.x, x.y);
        const int j = static_cast<int>(std::floor(th / w));
        const double phi = th - j * w;
        const double th_ref = (j % 2 == 0) ? phi : w - phi;
        const double sx = rho * std::cos(th_ref), sy = rho * std::sin(th_ref);
        const double fi = (sx - gs.x_min) / gs.h, fj = (sy - gs.y_min) / gs.h;
        const long ri = std::lround(fi), rj = std::lround(fj);
        double v;
        if (std::abs(fi - ri) < 1e-9 && std::abs(fj - rj) < 1e-9) {
            v = u_sector.values[gs.index(static_cast<int>(ri), static_cast<int>(rj))];
        } else {
            v = bilinear(gs, u_sector.values, sx, sy, false);
        }
        out.values[node] = (j % 2 == 0) ? v : -v;
    }
    return out;
}

ReflectionReport verify_reflected_solution(const ScalarField& u, const ProblemParams& p, int k, double tol) {
    const DiscGrid& g = *u.grid;
    const ScalarField lap = laplacian(u);
    ReflectionReport r;
    for (int node : g.interior_nodes) {
        const Point x = g.point(node);
        const double res = std::abs(-lap[node] - g_eps(u[node], p));
        if (distance_to_rays(x.x, x.y, k) > 3 * g.h && std::hypot(x.x, x.y) > 3 * g.h) {
            r.off_ray_residual = std::max(r.off_ray_residual, res);
        } else {
            r.ray_residual = std::max(r.ray_residual, res);
        }
    }
    r.pass = r.off_ray_residual <= 10 * tol;
    return r;
}

SignPatternReport check_sign_pattern(const ScalarField& u, int k) {
    const DiscGrid& g = *u.grid;
    const double w = kPi / k;
    SignPatternReport r;
    for (int node : g.interior_nodes) {
        const Point x = g.point(node);
        if (distance_to_rays(x.x, x.y, k) <= 3 * g.h) continue;
        const int j = static_cast<int>(std::floor(polar_angle(x.x, x.y) / w));
        ++r.checked;
        const bool ok = (j % 2 == 0) ? u[node] > 0.0 : u[node] < 0.0;
        if (!ok) ++r.violations;
    }
    return r;
}

}  // namespace lelab
