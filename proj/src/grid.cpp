#include "lelab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lelab {

std::string to_string(Shape s) {
    switch (s) {
        case Shape::Disc: return "disc";
        case Shape::Sector: return "sector";
        case Shape::Square: return "square";
    }
    return "unknown";
}

void DiscGrid::finalize() {
    unknown_of.assign(size(), -1);
    interior_nodes.clear();
    for (int node = 0; node < static_cast<int>(size()); ++node) {
        if (mask[node] == NodeKind::Band) mask[node] = NodeKind::Exterior;
    }
    for (int node = 0; node < static_cast<int>(size()); ++node) {
        if (mask[node] != NodeKind::Interior) continue;
        const int i = col(node), j = row(node);
        if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
            throw InvalidArgument("interior node on the lattice edge");
        }
        unknown_of[node] = static_cast<int>(interior_nodes.size());
        interior_nodes.push_back(node);
        for (int nb : {node - 1, node + 1, node - n, node + n}) {
            if (mask[nb] == NodeKind::Exterior) mask[nb] = NodeKind::Band;
        }
    }
}

namespace {

void check_odd(int n) {
    if (n < 33) throw InvalidArgument("n must be >= 33 (got " + std::to_string(n) + ")");
    if (n % 2 == 0) throw InvalidArgument("n must be odd so the origin is a node (got " + std::to_string(n) + ")");
}

std::shared_ptr<DiscGrid> unit_lattice(int n) {
    auto g = std::make_shared<DiscGrid>();
    g->n = n;
    g->h = 2.0 / (n - 1);
    g->x_min = -1.0;
    g->y_min = -1.0;
    g->mask.assign(g->size(), NodeKind::Exterior);
    return g;
}

}  // namespace

GridPtr build_disc(int n) {
    check_odd(n);
    auto g = unit_lattice(n);
    g->shape = Shape::Disc;
    const int m = (n - 1) / 2;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            // integer test avoids rounding on the unit circle
            const long di = i - m, dj = j - m;
            if (di * di + dj * dj < static_cast<long>(m) * m) g->mask[g->index(i, j)] = NodeKind::Interior;
        }
    }
    g->finalize();
    return g;
}

GridPtr build_sector(int n, int k) {
    check_odd(n);
    if (k < 1) throw InvalidArgument("sector order k must be >= 1 (got " + std::to_string(k) + ")");
    auto g = unit_lattice(n);
    g->shape = Shape::Sector;
    g->k = k;
    const int m = (n - 1) / 2;
    const double opening = std::numbers::pi / k;
    for (int j = m + 1; j < n; ++j) {  // theta in (0, pi/k) with k >= 1 needs y > 0
        for (int i = 0; i < n; ++i) {
            const long di = i - m, dj = j - m;
            if (di * di + dj * dj >= static_cast<long>(m) * m) continue;
            bool inside = false;
            if (k == 1) {
                inside = true;
            } else if (k == 2) {
                inside = di > 0;
            } else {
                const double theta = std::atan2(static_cast<double>(dj), static_cast<double>(di));
                inside = theta < opening - 1e-12;
            }
            if (inside) g->mask[g->index(i, j)] = NodeKind::Interior;
        }
    }
    g->finalize();
    return g;
}

GridPtr build_square(int n, double x_min, double y_min, double h) {
    if (n < 5) throw InvalidArgument("square grid needs n >= 5");
    if (!(h > 0.0)) throw InvalidArgument("square grid needs h > 0");
    auto g = std::make_shared<DiscGrid>();
    g->n = n;
    g->h = h;
    g->x_min = x_min;
    g->y_min = y_min;
    g->shape = Shape::Square;
    g->mask.assign(g->size(), NodeKind::Exterior);
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i) g->mask[g->index(i, j)] = NodeKind::Interior;
    g->finalize();
    return g;
}

ScalarField::ScalarField(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}

ScalarField::ScalarField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid->size()) throw InvalidArgument("field size does not match grid");
}

double ScalarField::sup_norm() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double boundary_distance(const DiscGrid& g, Point x) {
    switch (g.shape) {
        case Shape::Disc: return std::abs(1.0 - std::hypot(x.x, x.y));
        case Shape::Sector: {
            const double rho = std::hypot(x.x, x.y);
            const double th = std::atan2(x.y, x.x);
            auto ray = [rho](double phi) {
                phi = std::remainder(phi, 2.0 * std::numbers::pi);
                return std::abs(phi) >= std::numbers::pi / 2 ? rho : rho * std::abs(std::sin(phi));
            };
            return std::min({ray(th), ray(th - std::numbers::pi / g.k), std::abs(1.0 - rho)});
        }
        case Shape::Square: {
            const double x1 = g.x_min + g.extent(), y1 = g.y_min + g.extent();
            return std::min({x.x - g.x_min, x1 - x.x, x.y - g.y_min, y1 - x.y});
        }
    }
    return 0.0;
}

ScalarField laplacian(const ScalarField& f) {
    const DiscGrid& g = *f.grid;
    ScalarField out(f.grid);
    const double inv = 1.0 / (g.h * g.h);
    const int n = g.n;
    for (int node : g.interior_nodes) {
        out.values[node] = (f.values[node - 1] + f.values[node + 1] + f.values[node - n] +
                            f.values[node + n] - 4.0 * f.values[node]) * inv;
    }
    return out;
}

void nodal_gradient(const ScalarField& f, std::vector<double>& gx, std::vector<double>& gy) {
    const DiscGrid& g = *f.grid;
    gx.assign(g.size(), 0.0);
    gy.assign(g.size(), 0.0);
    const double inv = 0.5 / g.h;
    const int n = g.n;
    for (int node : g.interior_nodes) {
        gx[node] = (f.values[node + 1] - f.values[node - 1]) * inv;
        gy[node] = (f.values[node + n] - f.values[node - n]) * inv;
    }
}

double bilinear(const DiscGrid& g, const std::vector<double>& data, double x, double y, bool strict) {
    const double s = (x - g.x_min) / g.h;
    const double t = (y - g.y_min) / g.h;
    int i = static_cast<int>(std::floor(s));
    int j = static_cast<int>(std::floor(t));
    // points on the last lattice line belong to the cell below/left
    if (i == g.n - 1 && s <= g.n - 1) i = g.n - 2;
    if (j == g.n - 1 && t <= g.n - 1) j = g.n - 2;
    if (i < 0 || j < 0 || i > g.n - 2 || j > g.n - 2) {
        if (strict) throw DomainError("radius out of domain");
        return 0.0;
    }
    const int c00 = g.index(i, j);
    if (strict) {
        for (int c : {c00, c00 + 1, c00 + g.n, c00 + g.n + 1}) {
            if (g.mask[c] != NodeKind::Interior) throw DomainError("radius out of domain");
        }
    }
    const double a = s - i, b = t - j;
    return (1 - a) * (1 - b) * data[c00] + a * (1 - b) * data[c00 + 1] +
           (1 - a) * b * data[c00 + g.n] + a * b * data[c00 + g.n + 1];
}

namespace {

/// Keys kernel (a = -1/2) weights and derivatives for nodes at offsets -1, 0, 1, 2.
void keys_weights(double t, double w[4], double dw[4]) {
    const double d[4] = {t + 1, t, 1 - t, 2 - t};
    const double sgn[4] = {1, 1, -1, -1};
    for (int i = 0; i < 4; ++i) {
        const double x = d[i];
        if (x <= 1) {
            w[i] = 1.5 * x * x * x - 2.5 * x * x + 1;
            dw[i] = (4.5 * x * x - 5 * x) * sgn[i];
        } else {
            w[i] = -0.5 * x * x * x + 2.5 * x * x - 4 * x + 2;
            dw[i] = (-1.5 * x * x + 5 * x - 4) * sgn[i];
        }
    }
}

}  // namespace

Sample cubic_sample(const DiscGrid& g, const std::vector<double>& data, double x, double y) {
    const double s = (x - g.x_min) / g.h;
    const double t = (y - g.y_min) / g.h;
    const int i = static_cast<int>(std::floor(s));
    const int j = static_cast<int>(std::floor(t));
    if (i < 1 || j < 1 || i > g.n - 3 || j > g.n - 3) throw DomainError("cubic stencil leaves the lattice");
    double wx[4], dwx[4], wy[4], dwy[4];
    keys_weights(s - i, wx, dwx);
    keys_weights(t - j, wy, dwy);
    Sample out;
    for (int b = 0; b < 4; ++b) {
        for (int a = 0; a < 4; ++a) {
            const int node = g.index(i - 1 + a, j - 1 + b);
            if (g.mask[node] == NodeKind::Exterior) throw DomainError("cubic stencil leaves the domain");
            const double u = data[node];
            out.value += wx[a] * wy[b] * u;
            out.dx += dwx[a] * wy[b] * u;
            out.dy += wx[a] * dwy[b] * u;
        }
    }
    out.dx /= g.h;
    out.dy /= g.h;
    return out;
}

FieldSampler::FieldSampler(const ScalarField& u, const ProblemParams& p) : u_(u), p_(p) {
    nodal_gradient(u_, gx_, gy_);
    const std::size_t N = u_.grid->size();
    grad2_.assign(N, 0.0);
    F_.assign(N, 0.0);
    ug_.assign(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        if (u_.grid->mask[i] == NodeKind::Exterior) continue;
        grad2_[i] = gx_[i] * gx_[i] + gy_[i] * gy_[i];
        F_[i] = lelab::F(u_.values[i], p_);
        ug_[i] = u_.values[i] * g_eps(u_.values[i], p_);
    }
}

double FieldSampler::value(Point x) const { return bilinear(*u_.grid, u_.values, x.x, x.y, true); }

Point FieldSampler::gradient(Point x) const {
    return {bilinear(*u_.grid, gx_, x.x, x.y, true), bilinear(*u_.grid, gy_, x.x, x.y, true)};
}

CircleMoments FieldSampler::circle(Point x0, double r) const {
    if (!(r > 0.0)) throw InvalidArgument("circle radius must be positive");
    const DiscGrid& g = *u_.grid;
    const int m = std::max(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / g.h)));
    const double w = 2.0 * std::numbers::pi * r / m;
    CircleMoments out;
    for (int a = 0; a < m; ++a) {
        const double th = 2.0 * std::numbers::pi * a / m;
        const double c = std::cos(th), s = std::sin(th);
        const double px = x0.x + r * c, py = x0.y + r * s;
        const double u = bilinear(g, u_.values, px, py, true);
        const double ux = bilinear(g, gx_, px, py, true);
        const double uy = bilinear(g, gy_, px, py, true);
        const double un = ux * c + uy * s;
        out.u2 += u * u;
        out.grad2 += ux * ux + uy * uy;
        out.normal2 += un * un;
        out.F += lelab::F(u, p_);
        out.u_normal += u * un;
    }
    out.u2 *= w;
    out.grad2 *= w;
    out.normal2 *= w;
    out.F *= w;
    out.u_normal *= w;
    return out;
}

double FieldSampler::ball_of(const std::vector<double>& nodal, Point x0, double r) const {
    if (!(r > 0.0)) throw InvalidArgument("ball radius must be positive");
    const DiscGrid& g = *u_.grid;
    const double h = g.h;
    const double half_diag = 0.7072 * h;
    const int i0 = std::max(0, static_cast<int>(std::floor((x0.x - r - 2 * h - g.x_min) / h)));
    const int i1 = std::min(g.n - 1, static_cast<int>(std::ceil((x0.x + r + 2 * h - g.x_min) / h)));
    const int j0 = std::max(0, static_cast<int>(std::floor((x0.y - r - 2 * h - g.y_min) / h)));
    const int j1 = std::min(g.n - 1, static_cast<int>(std::ceil((x0.y + r + 2 * h - g.y_min) / h)));
    constexpr int S = 8;
    double full = 0.0, cut = 0.0;
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            const double x = g.x(i), y = g.y(j);
            const double d = std::hypot(x - x0.x, y - x0.y);
            if (d >= r + half_diag) continue;
            const int node = g.index(i, j);
            if (g.mask[node] != NodeKind::Interior) throw DomainError("radius out of domain");
            if (d <= r - half_diag) {
                full += nodal[node];
                continue;
            }
            double acc = 0.0;
            for (int b = 0; b < S; ++b) {
                for (int a = 0; a < S; ++a) {
                    const double px = x + h * ((a + 0.5) / S - 0.5);
                    const double py = y + h * ((b + 0.5) / S - 0.5);
                    if (std::hypot(px - x0.x, py - x0.y) < r) acc += bilinear(g, nodal, px, py, true);
                }
            }
            cut += acc / (S * S);
        }
    }
    return (full + cut) * h * h;
}

BallMoments FieldSampler::ball(Point x0, double r) const {
    return {ball_of(grad2_, x0, r), ball_of(F_, x0, r), ball_of(ug_, x0, r)};
}

double circle_integral(const ScalarField& f, Point x0, double r, Integrand what, const ProblemParams& p) {
    const CircleMoments m = FieldSampler(f, p).circle(x0, r);
    switch (what) {
        case Integrand::U2: return m.u2;
        case Integrand::Grad2: return m.grad2;
        case Integrand::Normal2: return m.normal2;
        case Integrand::F: return m.F;
    }
    return 0.0;
}

double ball_integral(const ScalarField& f, Point x0, double r, BallIntegrand what, const ProblemParams& p) {
    const BallMoments m = FieldSampler(f, p).ball(x0, r);
    switch (what) {
        case BallIntegrand::Grad2: return m.grad2;
        case BallIntegrand::F: return m.F;
        case BallIntegrand::UG: return m.ug;
    }
    return 0.0;
}

ScalarField rotate_k(const ScalarField& f, int k) {
    if (k < 1) throw InvalidArgument("rotate_k: k must be >= 1");
    const DiscGrid& g = *f.grid;
    const double a = std::numbers::pi / k;
    const double c = std::cos(a), s = std::sin(a);
    ScalarField out(f.grid);
    for (std::size_t node = 0; node < g.size(); ++node) {
        if (g.mask[node] == NodeKind::Exterior) continue;
        const Point p = g.point(static_cast<int>(node));
        // (R_k f)(x) = f(R_k^{-1} x)
        const double sx = c * p.x + s * p.y, sy = -s * p.x + c * p.y;
        const double fi = (sx - g.x_min) / g.h, fj = (sy - g.y_min) / g.h;
        const long ri = std::lround(fi), rj = std::lround(fj);
        if (std::abs(fi - ri) < 1e-9 && std::abs(fj - rj) < 1e-9 && ri >= 0 && rj >= 0 && ri < g.n && rj < g.n) {
            out.values[node] = f.values[g.index(static_cast<int>(ri), static_cast<int>(rj))];
        } else {
            out.values[node] = bilinear(g, f.values, sx, sy, false);
        }
    }
    return out;
}

}  // namespace lelab
