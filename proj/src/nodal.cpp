#include "lelab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

namespace lelab {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    if (x.size() < 2) throw InvalidArgument("fit_line needs at least two points");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss += e * e;
    }
    f.r2 = syy > 0 ? 1.0 - ss / syy : 1.0;
    return f;
}

double scaled_norm(const FieldSampler& s, Point x0, double r) {
    const double b = s.ball(x0, r).grad2;
    const double c = s.circle(x0, r).u2;
    return std::sqrt(b + c / r);
}

double default_tau_grad(const FieldSampler& s) {
    const DiscGrid& g = *s.field().grid;
    double m = 0.0;
    for (int node : g.interior_nodes) m = std::max(m, std::hypot(s.gx()[node], s.gy()[node]));
    return std::pow(g.h, alpha_max(s.params().q)) * m;
}

namespace {

/// Cell edges are keyed by their lower-left node and direction (0: +x, 1: +y).
long edge_key(int node, int dir) { return 2L * node + dir; }

}  // namespace

NodalSet extract_nodal(const FieldSampler& s, double tau, double boundary_margin) {
    const DiscGrid& g = *s.field().grid;
    const auto& u = s.field().values;
    const int n = g.n;
    NodalSet out;
    out.tau = tau;

    // marching squares; a crossing lies on the lattice edge between corners of opposite class
    std::map<long, Point> crossing;
    auto cross = [&](int a, int b, int dir) -> long {
        const long key = edge_key(std::min(a, b), dir);
        if (!crossing.count(key)) {
            const double ua = u[a], ub = u[b];
            const double t = ua / (ua - ub);
            const Point pa = g.point(a), pb = g.point(b);
            crossing[key] = {pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
        }
        return key;
    };
    std::vector<std::pair<long, long>> segs;
    for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) {
            const int c0 = g.index(i, j), c1 = c0 + 1, c2 = c0 + n + 1, c3 = c0 + n;
            if (!g.interior(c0) || !g.interior(c1) || !g.interior(c2) || !g.interior(c3)) continue;
            const bool s0 = u[c0] >= 0, s1 = u[c1] >= 0, s2 = u[c2] >= 0, s3 = u[c3] >= 0;
            std::vector<long> ks;
            if (s0 != s1) ks.push_back(cross(c0, c1, 0));  // bottom
            if (s1 != s2) ks.push_back(cross(c1, c2, 1));  // right
            if (s3 != s2) ks.push_back(cross(c3, c2, 0));  // top
            if (s0 != s3) ks.push_back(cross(c0, c3, 1));  // left
            if (ks.size() == 2) {
                segs.emplace_back(ks[0], ks[1]);
            } else if (ks.size() == 4) {
                // saddle: join according to the sign of the cell mean
                const bool centre = (u[c0] + u[c1] + u[c2] + u[c3]) >= 0;
                if (centre == s0) {
                    segs.emplace_back(ks[0], ks[1]);
                    segs.emplace_back(ks[2], ks[3]);
                } else {
                    segs.emplace_back(ks[0], ks[3]);
                    segs.emplace_back(ks[1], ks[2]);
                }
            }
        }
    }
    // chain segments into polylines
    std::unordered_map<long, std::vector<std::size_t>> touching;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        touching[segs[i].first].push_back(i);
        touching[segs[i].second].push_back(i);
    }
    std::vector<char> used(segs.size(), 0);
    auto walk = [&](long from, std::vector<long>& chain) {
        long cur = from;
        while (true) {
            std::size_t next = segs.size();
            for (std::size_t si : touching[cur]) {
                if (!used[si]) {
                    next = si;
                    break;
                }
            }
            if (next == segs.size()) return;
            used[next] = 1;
            cur = segs[next].first == cur ? segs[next].second : segs[next].first;
            chain.push_back(cur);
        }
    };
    // open chains start at endpoints of odd degree, closed loops afterwards
    std::vector<long> starts;
    for (const auto& [key, list] : touching) {
        if (list.size() % 2 == 1) starts.push_back(key);
    }
    std::sort(starts.begin(), starts.end());
    for (std::size_t i = 0; i < segs.size(); ++i) starts.push_back(segs[i].first);
    for (long st : starts) {
        std::vector<long> chain{st};
        walk(st, chain);
        if (chain.size() < 2) continue;
        std::vector<Point> line;
        line.reserve(chain.size());
        for (long key : chain) line.push_back(crossing[key]);
        out.segments.push_back(std::move(line));
    }

    // nodal nodes: zeros, or the smaller-magnitude end of a sign-changing edge
    for (int node : g.interior_nodes) {
        const Point x = g.point(node);
        if (boundary_distance(g, x) < boundary_margin) continue;
        bool nodal = u[node] == 0.0;
        for (int nb : {node - 1, node + 1, node - n, node + n}) {
            if (nodal) break;
            if ((u[node] > 0) != (u[nb] > 0) && u[nb] != 0.0 && std::abs(u[node]) <= std::abs(u[nb])) nodal = true;
        }
        if (!nodal) continue;
        const NodalPoint np{x, std::hypot(s.gx()[node], s.gy()[node])};
        (np.grad > tau ? out.regular_points : out.singular_points).push_back(np);
    }
    // single-linkage clusters at distance 2h
    const std::size_t m = out.singular_points.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            const Point pa = out.singular_points[a].x, pb = out.singular_points[b].x;
            if (std::hypot(pa.x - pb.x, pa.y - pb.y) <= 2 * g.h * (1 + 1e-9)) parent[find(a)] = find(b);
        }
    }
    std::map<std::size_t, NodalPoint> rep;
    for (std::size_t a = 0; a < m; ++a) {
        const std::size_t r = find(a);
        auto it = rep.find(r);
        if (it == rep.end() || out.singular_points[a].grad < it->second.grad) rep[r] = out.singular_points[a];
    }
    for (const auto& [r, p] : rep) out.singular_clusters.push_back(p);
    return out;
}

std::string to_string(OrderClass c) {
    switch (c) {
        case OrderClass::One: return "one";
        case OrderClass::Gamma: return "gamma";
        case OrderClass::Unresolved: return "unresolved";
        case OrderClass::Degenerate: return "degenerate";
    }
    return "unknown";
}

namespace {

std::vector<double> geometric(double a, double b, int count) {
    if (!(a > 0.0 && b > a)) throw InvalidArgument("radius range must satisfy 0 < r_min < r_max");
    if (count < 2) throw InvalidArgument("need at least two radii");
    std::vector<double> r(count);
    for (int i = 0; i < count; ++i) r[i] = a * std::pow(b / a, static_cast<double>(i) / (count - 1));
    return r;
}

}  // namespace

VanishingOrder vanishing_order(const FieldSampler& s, Point x0, double r_min, double r_max, int count,
                               double window) {
    if (count < 8) throw InvalidArgument("vanishing_order needs at least 8 radii");
    VanishingOrder out;
    out.radii = geometric(r_min, r_max, count);
    std::vector<double> lx, ly, ln;
    for (double r : out.radii) {
        const double H = s.circle(x0, r).u2;
        if (H < 1e-28) {
            out.cls = OrderClass::Degenerate;
            out.beta = std::numeric_limits<double>::infinity();
            return out;
        }
        lx.push_back(std::log(r));
        ly.push_back(0.5 * std::log(H / r));
        ln.push_back(std::log(scaled_norm(s, x0, r)));
    }
    const LineFit f = fit_line(lx, ly);
    out.beta = f.slope;
    out.fit_r2 = f.r2;
    out.beta_h1 = fit_line(lx, ln).slope;
    const double gam = gamma_q(s.params().q);
    const double d1 = std::abs(out.beta - 1.0), dg = std::abs(out.beta - gam);
    if (out.fit_r2 >= 0.99 && std::min(d1, dg) <= window) {
        out.cls = d1 <= dg ? OrderClass::One : OrderClass::Gamma;
    } else {
        out.cls = OrderClass::Unresolved;
    }
    return out;
}

RefinedOrder vanishing_order_refined(const ScalarField& u, const ProblemParams& p, Point x0,
                                     const RefineOptions& ro, const SolverOptions& opt) {
    if (ro.half_widths.empty()) throw InvalidArgument("vanishing_order_refined needs at least one level");
    ScalarField parent = u;
    for (double hw : ro.half_widths) parent = refine_local(parent, p, x0, hw, ro.n, ro.offset, opt);
    const FieldSampler s(parent, p);
    RefinedOrder out;
    out.h_final = parent.grid->h;
    out.order = vanishing_order(s, x0, ro.r_min_cells * out.h_final, ro.r_max_fraction * ro.half_widths.back(),
                                ro.count, ro.window);
    return out;
}

Nondegeneracy nondegeneracy(const FieldSampler& s, Point x0, double beta, double r_min, double r_max, int count) {
    Nondegeneracy out;
    out.min_value = std::numeric_limits<double>::infinity();
    for (double r : geometric(r_min, r_max, count)) {
        const double v = s.circle(x0, r).u2 / std::pow(r, 1 + 2 * beta);
        out.min_value = std::min(out.min_value, v);
        out.at_r_max = v;
    }
    out.ratio = out.at_r_max > 0 ? out.min_value / out.at_r_max : 0.0;
    return out;
}

BlowupSequence blowup(const FieldSampler& s, Point x0, const std::vector<double>& scales, double gamma,
                      const BlowupOptions& bo) {
    const double h = s.h();
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] < bo.floor_cells * h * (1 - 1e-12)) {
            throw InvalidArgument("blow-up scale below resolution floor");
        }
        if (i > 0 && !(scales[i] < scales[i - 1])) throw InvalidArgument("blow-up scales must decrease");
    }
    BlowupSequence out;
    out.center = x0;
    out.gamma = gamma;
    out.scales = scales;
    const double hr = 2 * bo.ref_half_width / (bo.ref_n - 1);
    GridPtr ref = build_square(bo.ref_n, -bo.ref_half_width, -bo.ref_half_width, hr);
    const DiscGrid& src = *s.field().grid;
    for (double r : scales) {
        const double norm = scaled_norm(s, x0, r);
        out.norms.push_back(norm);
        out.alpha.push_back(std::pow(std::pow(r, gamma) / norm, 2.0 / gamma));
        ScalarField v(ref);
        double num = 0.0, den = 0.0;
        for (std::size_t node = 0; node < ref->size(); ++node) {
            const Point y = ref->point(static_cast<int>(node));
            const double px = x0.x + r * y.x, py = x0.y + r * y.y;
            const double rho = std::hypot(y.x, y.y);
            if (rho > 1.0) {
                v.values[node] = bilinear(src, s.field().values, px, py, false) / norm;
                continue;
            }
            const Sample c = cubic_sample(src, s.field().values, px, py);
            v.values[node] = c.value / norm;
            if (rho < 0.25) continue;
            const double radial = r * (y.x * c.dx + y.y * c.dy) / norm;  // r ∂_r v at y
            const double e = radial - gamma * v.values[node];
            num += e * e;
            den += v.values[node] * v.values[node];
        }
        out.delta.push_back(den > 0 ? std::sqrt(num / den) : std::numeric_limits<double>::infinity());
        const FieldSampler vs(v, s.params());
        out.unit_norm.push_back(scaled_norm(vs, {0, 0}, 1.0));
        if (bo.keep_profiles) out.profiles.push_back(std::move(v));
    }
    return out;
}

std::vector<double> default_dead_core_deltas(const ScalarField& u, int count) {
    const double m = u.sup_norm();
    std::vector<double> d;
    for (int j = 0; j < count; ++j) d.push_back(m * 0.1 * std::ldexp(1.0, -j));
    return d;
}

DeadCoreReport dead_core_check(const ScalarField& u, const std::vector<double>& deltas, double min_slope) {
    const DiscGrid& g = *u.grid;
    DeadCoreReport out;
    out.deltas = deltas;
    out.trivial = u.sup_norm() == 0.0;
    constexpr int S = 8;
    std::vector<long> below(deltas.size(), 0);
    long total = 0;
    const int n = g.n;
    for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) {
            const int c0 = g.index(i, j);
            if (!g.interior(c0) || !g.interior(c0 + 1) || !g.interior(c0 + n) || !g.interior(c0 + n + 1)) continue;
            const double a = u.values[c0], b = u.values[c0 + 1], c = u.values[c0 + n], d = u.values[c0 + n + 1];
            for (int sb = 0; sb < S; ++sb) {
                const double t = (sb + 0.5) / S;
                for (int sa = 0; sa < S; ++sa) {
                    const double w = (sa + 0.5) / S;
                    const double v = std::abs((1 - w) * (1 - t) * a + w * (1 - t) * b + (1 - w) * t * c + w * t * d);
                    ++total;
                    for (std::size_t k = 0; k < deltas.size(); ++k) {
                        if (v < deltas[k]) ++below[k];
                    }
                }
            }
        }
    }
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double frac = total > 0 ? static_cast<double>(below[k]) / total : 1.0;
        out.fractions.push_back(frac);
        if (frac > 0 && deltas[k] > 0) {
            lx.push_back(std::log(deltas[k]));
            ly.push_back(std::log(frac));
        }
    }
    if (out.trivial || lx.size() < 2) {
        out.slope = 0.0;
        out.pass = false;
        return out;
    }
    out.slope = fit_line(lx, ly).slope;
    out.pass = out.slope >= min_slope;
    return out;
}

}  // namespace lelab
