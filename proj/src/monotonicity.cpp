#include "lelab/monotonicity.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace lelab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDegenerateH = 1e-28;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double rel(double a, double b, double scale) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(scale, 1e-300);
}

}  // namespace

std::vector<double> default_t_list(double q) { return {0.0, q, 2.0}; }

std::vector<std::pair<double, double>> default_gt_pairs(double q) {
    return {{1.0, q}, {gamma_q(q), q}, {gamma_q(q), 2.0}};
}

double D_t(const FieldSampler& s, Point c, double r, double t) {
    const BallMoments b = s.ball(c, r);
    return b.grad2 - (t / s.params().q) * b.F;
}

double dH_residual(const FieldSampler& s, Point c, double r, double dr) {
    const double Hp = s.circle(c, r + dr).u2;
    const double Hm = s.circle(c, r - dr).u2;
    const CircleMoments m = s.circle(c, r);
    const double fd = (Hp - Hm) / (2 * dr);
    return rel(fd, m.u2 / r + 2 * m.u_normal, std::max(m.u2 / r, 1e-30));
}

double dH_residual_solution(const FieldSampler& s, Point c, double r, double dr) {
    const double Hp = s.circle(c, r + dr).u2;
    const double Hm = s.circle(c, r - dr).u2;
    const double H = s.circle(c, r).u2;
    const double fd = (Hp - Hm) / (2 * dr);
    return rel(fd, H / r + 2 * D_t(s, c, r, s.params().q), std::max(H / r, 1e-30));
}

double pohozaev_residual(const FieldSampler& s, Point c, double r) {
    const double q = s.params().q;
    const CircleMoments m = s.circle(c, r);
    const BallMoments b = s.ball(c, r);
    const double lhs = m.grad2;
    const double rhs = -4.0 / (q * r) * b.F + 2 * m.normal2 + (2.0 / q) * m.F;
    if (lhs == 0.0 && rhs == 0.0) return 0.0;
    return (lhs - rhs) / std::max(std::abs(lhs), 1e-300);
}

double dD_residual(const FieldSampler& s, Point c, double r, double t, double dr) {
    const double q = s.params().q;
    const double fd = (D_t(s, c, r + dr, t) - D_t(s, c, r - dr, t)) / (2 * dr);
    const CircleMoments m = s.circle(c, r);
    const BallMoments b = s.ball(c, r);
    const double bulk = 4.0 / (q * r) * b.F;
    const double surface = 2 * m.normal2 + ((2.0 - t) / q) * m.F;
    return rel(fd, surface - bulk, bulk + std::abs(surface));
}

double divergence_residual(const FieldSampler& s, Point c, double r, double t) {
    const double q = s.params().q;
    const CircleMoments m = s.circle(c, r);
    const BallMoments b = s.ball(c, r);
    const double D = b.grad2 - (t / q) * b.F;
    return rel(D, m.u_normal - ((t - q) / q) * b.F, std::max(b.grad2, std::abs(D)));
}

FrequencyScan scan(const FieldSampler& s, Point center, const std::vector<double>& radii,
                   const std::vector<double>& t_list, const std::vector<std::pair<double, double>>& gt_pairs) {
    const double q = s.params().q;
    const double h = s.h();
    FrequencyScan out{center, t_list, gt_pairs, {}};
    for (double r : radii) {
        RadiusRecord rec;
        rec.r = r;
        const CircleMoments m = s.circle(center, r);
        const BallMoments b = s.ball(center, r);
        rec.H = m.u2;
        rec.degenerate = rec.H < kDegenerateH;
        for (double t : t_list) {
            const double D = b.grad2 - (t / q) * b.F;
            rec.D.push_back(D);
            rec.N.push_back(rec.degenerate ? kNaN : r * D / rec.H);
        }
        for (auto [gam, t] : gt_pairs) {
            const double D = b.grad2 - (t / q) * b.F;
            const double a = D / std::pow(r, 2 * gam);
            const double bb = gam * rec.H / std::pow(r, 1 + 2 * gam);
            const double W = a - bb;
            rec.W.push_back(W);
            if (!rec.degenerate) {
                const double N = r * D / rec.H;
                const double alt = rec.H / std::pow(r, 1 + 2 * gam) * (N - gam);
                rec.w_identity = std::max(rec.w_identity, rel(W, alt, std::max({std::abs(W), std::abs(a), bb})));
            }
        }
        rec.poh_res = pohozaev_residual(s, center, r);
        try {
            rec.dH_res = dH_residual(s, center, r, h);
            rec.dD_res = dD_residual(s, center, r, q, h);
        } catch (const DomainError&) {
            rec.dH_res = rec.dD_res = kNaN;
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

void write_scan_csv(std::ostream& os, const FrequencyScan& sc) {
    os << "r,H";
    for (double t : sc.t_list) os << ",D_t" << fmt(t);
    for (double t : sc.t_list) os << ",N_t" << fmt(t);
    for (auto [g, t] : sc.gt_pairs) os << ",W_g" << fmt(g) << "_t" << fmt(t);
    os << ",poh_res,dH_res,dD_res\n";
    for (const auto& rec : sc.records) {
        os << fmt(rec.r) << ',' << fmt(rec.H);
        for (double v : rec.D) os << ',' << fmt(v);
        for (double v : rec.N) os << ',' << fmt(v);
        for (double v : rec.W) os << ',' << fmt(v);
        os << ',' << fmt(rec.poh_res) << ',' << fmt(rec.dH_res) << ',' << fmt(rec.dD_res) << '\n';
    }
}

}  // namespace lelab
