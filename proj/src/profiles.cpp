#include "lelab/profiles.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "lelab/errors.hpp"

namespace lelab {

double hamiltonian(double w, double wp, const ProblemParams& p) {
    const double pos = std::max(w, 0.0), neg = std::max(-w, 0.0);
    return 0.5 * wp * wp + (p.mu * p.lambda_plus / p.q) * std::pow(pos, p.q) +
           (p.mu * p.lambda_minus / p.q) * std::pow(neg, p.q);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GaussLegendre {
    static constexpr int N = 16;
    std::array<double, N> x{}, w{};  // on [0, 1]
    GaussLegendre() {
        for (int i = 0; i < N; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int m = 2; m <= N; ++m) {
                    const double p2 = ((2 * m - 1) * z * p1 - (m - 1) * p0) / m;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N * (z * p1 - p0) / (z * z - 1);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = 0.5 * (1 - z);
            w[i] = 1.0 / ((1 - z * z) * dp * dp);
        }
    }
};

const GaussLegendre& gauss() {
    static const GaussLegendre g;
    return g;
}

struct State {
    double t = 0.0, w = 0.0, p = 0.0;
};

/// Regularized variables on one side of w = 0: S = |w|^q, P = side * w'.
struct Layer {
    double S = 0.0, P = 0.0;
};

struct Stats {
    double E0 = 0.0;
    double min_E = kInf;
    double max_E = -kInf;
    long steps = 0;
    long layers = 0;
    long halvings = 0;
};

enum class Event { None, Zero, Turn };

/// w'' = -a₊(w⁺)^{q-1} + a₋(w⁻)^{q-1} - c w
class Flow {
public:
    Flow(double q, double ap, double am, double c, IntegratorOptions io)
        : q_(q), ap_(ap), am_(am), c_(c), beta_((1 - q) / q), io_(io) {}

    [[nodiscard]] double acc(double w) const {
        if (w > 0) return -ap_ * std::pow(w, q_ - 1) - c_ * w;
        if (w < 0) return am_ * std::pow(-w, q_ - 1) - c_ * w;
        return 0.0;
    }
    [[nodiscard]] double energy(double w, double p) const {
        const double pot = w > 0 ? ap_ * std::pow(w, q_) : w < 0 ? am_ * std::pow(-w, q_) : 0.0;
        return 0.5 * p * p + 0.5 * c_ * w * w + pot / q_;
    }
    [[nodiscard]] double layer_energy(Layer y, int side) const {
        const double w = std::pow(std::max(y.S, 0.0), 1 / q_);
        return 0.5 * y.P * y.P + 0.5 * c_ * w * w + a(side) * y.S / q_;
    }
    [[nodiscard]] bool layers_enabled() const { return ap_ > 0 || am_ > 0; }
    [[nodiscard]] double a(int side) const { return side > 0 ? ap_ : am_; }

    [[nodiscard]] double tau_loc(double w, double p) const {
        const double t1 = p != 0 ? std::abs(w) / std::abs(p) : kInf;
        const double f = std::abs(acc(w));
        const double t2 = f > 0 ? std::sqrt(std::abs(w) / f) : kInf;
        return std::min(t1, t2);
    }

    [[nodiscard]] State rk4(State s, double h) const {
        const double k1w = s.p, k1p = acc(s.w);
        const double k2w = s.p + 0.5 * h * k1p, k2p = acc(s.w + 0.5 * h * k1w);
        const double k3w = s.p + 0.5 * h * k2p, k3p = acc(s.w + 0.5 * h * k2w);
        const double k4w = s.p + h * k3p, k4p = acc(s.w + h * k3w);
        return {s.t + h, s.w + h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w),
                s.p + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)};
    }

    [[nodiscard]] Layer rhs(Layer y, int side) const {
        return {q_ * y.P, -a(side) - c_ * std::pow(std::max(y.S, 0.0), (2 - q_) / q_)};
    }
    [[nodiscard]] Layer rk4(Layer y, int side, double x) const {
        const Layer k1 = rhs(y, side);
        const Layer k2 = rhs({y.S + 0.5 * x * k1.S, y.P + 0.5 * x * k1.P}, side);
        const Layer k3 = rhs({y.S + 0.5 * x * k2.S, y.P + 0.5 * x * k2.P}, side);
        const Layer k4 = rhs({y.S + x * k3.S, y.P + x * k3.P}, side);
        return {y.S + x / 6 * (k1.S + 2 * k2.S + 2 * k3.S + k4.S), y.P + x / 6 * (k1.P + 2 * k2.P + 2 * k3.P + k4.P)};
    }

    /// ∫ S^β dτ over a step, with S the cubic Hermite interpolant of the end data.
    /// A vanishing endpoint is handled by the substitution y = x z^{1/(β+1)}.
    [[nodiscard]] double elapsed(Layer y0, Layer y1, double x) const {
        const auto& g = gauss();
        if (x <= 0) return 0.0;
        auto touching = [&](double A, double Send, double slope_end) {
            const double u = Send / x - A, v = slope_end - A;
            const double Bx = 3 * u - v, Cx2 = v - 2 * u;
            double sum = 0.0;
            for (int i = 0; i < GaussLegendre::N; ++i) {
                const double s = std::pow(g.x[i], 1 / (beta_ + 1));
                sum += g.w[i] * std::pow(std::max(A + Bx * s + Cx2 * s * s, 0.0), beta_);
            }
            return std::pow(x, beta_ + 1) / (beta_ + 1) * sum;
        };
        if (y0.S <= 0 && y1.S <= 0) return 0.0;
        if (y0.S <= 0) return touching(q_ * y0.P, y1.S, q_ * y1.P);
        if (y1.S <= 0) return touching(-q_ * y1.P, y0.S, -q_ * y0.P);
        double sum = 0.0;
        for (int i = 0; i < GaussLegendre::N; ++i) {
            sum += g.w[i] * std::pow(std::max(hermite(y0, y1, x, g.x[i] * x), 0.0), beta_);
        }
        return x * sum;
    }

    [[nodiscard]] double hermite(Layer y0, Layer y1, double x, double at) const {
        const double s = at / x, s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0.S + (s3 - 2 * s2 + s) * x * q_ * y0.P + (-2 * s3 + 3 * s2) * y1.S +
               (s3 - s2) * x * q_ * y1.P;
    }

    /// Partial step length at which the elapsed time equals `target`.
    [[nodiscard]] double partial_for_time(Layer y0, Layer y1, double x, double target) const {
        double lo = 0.0, hi = x, at = x * 0.5;
        for (int it = 0; it < 200; ++it) {
            const double Sy = std::max(hermite(y0, y1, x, at), 0.0);
            const double s = at / x;
            const double dS = ((6 * s * s - 6 * s) * y0.S + (3 * s * s - 4 * s + 1) * x * q_ * y0.P +
                               (-6 * s * s + 6 * s) * y1.S + (3 * s * s - 2 * s) * x * q_ * y1.P) / x;
            const Layer ya{Sy, dS / q_};
            const double f = elapsed(y0, ya, at) - target;
            if (f > 0) hi = at; else lo = at;
            const double df = std::pow(Sy, beta_);
            double next = df > 0 ? at - f / df : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - at) <= 1e-15 * x || hi - lo <= 1e-15 * x) return next;
            at = next;
        }
        return at;
    }

    /// Step length at which S reaches 0 (S decreasing through the step).
    [[nodiscard]] double landing(Layer y0, int side, double xmax) const {
        const double A = a(side);
        double x;
        if (A > 0) {
            x = (q_ * y0.P + std::sqrt(q_ * q_ * y0.P * y0.P + 2 * q_ * A * y0.S)) / (q_ * A);
        } else {
            x = y0.S / (-q_ * y0.P);
        }
        x = std::min(x, xmax);
        for (int it = 0; it < 20; ++it) {
            const Layer y = rk4(y0, side, x);
            if (y.P >= 0) break;
            const double dx = y.S / (q_ * y.P);
            x = std::clamp(x - dx, 0.0, 1.5 * xmax);
            if (std::abs(dx) <= 1e-16 * x) break;
        }
        return x;
    }

    /// Step length at which P reaches 0 (P decreasing through the step).
    [[nodiscard]] double turning(Layer y0, int side, double xmax) const {
        double x = std::min(y0.P / std::max(-rhs(y0, side).P, 1e-300), xmax);
        for (int it = 0; it < 30; ++it) {
            const Layer y = rk4(y0, side, x);
            const double d = rhs(y, side).P;
            if (d >= 0) break;
            const double dx = y.P / d;
            x = std::clamp(x - dx, 0.0, xmax);
            if (std::abs(dx) <= 1e-16 * std::max(x, 1e-300)) break;
        }
        return x;
    }

    [[nodiscard]] double q() const { return q_; }
    [[nodiscard]] const IntegratorOptions& options() const { return io_; }

private:
    double q_, ap_, am_, c_, beta_;
    IntegratorOptions io_;
};

/// Hybrid driver over a time lattice t0 + j dt, j = 0..nsteps.
class Driver {
public:
    Driver(const Flow& f, double dt, bool force_layer = false) : f_(f), dt_(dt), force_(force_layer) {}

    Stats stats;

    /// Advance; `obs(j, state)` is called for lattice indices j that are multiples of `stride`.
    /// Returns true if the requested event occurred; `s` then holds the event state.
    template <class Obs>
    bool run(State& s, long nsteps, int stride, Event ev, Obs&& obs) {
        const double t0 = s.t;
        const double F = f_.options().layer_factor;
        long j = 0;
        bool in_layer = false;
        int side = 1;
        double dtau = 0.0;
        Layer y;
        stats.E0 = f_.energy(s.w, s.p);
        note(stats.E0);
        auto lattice = [&](long i) { return t0 + static_cast<double>(i) * dt_; };
        auto rk4_to = [&](double tnext) -> bool {
            const State n = checked(s, tnext - s.t, 0);
            if (ev == Event::Turn && s.p != 0 && s.p * n.p <= 0) {
                s = secant(s, tnext - s.t, [](const State& x) { return x.p; });
                return true;
            }
            if (ev == Event::Zero && s.w != 0 && s.w * n.w <= 0) {
                s = secant(s, tnext - s.t, [](const State& x) { return x.w; });
                return true;
            }
            s = n;
            s.t = tnext;
            note(f_.energy(s.w, s.p));
            return false;
        };
        auto enter = [&]() {
            side = s.w > 0 ? 1 : s.w < 0 ? -1 : (s.p > 0 ? 1 : -1);
            y = {std::pow(std::abs(s.w), f_.q()), side * s.p};
            dtau = layer_step(y, side, s.p);
            in_layer = true;
            ++stats.layers;
        };
        while (true) {
            budget();
            if (!in_layer) {
                if (j >= nsteps) return false;
                if (f_.layers_enabled() && (force_ || f_.tau_loc(s.w, s.p) < F * dt_)) {
                    enter();
                    continue;
                }
                if (rk4_to(lattice(j + 1))) return true;
                ++j;
                if (j % stride == 0) obs(j, s);
                continue;
            }
            double x = dtau;
            Layer y1 = f_.rk4(y, side, x);
            bool land = false;
            if (y1.S <= 0) {
                x = f_.landing(y, side, x);
                y1 = f_.rk4(y, side, x);
                y1.S = 0.0;
                land = true;
            }
            if (ev == Event::Turn && y.P > 0 && y1.P <= 0) {
                const double xt = f_.turning(y, side, x);
                Layer yt = f_.rk4(y, side, xt);
                yt.P = 0.0;
                s = {s.t + f_.elapsed(y, yt, xt), side * std::pow(std::max(yt.S, 0.0), 1 / f_.q()), 0.0};
                return true;
            }
            const double t_new = s.t + f_.elapsed(y, y1, x);
            while (j < nsteps && lattice(j + 1) <= t_new) {
                ++j;
                if (j % stride == 0 || j == nsteps) {
                    const double xs = f_.partial_for_time(y, y1, x, lattice(j) - s.t);
                    const Layer ys = f_.rk4(y, side, xs);
                    const State at{lattice(j), side * std::pow(std::max(ys.S, 0.0), 1 / f_.q()), side * ys.P};
                    if (j % stride == 0) obs(j, at);
                    if (j == nsteps) {
                        s = at;
                        note(f_.energy(s.w, s.p));
                        return false;
                    }
                }
            }
            s = {t_new, side * std::pow(y1.S, 1 / f_.q()), side * y1.P};
            note(f_.layer_energy(y1, side));
            if (land) {
                s.w = 0.0;
                side = -side;
                y = {0.0, -y1.P};
                dtau = layer_step(y, side, s.p);
                if (ev == Event::Zero) return true;
            } else {
                y = y1;
            }
            if (!force_ && f_.tau_loc(s.w, s.p) >= 1.5 * F * dt_) {
                in_layer = false;
                if (j >= nsteps) return false;
                const double tnext = lattice(j + 1);
                if (tnext > s.t) {
                    if (rk4_to(tnext)) return true;
                    ++j;
                    if (j % stride == 0) obs(j, s);
                }
            }
        }
    }

private:
    const Flow& f_;
    double dt_;
    bool force_;

    void note(double E) {
        stats.min_E = std::min(stats.min_E, E);
        stats.max_E = std::max(stats.max_E, E);
    }
    void budget() {
        if (++stats.steps > f_.options().step_budget) throw DomainError("integrator step budget exhausted");
    }

    double layer_step(Layer y, int side, double p) const {
        const double amax = std::max(f_.a(1), f_.a(-1));
        double turn = std::abs(y.P) / amax + std::sqrt(2 * y.S / (f_.q() * amax));
        if (!force_ && y.P != 0) {
            const double s_exit = std::pow(1.5 * f_.options().layer_factor * dt_ * std::abs(p), f_.q());
            turn = std::min(turn, (y.S + s_exit) / (f_.q() * std::abs(y.P)));
        }
        (void)side;
        return turn / f_.options().layer_steps;
    }

    State checked(State s, double h, int depth) {
        const State n = f_.rk4(s, h);
        const double jump = std::abs(f_.energy(n.w, n.p) - f_.energy(s.w, s.p));
        if (jump <= f_.options().jump_tol * std::max(stats.E0, 1e-30)) return n;
        if (depth >= f_.options().max_halvings) {
            throw DomainError("hamiltonian jump exceeds tolerance after step halving");
        }
        ++stats.halvings;
        budget();
        return checked(checked(s, 0.5 * h, depth + 1), 0.5 * h, depth + 1);
    }

    template <class G>
    State secant(State s, double h, G&& g) const {
        double lo = 0.0, hi = h;
        const double g0 = g(s);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const State m = f_.rk4(s, mid);
            if ((g(m) > 0) == (g0 > 0) && g(m) != 0) lo = mid; else hi = mid;
            if (hi - lo <= 1e-16 * std::abs(h)) break;
        }
        return f_.rk4(s, hi);
    }
};

Flow flow_1d(const ProblemParams& p, const IntegratorOptions& io) {
    return Flow(p.q, p.mu * p.lambda_plus, p.mu * p.lambda_minus, 0.0, io);
}

void check_1d(const ProblemParams& p) {
    if (!(p.q > 0 && p.q < 1)) throw InvalidArgument("q must satisfy 0 < q < 1");
    if (p.lambda_plus < 0 || p.lambda_minus < 0 || p.mu < 0) throw InvalidArgument("mu and lambda must be >= 0");
}

}  // namespace

Trajectory1D integrate_1d(double w0, double w0p, const ProblemParams& p, double T, double dt, int sample_every,
                          const IntegratorOptions& io) {
    check_1d(p);
    if (!(dt > 0)) throw InvalidArgument("dt must be positive");
    if (!(T >= 0)) throw InvalidArgument("T must be nonnegative");
    if (sample_every < 1) throw InvalidArgument("sample_every must be >= 1");
    Trajectory1D tr;
    tr.params = p;
    tr.dt = dt;
    tr.sample_every = sample_every;
    const long nsteps = std::lround(T / dt);
    auto push = [&](double t, double w, double wp) {
        tr.t.push_back(t);
        tr.w.push_back(w);
        tr.wp.push_back(wp);
        tr.H.push_back(hamiltonian(w, wp, p));
    };
    if (w0 == 0.0 && w0p == 0.0) {
        tr.trivial = true;
        for (long j = 0; j <= nsteps; j += sample_every) push(j * dt, 0.0, 0.0);
        return tr;
    }
    const Flow f = flow_1d(p, io);
    Driver d(f, dt);
    State s{0.0, w0, w0p};
    push(0.0, w0, w0p);
    d.run(s, nsteps, sample_every, Event::None, [&](long, const State& x) { push(x.t, x.w, x.p); });
    if (nsteps % sample_every != 0) push(s.t, s.w, s.p);
    tr.H0 = d.stats.E0;
    tr.min_H = d.stats.min_E;
    tr.max_H = d.stats.max_E;
    for (double H : tr.H) {
        tr.min_H = std::min(tr.min_H, H);
        tr.max_H = std::max(tr.max_H, H);
    }
    tr.max_drift = std::max(tr.max_H - tr.H0, tr.H0 - tr.min_H) / std::max(tr.H0, 1e-30);
    tr.steps = d.stats.steps;
    tr.layers = d.stats.layers;
    tr.halvings = d.stats.halvings;
    return tr;
}

TurningPoint first_turning_point(double w0, double w0p, const ProblemParams& p, double dt,
                                 const IntegratorOptions& io) {
    check_1d(p);
    if (w0 == 0.0 && w0p == 0.0) throw InvalidArgument("trivial trajectory has no turning point");
    const Flow f = flow_1d(p, io);
    Driver d(f, dt);
    State s{0.0, w0, w0p};
    if (w0p == 0.0) return {0.0, w0};
    if (!d.run(s, std::numeric_limits<long>::max() / 2, 1 << 30, Event::Turn, [](long, const State&) {})) {
        throw DomainError("no turning point found");
    }
    return {s.t, s.w};
}

void write_trajectory_csv(const std::string& path, const Trajectory1D& tr) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot write " + path);
    std::fprintf(fp, "t,w,wp,H\n");
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g\n", tr.t[i], tr.w[i], tr.wp[i], tr.H[i]);
    }
    std::fclose(fp);
}

NoProfileReport verify_no_1d_singular_profile(const ProblemParams& p, const std::vector<double>& slopes,
                                              double horizon, double tol) {
    check_1d(p);
    if (!(p.mu * p.lambda_plus > 0 && p.mu * p.lambda_minus > 0)) {
        throw InvalidArgument("verify_no_1d_singular_profile requires mu*lambda_plus > 0 and mu*lambda_minus > 0");
    }
    NoProfileReport rep;
    rep.horizon = horizon;
    rep.pass = true;
    const Flow f = flow_1d(p, {});
    for (double sl : slopes) {
        if (sl == 0.0) continue;
        Driver d(f, 1.0, true);
        State s{0.0, 0.0, sl};
        const long forever = std::numeric_limits<long>::max() / 2;
        auto none = [](long, const State&) {};
        // two crossings close one oscillation
        const bool half = d.run(s, forever, 1 << 30, Event::Zero, none);
        const double E0 = d.stats.E0;
        double minE = d.stats.min_E;
        Driver d2(f, 1.0, true);
        const bool full = half && d2.run(s, forever, 1 << 30, Event::Zero, none);
        minE = std::min(minE, d2.stats.min_E);
        const double expected = 0.5 * sl * sl;
        rep.slopes.push_back(sl);
        rep.min_H.push_back(minE);
        rep.expected.push_back(expected);
        rep.rel_error.push_back(std::abs(minE - expected) / expected);
        rep.period.push_back(full ? s.t : kInf);
        if (!full || !(std::abs(minE - expected) <= tol * expected) || !(minE > 0) || !(E0 > 0)) rep.pass = false;
    }
    return rep;
}

// ---------------------------------------------------------------- angular

namespace {

double first_zero(double mu, double q, double lambda, double dt) {
    const double g = gamma_q(q);
    const Flow f(q, mu * lambda, mu * lambda, g * g, {});
    Driver d(f, dt);
    State s{0.0, 1.0, 0.0};
    if (!d.run(s, std::lround(4 * std::numbers::pi / dt), 1 << 30, Event::Zero, [](long, const State&) {})) {
        throw DomainError("angular shot did not reach a zero");
    }
    return s.t;
}

}  // namespace

CollocationDefect collocation_defect(const std::vector<double>& phi, const std::vector<double>& phip, double mu,
                                     double q, double lambda, int substeps) {
    const std::size_t n = phi.size();
    if (n < 8 || phip.size() != n) throw InvalidArgument("collocation_defect needs matching samples");
    const double g = gamma_q(q);
    const Flow f(q, mu * lambda, mu * lambda, g * g, {});
    const double h = 2 * std::numbers::pi / static_cast<double>(n);
    double amp = 0, slope = 0;
    for (std::size_t i = 0; i < n; ++i) {
        amp = std::max(amp, std::abs(phi[i]));
        slope = std::max(slope, std::abs(phip[i]));
    }
    CollocationDefect out;
    const double E0 = f.energy(phi[0], phip[0]);
    for (std::size_t i = 0; i < n; ++i) {
        Driver d(f, h / substeps);
        State s{0.0, phi[i], phip[i]};
        d.run(s, substeps, substeps, Event::None, [](long, const State&) {});
        const std::size_t nx = (i + 1) % n;
        out.defect = std::max(out.defect, std::abs(s.w - phi[nx]) / amp);
        out.slope = std::max(out.slope, std::abs(s.p - phip[nx]) / slope);
        out.energy = std::max(out.energy, std::abs(f.energy(phi[i], phip[i]) - E0) / E0);
    }
    return out;
}

double AngularProfile::evaluate(double th) const {
    const std::size_t n = phi.size();
    const double h = 2 * std::numbers::pi / static_cast<double>(n);
    double r = std::fmod(th, 2 * std::numbers::pi);
    if (r < 0) r += 2 * std::numbers::pi;
    std::size_t i = std::min(static_cast<std::size_t>(r / h), n - 1);
    const double s = (r - i * h) / h, s2 = s * s, s3 = s2 * s;
    const std::size_t nx = (i + 1) % n;
    return (2 * s3 - 3 * s2 + 1) * phi[i] + (s3 - 2 * s2 + s) * h * phip[i] + (-2 * s3 + 3 * s2) * phi[nx] +
           (s3 - s2) * h * phip[nx];
}

AngularProfile angular_shoot(int k, const ProblemParams& p, const AngularOptions& ao) {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    check_1d(p);
    if (p.lambda_plus != p.lambda_minus) throw InvalidArgument("angular search requires lambda_plus == lambda_minus");
    if (ao.samples % (2 * k) != 0) throw InvalidArgument("samples must be a multiple of 2k");
    AngularProfile a;
    a.k = k;
    a.q = p.q;
    a.lambda = p.lambda_plus;
    a.gamma = gamma_q(p.q);
    const double target = std::numbers::pi / (2 * k);
    const double dt = 2 * std::numbers::pi / (ao.samples * ao.substeps);
    auto Z = [&](double mu) { return first_zero(mu, p.q, a.lambda, dt) - target; };

    for (int i = 0; i < ao.scan_points; ++i) {
        const double mu = ao.mu_min * std::pow(ao.mu_max / ao.mu_min, static_cast<double>(i) / (ao.scan_points - 1));
        a.scan.emplace_back(mu, Z(mu));
    }
    for (std::size_t i = 0; i + 1 < a.scan.size(); ++i) {
        const double f0 = a.scan[i].second, f1 = a.scan[i + 1].second;
        if (f0 == 0 || (f0 > 0) != (f1 > 0)) a.brackets.emplace_back(a.scan[i].first, a.scan[i + 1].first);
    }
    if (a.brackets.empty()) {
        std::ostringstream msg;
        msg << "no bracket for mu in [" << ao.mu_min << ", " << ao.mu_max << "]; first-zero offsets:";
        for (const auto& [mu, v] : a.scan) msg << ' ' << mu << ':' << v;
        throw DomainError(msg.str());
    }
    for (auto [lo, hi] : a.brackets) {
        double flo = Z(lo);
        for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = Z(mid);
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        a.roots.push_back(0.5 * (lo + hi));
    }
    a.mu = a.roots.front();

    const double g = a.gamma;
    const Flow f(p.q, a.mu * a.lambda, a.mu * a.lambda, g * g, {});
    Driver d(f, dt);
    const double A = std::sqrt(g * g + 2 * a.mu * a.lambda / p.q);
    State s{0.0, 0.0, A};
    a.theta.push_back(0.0);
    a.phi.push_back(0.0);
    a.phip.push_back(A);
    const long nsteps = static_cast<long>(ao.samples) * ao.substeps;
    d.run(s, nsteps, ao.substeps, Event::None, [&](long j, const State& x) {
        if (j == nsteps) return;
        a.theta.push_back(x.t);
        a.phi.push_back(x.w);
        a.phip.push_back(x.p);
    });
    // close the period on the 2k-th zero, where the landing is exact
    State z{0.0, 0.0, A};
    for (int c = 0; c < 2 * k; ++c) {
        Driver dz(f, dt);
        dz.run(z, nsteps, 1 << 30, Event::Zero, [](long, const State&) {});
    }
    a.periodicity_residual = std::abs(z.p) * std::abs(z.t - 2 * std::numbers::pi) + std::abs(z.p - A);
    const CollocationDefect cd = collocation_defect(a.phi, a.phip, a.mu, p.q, a.lambda, 4 * ao.substeps);
    a.collocation_defect = cd.defect;
    a.energy_defect = cd.energy;
    const double amp = *std::max_element(a.phi.begin(), a.phi.end());
    std::vector<int> signs;
    for (double v : a.phi) {
        if (std::abs(v) > 1e-9 * amp) signs.push_back(v > 0 ? 1 : -1);
    }
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (signs[i] != signs[(i + 1) % signs.size()]) ++a.sign_changes;
    }
    if (a.sign_changes != 2 * k || !(a.collocation_defect <= ao.tol) || !(a.periodicity_residual <= ao.tol)) {
        std::ostringstream msg;
        msg << "angular profile rejected: sign changes " << a.sign_changes << ", defect " << a.collocation_defect
            << ", periodicity " << a.periodicity_residual;
        throw DomainError(msg.str());
    }
    return a;
}

void write_angular_csv(const std::string& path, const AngularProfile& a) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot write " + path);
    std::fprintf(fp, "theta,phi,phip\n");
    for (std::size_t i = 0; i < a.theta.size(); ++i) {
        std::fprintf(fp, "%.17g,%.17g,%.17g\n", a.theta[i], a.phi[i], a.phip[i]);
    }
    std::fclose(fp);
}

RelaxationProfile angular_relax(int k, const ProblemParams& p, int M) {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    check_1d(p);
    if (M % (4 * k) != 0) throw InvalidArgument("M must be a multiple of 4k");
    const int m = M / (2 * k);   // intervals on the half arc
    const int n = m - 1;         // interior unknowns
    const double h = 2 * std::numbers::pi / M;
    const double g2 = gamma_q(p.q) * gamma_q(p.q);
    const double lam = p.lambda_plus, q = p.q;
    RelaxationProfile r;
    r.M = M;
    Eigen::VectorXd x(n + 1);
    for (int i = 0; i < n; ++i) x[i] = std::sin(k * (i + 1) * h);
    x[n] = 1.0;
    auto phi_at = [&](int i) { return (i <= 0 || i >= m) ? 0.0 : x[i - 1]; };
    Eigen::VectorXd R(n + 1);
    bool converged = false;
    for (r.iterations = 0; r.iterations < 100; ++r.iterations) {
        const double mu = x[n];
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(4 * n + 2);
        for (int i = 1; i <= n; ++i) {
            const double v = phi_at(i);
            R[i - 1] = (phi_at(i + 1) - 2 * v + phi_at(i - 1)) / (h * h) + g2 * v + mu * lam * std::pow(v, q - 1);
            trip.emplace_back(i - 1, i - 1, -2 / (h * h) + g2 + mu * lam * (q - 1) * std::pow(v, q - 2));
            if (i > 1) trip.emplace_back(i - 1, i - 2, 1 / (h * h));
            if (i < n) trip.emplace_back(i - 1, i, 1 / (h * h));
            trip.emplace_back(i - 1, n, lam * std::pow(v, q - 1));
        }
        R[n] = phi_at(m / 2) - 1.0;
        trip.emplace_back(n, m / 2 - 1, 1.0);
        Eigen::SparseMatrix<double> J(n + 1, n + 1);
        J.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) throw DomainError("relaxation Jacobian is singular");
        const Eigen::VectorXd dx = lu.solve(R);
        x -= dx;
        for (int i = 0; i < n; ++i) x[i] = std::max(x[i], 1e-14);
        // residuals carry a 1/h² rounding floor, so convergence is judged on the update
        if (dx.lpNorm<Eigen::Infinity>() < 1e-13) {
            converged = true;
            break;
        }
    }
    if (!converged) throw DomainError("angular relaxation did not converge");
    r.mu = x[n];
    for (int i = 0; i <= m; ++i) {
        r.theta.push_back(i * h);
        r.phi.push_back(phi_at(i));
    }
    return r;
}

RelaxationProfile richardson(const RelaxationProfile& coarse, const RelaxationProfile& fine, double q) {
    if (fine.M != 2 * coarse.M) throw InvalidArgument("richardson needs grids M and 2M");
    const double f = std::pow(2.0, 1 + q);
    RelaxationProfile r = coarse;
    for (std::size_t i = 0; i < r.phi.size(); ++i) r.phi[i] = (f * fine.phi[2 * i] - coarse.phi[i]) / (f - 1);
    r.mu = (f * fine.mu - coarse.mu) / (f - 1);
    return r;
}

}  // namespace lelab
