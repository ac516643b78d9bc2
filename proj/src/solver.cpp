#include "lelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace lelab {

namespace {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

double arctan_pen(double d) { return std::atan(d * d); }
double arctan_pen_d1(double d) { return 2.0 * d / (1.0 + d * d * d * d); }
double arctan_pen_d2(double d) {
    const double d4 = d * d * d * d;
    return (2.0 - 6.0 * d4) / ((1.0 + d4) * (1.0 + d4));
}

/// Discrete problem on the interior unknowns of a grid.
class Problem {
public:
    Problem(const ScalarField& boundary, const ProblemParams& p, const Penalty& pen)
        : g_(*boundary.grid), data_(boundary), p_(p), h2_(g_.h * g_.h) {
        const int N = static_cast<int>(g_.interior_count());
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(5 * static_cast<std::size_t>(N));
        bvec_ = Vec::Zero(N);
        for (int a = 0; a < N; ++a) {
            const int node = g_.interior_nodes[a];
            trip.emplace_back(a, a, 4.0);
            for (int nb : {node - 1, node + 1, node - g_.n, node + g_.n}) {
                const int b = g_.unknown_of[nb];
                if (b >= 0) {
                    trip.emplace_back(a, b, -1.0);
                } else {
                    bvec_[a] += data_.values[nb];
                }
            }
        }
        K_.resize(N, N);
        K_.setFromTriplets(trip.begin(), trip.end());
        if (pen.reference != nullptr) {
            has_pen_ = true;
            ref_ = Vec(N);
            for (int a = 0; a < N; ++a) ref_[a] = pen.reference->values[g_.interior_nodes[a]];
        }
        // energy of edges between two Dirichlet nodes is constant and left out
    }

    [[nodiscard]] int size() const { return static_cast<int>(K_.rows()); }
    [[nodiscard]] const SpMat& K() const { return K_; }
    [[nodiscard]] double h2() const { return h2_; }

    [[nodiscard]] Vec gather(const ScalarField& u) const {
        Vec x(size());
        for (int a = 0; a < size(); ++a) x[a] = u.values[g_.interior_nodes[a]];
        return x;
    }
    [[nodiscard]] ScalarField scatter(const Vec& x) const {
        ScalarField u = data_;
        for (int a = 0; a < size(); ++a) u.values[g_.interior_nodes[a]] = x[a];
        return u;
    }

    /// Energy; `scale` receives a magnitude used for roundoff-level comparisons.
    double energy(const Vec& x, double* scale = nullptr) const {
        // ½Σ(u_i-u_j)² over edges = ½xᵀKx - bᵀx + const, with the constant
        // ½Σ_{band nb}(u_nb)² collected per edge from interior nodes.
        const Vec Kx = K_ * x;
        double quad = 0.5 * x.dot(Kx) - bvec_.dot(x) + band_const();
        double pot = 0.0, pen = 0.0;
        for (int a = 0; a < size(); ++a) {
            pot += G_eps(x[a], p_);
            if (has_pen_) pen += arctan_pen(x[a] - ref_[a]);
        }
        if (scale != nullptr) *scale = std::abs(quad) + h2_ * (std::abs(pot) + std::abs(pen)) + 1e-300;
        return quad - h2_ * pot + h2_ * pen;
    }

    /// Gradient of the energy, i.e. h² times the Euler–Lagrange residual.
    [[nodiscard]] Vec gradient(const Vec& x) const {
        Vec gr = K_ * x - bvec_;
        for (int a = 0; a < size(); ++a) {
            double s = -g_eps(x[a], p_);
            if (has_pen_) s += arctan_pen_d1(x[a] - ref_[a]);
            gr[a] += h2_ * s;
        }
        return gr;
    }

    /// Diagonal of the potential part of the Hessian (h²(-g' + pen'')).
    [[nodiscard]] Vec hessian_diag(const Vec& x) const {
        Vec d(size());
        for (int a = 0; a < size(); ++a) {
            double s = -g_eps_prime(x[a], p_);
            if (has_pen_) s += arctan_pen_d2(x[a] - ref_[a]);
            d[a] = h2_ * s;
        }
        return d;
    }

    [[nodiscard]] double residual_inf(const Vec& grad) const { return grad.lpNorm<Eigen::Infinity>() / h2_; }

private:
    double band_const() const {
        if (band_const_cached_) return band_const_;
        double c = 0.0;
        for (int a = 0; a < size(); ++a) {
            const int node = g_.interior_nodes[a];
            for (int nb : {node - 1, node + 1, node - g_.n, node + g_.n}) {
                if (g_.unknown_of[nb] < 0) c += 0.5 * data_.values[nb] * data_.values[nb];
            }
        }
        band_const_ = c;
        band_const_cached_ = true;
        return c;
    }

    const DiscGrid& g_;
    ScalarField data_;
    ProblemParams p_;
    double h2_;
    SpMat K_;
    Vec bvec_;
    bool has_pen_ = false;
    Vec ref_;
    mutable bool band_const_cached_ = false;
    mutable double band_const_ = 0.0;
};

SpMat with_diag(const SpMat& K, const Vec& d) {
    SpMat A = K;
    for (int a = 0; a < A.rows(); ++a) A.coeffRef(a, a) += d[a];
    return A;
}

class Minimizer {
public:
    Minimizer(const Problem& P, const SolverOptions& opt) : P_(P), opt_(opt) {}

    Vec run(Vec x, SolveStats& st) {
        grad_ = P_.gradient(x);
        double res = P_.residual_inf(grad_);
        double scale = 0.0;
        double E = P_.energy(x, &scale);
        int it = 0;
        if (!opt_.newton_only && res > opt_.descent_switch) {
            descent(x, E, scale, res, it);
        }
        int polish = 0;
        bool converged = res <= opt_.tol;
        while (true) {
            if (converged) {
                if (polish >= opt_.polish_steps) break;
            }
            if (it >= opt_.max_iterations) {
                st.iterations = it;
                st.residual = res;
                throw ConvergenceError("iteration cap reached (residual " + std::to_string(res) + ")",
                                       P_.scatter(x), res);
            }
            ++it;
            ++st.newton_steps;
            Vec d = newton_direction(x);
            Vec x_new;
            bool ok = opt_.newton_only ? damp_residual(x, d, res, x_new) : armijo(x, d, E, scale, x_new);
            if (!ok) {
                if (converged) break;
                st.iterations = it;
                st.residual = res;
                throw ConvergenceError("line search failed (residual " + std::to_string(res) + ")",
                                       P_.scatter(x), res);
            }
            Vec g_new = P_.gradient(x_new);
            const double res_new = P_.residual_inf(g_new);
            if (converged) {
                ++polish;
                if (res_new >= res) break;  // polishing only keeps improvements
            }
            x = std::move(x_new);
            grad_ = std::move(g_new);
            res = res_new;
            E = P_.energy(x, &scale);
            if (res <= opt_.tol) converged = true;
        }
        st.iterations = it;
        st.residual = res;
        st.energy = E;
        return x;
    }

private:
    void descent(Vec& x, double& E, double& scale, double& res, int& it) {
        Eigen::SimplicialLDLT<SpMat> pre(P_.K());
        Vec x_prev, g_prev;
        double alpha = 1.0;
        for (int k = 0; k < opt_.descent_iterations && res > opt_.descent_switch; ++k) {
            if (it >= opt_.max_iterations) return;
            ++it;
            const Vec d = -pre.solve(grad_);
            if (k > 0) {
                const Vec s = x - x_prev;
                const Vec y = grad_ - g_prev;
                const double sy = s.dot(y);
                const double sKs = s.dot(P_.K() * s);
                alpha = sy > 0.0 ? std::clamp(sKs / sy, 1e-6, 1e6) : 1.0;
            }
            const double gd = grad_.dot(d);
            double t = alpha;
            bool accepted = false;
            Vec x_new;
            for (int b = 0; b < 40; ++b) {
                x_new = x + t * d;
                const double E_new = P_.energy(x_new);
                if (E_new <= E + 1e-4 * t * gd + 64 * std::numeric_limits<double>::epsilon() * scale) {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) return;  // Newton phase takes over
            x_prev = x;
            g_prev = grad_;
            x = x_new;
            grad_ = P_.gradient(x);
            E = P_.energy(x, &scale);
            res = P_.residual_inf(grad_);
        }
    }

    Vec newton_direction(const Vec& x) {
        const Vec diag = P_.hessian_diag(x);
        SpMat H = with_diag(P_.K(), diag);
        if (!analyzed_) {
            ldlt_.analyzePattern(H);
            analyzed_ = true;
        }
        ldlt_.factorize(H);
        bool usable = ldlt_.info() == Eigen::Success;
        if (usable && !opt_.newton_only) usable = ldlt_.vectorD().minCoeff() > 0.0;
        if (usable) {
            Vec d = -ldlt_.solve(grad_);
            if (d.allFinite()) return d;
        }
        if (opt_.newton_only) {
            Eigen::SparseLU<SpMat> lu;
            lu.compute(H);
            if (lu.info() != Eigen::Success) throw std::runtime_error("singular Jacobian in local Newton solve");
            return -lu.solve(grad_);
        }
        // drop negative curvature of the potential: K + diag(max(diag, 0)) is SPD
        H = with_diag(P_.K(), diag.cwiseMax(0.0));
        ldlt_.factorize(H);
        return -ldlt_.solve(grad_);
    }

    bool armijo(const Vec& x, const Vec& d, double E, double scale, Vec& x_new) const {
        const double gd = grad_.dot(d);
        const double slack = 64 * std::numeric_limits<double>::epsilon() * scale;
        double t = 1.0;
        for (int b = 0; b < 50; ++b) {
            x_new = x + t * d;
            if (P_.energy(x_new) <= E + 1e-4 * t * std::min(gd, 0.0) + slack) return true;
            t *= 0.5;
        }
        return false;
    }

    bool damp_residual(const Vec& x, const Vec& d, double, Vec& x_new) const {
        const double r0 = grad_.norm();
        double t = 1.0;
        for (int b = 0; b < 40; ++b) {
            x_new = x + t * d;
            if (P_.gradient(x_new).norm() <= (1.0 - 1e-4 * t) * r0) return true;
            t *= 0.5;
        }
        return false;
    }

    const Problem& P_;
    const SolverOptions& opt_;
    Vec grad_;
    Eigen::SimplicialLDLT<SpMat> ldlt_;
    bool analyzed_ = false;
};

}  // namespace

double energy(const ScalarField& u, const ProblemParams& p) {
    Problem P(u, p, {});
    return P.energy(P.gather(u));
}

double penalty_value(const ScalarField& u, const ScalarField& reference) {
    const DiscGrid& g = *u.grid;
    double s = 0.0;
    for (int node : g.interior_nodes) s += arctan_pen(u.values[node] - reference.values[node]);
    return s * g.h * g.h;
}

ScalarField penalty_forcing(const ScalarField& u, const ScalarField& reference) {
    ScalarField f(u.grid);
    for (int node : u.grid->interior_nodes) f.values[node] = arctan_pen_d1(u.values[node] - reference.values[node]);
    return f;
}

double euler_lagrange_residual(const ScalarField& u, const ProblemParams& p, const Penalty& pen) {
    const ScalarField lap = laplacian(u);
    double m = 0.0;
    for (int node : u.grid->interior_nodes) {
        double r = -lap.values[node] - g_eps(u.values[node], p);
        if (pen.reference != nullptr) r += arctan_pen_d1(u.values[node] - pen.reference->values[node]);
        m = std::max(m, std::abs(r));
    }
    return m;
}

ScalarField minimize_fixed_eps(const ScalarField& u0, const ProblemParams& p, const SolverOptions& opt,
                               const Penalty& pen, SolveStats* stats) {
    p.validate();
    if (!(p.epsilon > 0.0)) throw InvalidArgument("minimize_fixed_eps requires epsilon > 0");
    Problem P(u0, p, pen);
    SolveStats local;
    SolveStats& st = stats != nullptr ? *stats : local;
    st = SolveStats{};
    if (P.size() == 0) return u0;
    Minimizer M(P, opt);
    const Vec x = M.run(P.gather(u0), st);
    return P.scatter(x);
}

std::vector<double> halving_schedule(double eps0, int steps) {
    if (!(eps0 > 0.0)) throw InvalidArgument("eps0 must be > 0");
    if (steps < 0) throw InvalidArgument("eps_steps must be >= 0");
    std::vector<double> s;
    for (int i = 0; i <= steps; ++i) s.push_back(std::ldexp(eps0, -i));
    return s;
}

double h1_norm_compact(const ScalarField& d, double margin) {
    const DiscGrid& g = *d.grid;
    // Chebyshev distance (in nodes) to the nearest non-interior node
    std::vector<int> dist(g.size(), std::numeric_limits<int>::max());
    std::deque<int> queue;
    for (int node = 0; node < static_cast<int>(g.size()); ++node) {
        if (!g.interior(node)) {
            dist[node] = 0;
            queue.push_back(node);
        }
    }
    while (!queue.empty()) {
        const int node = queue.front();
        queue.pop_front();
        const int i = g.col(node), j = g.row(node);
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                const int a = i + di, b = j + dj;
                if (a < 0 || b < 0 || a >= g.n || b >= g.n) continue;
                const int nb = g.index(a, b);
                if (dist[nb] > dist[node] + 1) {
                    dist[nb] = dist[node] + 1;
                    queue.push_back(nb);
                }
            }
        }
    }
    const int need = static_cast<int>(std::ceil(margin / g.h));
    auto in_K = [&](int node) { return dist[node] >= need; };
    double l2 = 0.0, grad = 0.0;
    for (int node : g.interior_nodes) {
        if (!in_K(node)) continue;
        l2 += d.values[node] * d.values[node];
        for (int nb : {node + 1, node + g.n}) {
            if (in_K(nb)) {
                const double e = d.values[node] - d.values[nb];
                grad += e * e;
            }
        }
    }
    return std::sqrt(l2 * g.h * g.h + grad);
}

namespace {

ApproximationSequence run_schedule(const ProblemParams& p, const std::vector<double>& schedule,
                                   const ScalarField& u0, const SolverOptions& opt, const ScalarField* u_bar,
                                   bool reseed_trivial) {
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (!(schedule[i] < schedule[i - 1])) throw InvalidArgument("epsilon schedule must be strictly decreasing");
    }
    if (schedule.empty() || !(schedule.back() > 0.0)) throw InvalidArgument("epsilon schedule must be positive");
    ApproximationSequence seq;
    seq.params = p;
    ScalarField u = u0;
    const Penalty pen{u_bar};
    for (double eps : schedule) {
        const ProblemParams pe = p.with_epsilon(eps);
        ApproximationEntry e;
        e.epsilon = eps;
        SolveStats st;
        try {
            e.u = minimize_fixed_eps(u, pe, opt, pen, &st);
        } catch (const ConvergenceError& err) {
            seq.failed = true;
            seq.failure = "epsilon=" + std::to_string(eps) + ": " + err.what();
            return seq;
        }
        e.iterations = st.iterations;
        e.residual_inf = euler_lagrange_residual(e.u, pe, pen);
        e.f = u_bar != nullptr ? penalty_forcing(e.u, *u_bar) : ScalarField(e.u.grid);
        e.f_sup = e.f.sup_norm();
        e.penalty = u_bar != nullptr ? penalty_value(e.u, *u_bar) : 0.0;
        e.energy = energy(e.u, pe) + e.penalty;
        if (!seq.entries.empty()) {
            ScalarField diff(e.u.grid);
            for (std::size_t i = 0; i < diff.values.size(); ++i) {
                diff.values[i] = e.u.values[i] - seq.entries.back().u.values[i];
            }
            e.step_sup = diff.sup_norm();
            e.step_h1 = h1_norm_compact(diff, 0.2);
        }
        u = (reseed_trivial && e.u.sup_norm() <= eps) ? u0 : e.u;
        seq.entries.push_back(std::move(e));
    }
    return seq;
}

}  // namespace

ApproximationSequence continuation(const ProblemParams& p, const std::vector<double>& schedule,
                                   const ScalarField& u0, const SolverOptions& opt, bool reseed_trivial) {
    return run_schedule(p, schedule, u0, opt, nullptr, reseed_trivial);
}

ApproximationSequence penalized_minimize(const ScalarField& u_bar, const ProblemParams& p,
                                         const std::vector<double>& schedule, const SolverOptions& opt) {
    return run_schedule(p, schedule, u_bar, opt, &u_bar, false);
}

ScalarField refine_local(const ScalarField& parent, const ProblemParams& p, Point center, double half_width,
                         int n, double offset, const SolverOptions& opt) {
    if (!(half_width > 0.0)) throw InvalidArgument("refine_local: half_width must be > 0");
    const double hz = 2.0 * half_width / (n - 1);
    GridPtr g = build_square(n, center.x - half_width + offset * hz, center.y - half_width + offset * hz, hz);
    ScalarField u(g);
    for (std::size_t node = 0; node < g->size(); ++node) {
        const Point x = g->point(static_cast<int>(node));
        u.values[node] = bilinear(*parent.grid, parent.values, x.x, x.y, false);
    }
    SolverOptions local = opt;
    local.newton_only = true;
    // short ε ladder down to the parent's ε; each stage starts from the previous one
    std::vector<double> ladder;
    for (double e = 1e-3; e > p.epsilon; e *= 0.1) ladder.push_back(e);
    ladder.push_back(p.epsilon);
    for (double e : ladder) u = minimize_fixed_eps(u, p.with_epsilon(e), local);
    return u;
}

}  // namespace lelab
