#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lelab/grid.hpp"

namespace lelab {

/// The iteration cap was hit before the residual dropped below tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, ScalarField last, double residual)
        : std::runtime_error(what), last_iterate(std::move(last)), residual(residual) {}
    ScalarField last_iterate;
    double residual;
};

/// Optional arctan((u - ū)²) penalty; f = 2(u-ū)/(1+(u-ū)⁴) enters the equation.
struct Penalty {
    const ScalarField* reference = nullptr;
};

/// Discrete energy ½Σ_edges(u_i-u_j)² - h²Σ G_eps(u_i) over interior nodes.
/// Edges joining two non-interior nodes are omitted (they are constant).
double energy(const ScalarField& u, const ProblemParams& p);
/// h²Σ arctan((u-ū)²) over interior nodes.
double penalty_value(const ScalarField& u, const ScalarField& reference);
/// f = 2d/(1+d⁴) with d = u - ū on interior nodes.
ScalarField penalty_forcing(const ScalarField& u, const ScalarField& reference);

/// Sup over interior nodes of |-Δ_h u - g_eps(u) + f|.
double euler_lagrange_residual(const ScalarField& u, const ProblemParams& p, const Penalty& pen = {});

struct SolverOptions {
    double tol = 1e-8;
    int max_iterations = 50000;
    int descent_iterations = 200;      ///< cap on the preconditioned gradient phase
    double descent_switch = 1e-3;      ///< residual at which Newton takes over
    int polish_steps = 2;              ///< extra Newton steps once below tol
    /// Newton on the true Hessian with residual-based damping instead of energy descent.
    /// Used for saddle-type local problems.
    bool newton_only = false;
};

struct SolveStats {
    int iterations = 0;
    int newton_steps = 0;
    double residual = 0.0;
    double energy = 0.0;
};

/// Minimize the fixed-ε energy (plus penalty) from u0. Requires p.epsilon > 0.
ScalarField minimize_fixed_eps(const ScalarField& u0, const ProblemParams& p, const SolverOptions& opt,
                               const Penalty& pen = {}, SolveStats* stats = nullptr);

struct ApproximationEntry {
    double epsilon = 0.0;
    ScalarField u;
    ScalarField f;
    double energy = 0.0;        ///< regularized energy (with penalty when present)
    double residual_inf = 0.0;
    double step_sup = 0.0;      ///< ‖u_n - u_{n-1}‖_∞, 0 for the first entry
    double step_h1 = 0.0;       ///< H¹ norm of u_n - u_{n-1} on the compact set K
    double penalty = 0.0;       ///< ∫ arctan((u_n - ū)²)
    double f_sup = 0.0;
    int iterations = 0;
};

/// The (ε_n, u_n, f_n) sequence produced by continuation.
struct ApproximationSequence {
    ProblemParams params;
    std::vector<ApproximationEntry> entries;
    bool failed = false;
    std::string failure;

    [[nodiscard]] const ApproximationEntry& last() const { return entries.back(); }
};

/// ε_n = eps0 * 2^{-n}, n = 0..steps.
std::vector<double> halving_schedule(double eps0, int steps);

/// Warm-started solves along a strictly decreasing ε schedule (f_n ≡ 0).
/// Non-convergence marks the sequence as failed and returns the partial result.
/// With reseed_trivial, an entry that lands in the linear regime (sup|u| <= ε_n)
/// makes the next entry start from u0 again instead of from that entry.
ApproximationSequence continuation(const ProblemParams& p, const std::vector<double>& schedule,
                                   const ScalarField& u0, const SolverOptions& opt,
                                   bool reseed_trivial = false);

/// Same, minimizing energy + ∫arctan((u-ū)²); f_n recorded on every entry.
/// The first solve starts from ū.
ApproximationSequence penalized_minimize(const ScalarField& u_bar, const ProblemParams& p,
                                         const std::vector<double>& schedule, const SolverOptions& opt);

/// H¹ norm on the interior nodes at distance >= margin from the non-interior set.
double h1_norm_compact(const ScalarField& d, double margin);

/// Solve the equation on a square window centred at `center` with half-width
/// `half_width`, using Dirichlet data interpolated from `parent`. The lattice is
/// shifted by `offset` (in units of the local spacing) to keep nodes off a nodal line.
ScalarField refine_local(const ScalarField& parent, const ProblemParams& p, Point center, double half_width,
                         int n, double offset, const SolverOptions& opt);

}  // namespace lelab
