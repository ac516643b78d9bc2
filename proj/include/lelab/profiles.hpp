#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lelab/nonlinearity.hpp"

namespace lelab {

/// ℋ(w, w') = ½w'² + (μλ₊/q)(w⁺)^q + (μλ₋/q)(w⁻)^q
double hamiltonian(double w, double wp, const ProblemParams& p);

/// Tuning of the hybrid integrator.
///
/// Away from w = 0 the flow is advanced with classical RK4 in t. Within
/// `layer_factor` steps of a crossing the state switches to the regularized
/// variables σ = sign(w)|w|^q, in which the vector field is bounded, and each
/// crossing is landed exactly.
struct IntegratorOptions {
    double layer_factor = 64.0;
    int layer_steps = 128;      ///< τ-steps per characteristic layer time
    int max_halvings = 10;
    double jump_tol = 1e-6;     ///< per-step |Δℋ| / ℋ(0) before halving
    long step_budget = 400'000'000;
};

struct Trajectory1D {
    ProblemParams params;
    double dt = 0.0;
    int sample_every = 1;
    std::vector<double> t, w, wp, H;
    double H0 = 0.0;
    double min_H = 0.0;
    double max_H = 0.0;
    double max_drift = 0.0;  ///< max |ℋ - ℋ(0)| / max(ℋ(0), 1e-30) over every step
    bool trivial = false;
    long steps = 0;
    long layers = 0;
    long halvings = 0;
};

/// −w'' = μ(λ₊(w⁺)^{q−1} − λ₋(w⁻)^{q−1}) on [0, T] from (w0, w0p); samples every
/// `sample_every` steps of size dt. (0, 0) returns the trivial trajectory.
Trajectory1D integrate_1d(double w0, double w0p, const ProblemParams& p, double T, double dt,
                          int sample_every = 1, const IntegratorOptions& io = {});

struct TurningPoint {
    double t = 0.0;
    double w = 0.0;
};

/// First time w' vanishes, landed exactly.
TurningPoint first_turning_point(double w0, double w0p, const ProblemParams& p, double dt = 1e-4,
                                 const IntegratorOptions& io = {});

void write_trajectory_csv(const std::string& path, const Trajectory1D& tr);

struct NoProfileReport {
    std::vector<double> slopes;
    std::vector<double> min_H;
    std::vector<double> expected;   ///< ½s²
    std::vector<double> rel_error;
    std::vector<double> period;     ///< time of one full oscillation
    double horizon = 0.0;
    bool pass = false;
};

/// For each nonzero slope s, follow one full oscillation from (0, s) in
/// regularized variables and record min ℋ; periodicity covers [0, horizon].
NoProfileReport verify_no_1d_singular_profile(const ProblemParams& p, const std::vector<double>& slopes,
                                              double horizon = 100.0, double tol = 1e-6);

/// 2π-periodic solution of φ'' + γ²φ + μλ(φ⁺)^{q−1} − μλ(φ⁻)^{q−1} = 0 with
/// exactly 2k sign changes, max φ = 1 and φ(0) = 0, φ'(0) > 0.
struct AngularProfile {
    int k = 0;
    double q = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double mu = 0.0;
    std::vector<double> theta, phi, phip;
    double periodicity_residual = 0.0; ///< |φ'|·|θ_2k − 2π| + |φ'(θ_2k) − φ'(0)| at the 2k-th zero
    double collocation_defect = 0.0;   ///< sup of sample-to-sample φ mismatch against a 4x finer integration
    double energy_defect = 0.0;        ///< relative drift of the angular energy
    int sign_changes = 0;
    std::vector<std::pair<double, double>> brackets;
    std::vector<double> roots;         ///< μ for every bracket found
    std::vector<std::pair<double, double>> scan;  ///< (μ, first zero - π/(2k))

    /// Cubic Hermite interpolation of the samples; θ taken mod 2π.
    [[nodiscard]] double evaluate(double th) const;
};

struct AngularOptions {
    int samples = 2048;
    int substeps = 4;
    double mu_min = 1e-4;
    double mu_max = 1e4;
    int scan_points = 81;
    double tol = 1e-8;
};

/// Bisection on μ for the first zero of the solution from (1, 0) at π/(2k).
/// Requires λ₊ = λ₋; throws DomainError with the scan trace when no bracket exists,
/// and when the profile misses `tol` or the 2k sign pattern.
AngularProfile angular_shoot(int k, const ProblemParams& p, const AngularOptions& ao = {});

/// Sample-to-sample mismatch of (θ, φ, φ', μ) by multiple shooting with
/// `substeps` steps per interval, relative to max |φ|. φ' is only Hölder
/// continuous at zeros, so its mismatch is reported separately and the
/// energy drift stands in for it.
struct CollocationDefect {
    double defect = 0.0;
    double slope = 0.0;   ///< φ' mismatch relative to max |φ'|
    double energy = 0.0;  ///< relative drift of ½φ'² + ½γ²φ² + (μλ/q)|φ|^q over the samples
};
CollocationDefect collocation_defect(const std::vector<double>& phi, const std::vector<double>& phip, double mu,
                                     double q, double lambda, int substeps);

void write_angular_csv(const std::string& path, const AngularProfile& a);

struct RelaxationProfile {
    int M = 0;                  ///< points per period
    std::vector<double> theta;  ///< half arc [0, π/k]
    std::vector<double> phi;
    double mu = 0.0;
    int iterations = 0;
};

/// Independent oracle: Newton on the second-order difference equation over the
/// half arc with φ = 0 at both ends and φ(π/(2k)) = 1, μ as bordered unknown.
RelaxationProfile angular_relax(int k, const ProblemParams& p, int M);

/// Richardson combination of grids M and 2M with error exponent 1+q.
RelaxationProfile richardson(const RelaxationProfile& coarse, const RelaxationProfile& fine, double q);

}  // namespace lelab
