#pragma once

#include "lelab/solver.hpp"

namespace lelab {

struct SectorResult {
    ApproximationSequence sequence;  ///< on the sector grid
    int seed_used = 0;
    bool degenerate = false;         ///< λ₊ = λ₋ = 0: the zero field
};

/// Distance from (x, y) to the boundary of the sector {0<ρ<1, 0<θ<π/k}.
double distance_to_sector_boundary(double x, double y, int k);
/// Distance from (x, y) to the union of the 2k rays θ = jπ/k.
double distance_to_rays(double x, double y, int k);

/// Minimize on the sector S_k by ε-continuation. Requires λ₊ = λ₋.
/// The final entry must be nonnegative and strictly positive at nodes more than
/// 3h from the sector boundary; up to 5 seeds are tried before "positivity failed".
SectorResult solve_sector(int k, const ProblemParams& p, int n, const std::vector<double>& schedule,
                          const SolverOptions& opt);

/// Odd reflection of a sector field to the full disc (2k−1 reflections).
/// Nodes on the rays are set to 0.
ScalarField odd_reflect(const ScalarField& u_sector, int k);

struct ReflectionReport {
    double off_ray_residual = 0.0;  ///< sup away (> 3h) from the rays and the origin
    double ray_residual = 0.0;      ///< sup within 3h of the rays
    bool pass = false;              ///< off_ray_residual <= 10 tol
};

ReflectionReport verify_reflected_solution(const ScalarField& u, const ProblemParams& p, int k, double tol);

struct SignPatternReport {
    long checked = 0;
    long violations = 0;
};

/// u >= 0 on the even images R_k^{2j}(S_k), u <= 0 on the odd ones, strict away from the rays.
SignPatternReport check_sign_pattern(const ScalarField& u, int k);

}  // namespace lelab
