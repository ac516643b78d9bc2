#pragma once

#include <string>
#include <vector>

#include "lelab/solver.hpp"

namespace lelab {

/// ‖u‖_{x0,r} = (∫_B |∇u|² + (1/r)∫_S u²)^{1/2} in two dimensions.
double scaled_norm(const FieldSampler& s, Point x0, double r);

/// h^{α_max} ‖∇u‖_∞ over interior nodes.
double default_tau_grad(const FieldSampler& s);

struct NodalPoint {
    Point x;
    double grad = 0.0;
};

struct NodalSet {
    std::vector<std::vector<Point>> segments;  ///< polylines of u = 0
    std::vector<NodalPoint> regular_points;    ///< nodal nodes with |∇u| > τ
    std::vector<NodalPoint> singular_points;   ///< nodal nodes with |∇u| <= τ
    std::vector<NodalPoint> singular_clusters; ///< one representative per 2h-cluster
    double tau = 0.0;
};

/// Marching squares on cells with four interior corners (0 counts as nonnegative),
/// plus classification of nodal nodes farther than `boundary_margin` from the boundary.
NodalSet extract_nodal(const FieldSampler& s, double tau, double boundary_margin = 0.1);

enum class OrderClass { One, Gamma, Unresolved, Degenerate };
std::string to_string(OrderClass c);

struct VanishingOrder {
    double beta = 0.0;     ///< slope of ½ log(H/r) against log r
    double fit_r2 = 0.0;
    double beta_h1 = 0.0;  ///< slope of log ‖u‖_{x0,r}
    OrderClass cls = OrderClass::Unresolved;
    std::vector<double> radii;
};

/// Geometric radii from r_min to r_max (count >= 8); class by nearest of {1, γ_q}
/// within `window` and fit_r2 >= 0.99.
VanishingOrder vanishing_order(const FieldSampler& s, Point x0, double r_min, double r_max, int count = 10,
                               double window = 0.1);

struct RefineOptions {
    int n = 257;
    std::vector<double> half_widths{0.1, 0.025};
    double offset = 0.5;     ///< lattice shift in local cells
    double r_min_cells = 4;  ///< fit starts at this many local spacings
    double r_max_fraction = 0.5;
    int count = 10;
    double window = 0.05;
};

struct RefinedOrder {
    VanishingOrder order;
    double h_final = 0.0;
};

/// Vanishing order from nested local solves around x0, which resolves the
/// order-one regime at regular nodal points below the parent spacing.
RefinedOrder vanishing_order_refined(const ScalarField& u, const ProblemParams& p, Point x0,
                                     const RefineOptions& ro, const SolverOptions& opt = {});

struct Nondegeneracy {
    double min_value = 0.0;   ///< min_r H / r^{1+2β}
    double at_r_max = 0.0;
    double ratio = 0.0;       ///< min_value / at_r_max
};

Nondegeneracy nondegeneracy(const FieldSampler& s, Point x0, double beta, double r_min, double r_max,
                            int count = 10);

struct BlowupSequence {
    Point center;
    double gamma = 0.0;
    std::vector<double> scales;
    std::vector<double> norms;        ///< ‖u‖_{x0,r_n}
    std::vector<double> alpha;        ///< (r_n^γ / ‖u‖_{x0,r_n})^{2/γ}
    std::vector<double> delta;        ///< ‖r∂_r v - γ v‖ / ‖v‖ on B_1 \ B_{1/4}
    std::vector<double> unit_norm;    ///< ‖v_n‖_{0,1} on the reference grid
    std::vector<ScalarField> profiles;
};

struct BlowupOptions {
    int ref_n = 129;
    double ref_half_width = 1.25;
    double floor_cells = 8;  ///< smallest admissible scale in source spacings
    bool keep_profiles = false;
};

/// v_n(x) = u(x0 + r_n x)/‖u‖_{x0,r_n} resampled on a reference square.
BlowupSequence blowup(const FieldSampler& s, Point x0, const std::vector<double>& scales, double gamma,
                      const BlowupOptions& bo = {});

struct DeadCoreReport {
    std::vector<double> deltas;
    std::vector<double> fractions;
    double slope = 0.0;
    bool trivial = false;
    bool pass = false;
};

/// ‖u‖_∞ · 0.1 · 2^{-j}, j = 0..count-1
std::vector<double> default_dead_core_deltas(const ScalarField& u, int count = 4);

/// Area fraction of {|u| < δ} over cells with interior corners (8x8 subsamples);
/// passes when the log-log slope is >= min_slope.
DeadCoreReport dead_core_check(const ScalarField& u, const std::vector<double>& deltas, double min_slope = 0.9);

/// Least-squares slope and coefficient of determination.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lelab
