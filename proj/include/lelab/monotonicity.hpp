#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "lelab/grid.hpp"

namespace lelab {

/// One radius of a frequency scan (N = 2).
struct RadiusRecord {
    double r = 0.0;
    double H = 0.0;
    std::vector<double> D;   ///< D_t per t in the scan's t_list
    std::vector<double> N;   ///< N_t = r D_t / H (NaN when degenerate)
    std::vector<double> W;   ///< W_{γ,t} per (γ,t) pair
    double w_identity = 0.0; ///< worst relative gap between W and (H/r^{1+2γ})(N_t - γ)
    double poh_res = 0.0;
    double dH_res = 0.0;
    double dD_res = 0.0;     ///< at t = q
    bool degenerate = false; ///< H below 1e-28
};

struct FrequencyScan {
    Point center;
    std::vector<double> t_list;
    std::vector<std::pair<double, double>> gt_pairs;
    std::vector<RadiusRecord> records;
};

/// {0, q, 2}
std::vector<double> default_t_list(double q);
/// {(1, q), (γ_q, q), (γ_q, 2)}
std::vector<std::pair<double, double>> default_gt_pairs(double q);

/// H, D_t, N_t, W_{γ,t} and identity residuals at each radius. Residuals whose
/// stencil r ± h leaves the domain are reported as NaN.
FrequencyScan scan(const FieldSampler& s, Point center, const std::vector<double>& radii,
                   const std::vector<double>& t_list, const std::vector<std::pair<double, double>>& gt_pairs);

/// D_t = ∫_B (|∇v|² - (t/q) F).
double D_t(const FieldSampler& s, Point c, double r, double t);

/// |H'_fd - H/r - 2∫ v ∂_ν v| / (H/r), with H'_fd the centred difference of step dr.
double dH_residual(const FieldSampler& s, Point c, double r, double dr);
/// Same, with the right-hand side H/r + 2 D_q (valid on solutions only).
double dH_residual_solution(const FieldSampler& s, Point c, double r, double dr);
/// Relative residual of ∫_S|∇v|² = -(4/(qr))∫_B F + ∫_S (2 v_ν² + (2/q) F).
double pohozaev_residual(const FieldSampler& s, Point c, double r);
/// Residual of D_t' = -(4/(qr))∫_B F + ∫_S (2 v_ν² + ((2-t)/q) F), relative to
/// the summed magnitudes of the right-hand side terms.
double dD_residual(const FieldSampler& s, Point c, double r, double t, double dr);
/// Relative residual of D_t = ∫_S v ∂_ν v - ((t-q)/q) ∫_B F.
double divergence_residual(const FieldSampler& s, Point c, double r, double t);

/// Header `r,H,D_t...,N_t...,W_g..._t...,poh_res,dH_res,dD_res`; 17 significant digits.
void write_scan_csv(std::ostream& os, const FrequencyScan& scan);

}  // namespace lelab
