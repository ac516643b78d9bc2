#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lelab {

struct AcceptanceConfig {
    bool fast = false;
    double q = 0.5;
    double lambda = 1.0;      ///< λ₊ = λ₋ for the sector fleet
    int n = 257;              ///< fleet resolution; fast mode uses 129
    double eps0 = 0.1;
    int eps_steps = 14;
    double tol = 1e-8;
    std::uint64_t seed = 1;
    std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
    std::vector<int> fleet_ks{1, 2, 3};
    std::vector<double> radii{0.2, 0.4, 0.6};
    std::vector<double> scales{0.5, 0.25, 0.125, 0.0625};
    int regular_points = 10;
    // one-dimensional fleet
    std::vector<double> fleet_q{0.3, 0.5, 0.7};
    int trajectories = 20;
    double slope_min = 1.0;
    double slope_max = 30.0;
    double T = 100.0;
    double dt = 1e-4;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string measured;
    std::string threshold;
    double seconds = 0.0;
};

struct AcceptanceReport {
    std::vector<CriterionResult> results;
    std::vector<std::string> warnings;
    double seconds = 0.0;
    [[nodiscard]] bool all_pass() const;
};

/// Run the selected criteria in order; `on_result` sees each line as soon as it is known.
AcceptanceReport run_acceptance(const AcceptanceConfig& cfg,
                                const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS C05 pohozaev identity | measured ... | threshold ... | 12.3 s"
std::string format_result(const CriterionResult& r);

}  // namespace lelab
