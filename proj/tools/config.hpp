#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lelab/grid.hpp"

namespace lelab::cli {

/// Malformed or out-of-range configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string> kPipelines{"solve",     "sector",  "scan",    "nodal",
                                                 "blowup",    "profile1d", "angular", "verify-all"};

struct Config {
    std::string pipeline;  ///< optional in the file; must agree with the command line when present

    double q = 0.5;
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
    double mu = 1.0;

    // PDE pipelines
    int n = 257;
    double eps0 = 0.1;
    int eps_steps = 14;
    double tol = 1e-8;
    int k = 2;  ///< 0 selects the disc; k >= 1 the reflected sector solution
    std::vector<Point> centers{{0.0, 0.0}};
    std::vector<double> radii{0.2, 0.4, 0.6};
    std::vector<double> scales{0.5, 0.25, 0.125, 0.0625};
    std::vector<double> t_list;                        ///< empty: {0, q, 2}
    std::vector<std::pair<double, double>> gt_pairs;   ///< empty: {(1, q), (γ, q), (γ, 2)}
    std::uint64_t seed = 1;
    std::string input;  ///< field dump stem to analyse instead of solving

    // profile1d
    double w0 = 0.0;
    double w0p = 1.0;
    double T = 10.0;
    double dt = 1e-4;
    int sample_every = 100;

    // angular
    int samples = 2048;

    // verify-all
    std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
    std::vector<int> fleet_ks{1, 2, 3};
    std::vector<double> fleet_q{0.3, 0.5, 0.7};
    int trajectories = 20;
    double slope_min = 1.0;
    double slope_max = 30.0;
    double fleet_T = 100.0;
    double fleet_dt = 1e-4;
    int regular_points = 10;

    [[nodiscard]] std::vector<double> resolved_t_list() const;
    [[nodiscard]] std::vector<std::pair<double, double>> resolved_gt_pairs() const;
};

/// Parse and validate; unknown keys and violated bounds raise ConfigError.
Config parse_config(const nlohmann::json& j);
Config load_config(const std::string& path);

/// Every key with its effective value.
nlohmann::ordered_json to_json(const Config& c);

}  // namespace lelab::cli
