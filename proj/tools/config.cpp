#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "lelab/nonlinearity.hpp"

namespace lelab::cli {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config key '" + key + "': " + what);
}

double number(const json& j, const std::string& key) {
    if (!j.is_number()) fail(key, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(key, "must be finite");
    return v;
}

long integer(const json& j, const std::string& key) {
    if (j.is_number_integer()) return j.get<long>();
    const double v = number(j, key);
    if (v != std::floor(v)) fail(key, "expected an integer");
    return static_cast<long>(v);
}

std::vector<double> numbers(const json& j, const std::string& key) {
    if (!j.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : j) out.push_back(number(e, key));
    return out;
}

std::vector<int> integers(const json& j, const std::string& key) {
    if (!j.is_array()) fail(key, "expected an array of integers");
    std::vector<int> out;
    for (const auto& e : j) out.push_back(static_cast<int>(integer(e, key)));
    return out;
}

std::vector<std::pair<double, double>> pairs(const json& j, const std::string& key) {
    if (!j.is_array()) fail(key, "expected an array of [a, b] pairs");
    std::vector<std::pair<double, double>> out;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) fail(key, "expected an array of [a, b] pairs");
        out.emplace_back(number(e[0], key), number(e[1], key));
    }
    return out;
}

void require(bool ok, const std::string& key, const std::string& bound) {
    if (!ok) fail(key, "must satisfy " + bound);
}

void validate(const Config& c) {
    require(c.q > 0.0 && c.q < 1.0, "q", "0 < q < 1");
    require(c.lambda_plus >= 0.0, "lambda_plus", "lambda_plus >= 0");
    require(c.lambda_minus >= 0.0, "lambda_minus", "lambda_minus >= 0");
    require(c.mu >= 0.0, "mu", "mu >= 0");
    require(c.n >= 33 && c.n % 2 == 1, "n", "n odd and n >= 33");
    require(c.eps0 > 0.0, "eps0", "eps0 > 0");
    require(c.eps_steps >= 0 && c.eps_steps <= 60, "eps_steps", "0 <= eps_steps <= 60");
    require(c.tol > 0.0, "tol", "tol > 0");
    require(c.k >= 0 && c.k <= 64, "k", "0 <= k <= 64");
    for (const Point& x : c.centers) require(std::hypot(x.x, x.y) < 1.0, "centers", "|x0| < 1");
    for (double r : c.radii) require(r > 0.0 && r < 1.0, "radii", "0 < r < 1");
    for (double r : c.scales) require(r > 0.0 && r < 1.0, "scales", "0 < r < 1");
    for (double t : c.t_list) require(t >= 0.0 && t <= 2.0, "t_list", "0 <= t <= 2");
    for (const auto& [g, t] : c.gt_pairs) {
        require(g > 0.0, "gt_pairs", "gamma > 0");
        require(t >= 0.0 && t <= 2.0, "gt_pairs", "0 <= t <= 2");
    }
    require(c.T > 0.0, "T", "T > 0");
    require(c.dt > 0.0 && c.dt <= c.T, "dt", "0 < dt <= T");
    require(c.sample_every >= 1, "sample_every", "sample_every >= 1");
    require(c.samples >= 16, "samples", "samples >= 16");
    for (int id : c.criteria) require(id >= 1 && id <= 15, "criteria", "1 <= id <= 15");
    for (int k : c.fleet_ks) require(k >= 1 && k <= 6, "fleet_ks", "1 <= k <= 6");
    for (double q : c.fleet_q) require(q > 0.0 && q < 1.0, "fleet_q", "0 < q < 1");
    require(c.trajectories >= 1, "trajectories", "trajectories >= 1");
    require(c.slope_min > 0.0 && c.slope_max >= c.slope_min, "slope_min", "0 < slope_min <= slope_max");
    require(c.fleet_T > 0.0, "fleet_T", "fleet_T > 0");
    require(c.fleet_dt > 0.0 && c.fleet_dt <= c.fleet_T, "fleet_dt", "0 < fleet_dt <= fleet_T");
    require(c.regular_points >= 1, "regular_points", "regular_points >= 1");
}

}  // namespace

std::vector<double> Config::resolved_t_list() const { return t_list.empty() ? std::vector<double>{0.0, q, 2.0} : t_list; }

std::vector<std::pair<double, double>> Config::resolved_gt_pairs() const {
    if (!gt_pairs.empty()) return gt_pairs;
    const double g = gamma_q(q);
    return {{1.0, q}, {g, q}, {g, 2.0}};
}

Config parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    Config c;
    static const std::set<std::string> known{
        "pipeline", "q",       "lambda_plus", "lambda_minus", "mu",        "n",         "eps0",
        "eps_steps", "tol",    "k",           "centers",      "radii",     "scales",    "t_list",
        "gt_pairs", "seed",    "input",       "w0",           "w0p",       "T",         "dt",
        "sample_every", "samples", "criteria", "fleet_ks",    "fleet_q",   "trajectories",
        "slope_min", "slope_max", "fleet_T",  "fleet_dt",     "regular_points"};
    for (const auto& [key, v] : j.items()) {
        if (!known.count(key)) fail(key, "unknown key");
    }
    auto has = [&](const char* key) { return j.contains(key) && !j[key].is_null(); };
    auto num = [&](const char* key, double& dst) {
        if (has(key)) dst = number(j[key], key);
    };
    auto integ = [&](const char* key, int& dst) {
        if (has(key)) dst = static_cast<int>(integer(j[key], key));
    };

    if (has("pipeline")) {
        if (!j["pipeline"].is_string()) fail("pipeline", "expected a string");
        c.pipeline = j["pipeline"].get<std::string>();
        if (std::find(kPipelines.begin(), kPipelines.end(), c.pipeline) == kPipelines.end())
            fail("pipeline", "unknown pipeline '" + c.pipeline + "'");
    }
    num("q", c.q);
    num("lambda_plus", c.lambda_plus);
    num("lambda_minus", c.lambda_minus);
    num("mu", c.mu);
    integ("n", c.n);
    num("eps0", c.eps0);
    integ("eps_steps", c.eps_steps);
    num("tol", c.tol);
    integ("k", c.k);
    if (has("centers")) {
        c.centers.clear();
        for (const auto& [x, y] : pairs(j["centers"], "centers")) c.centers.push_back({x, y});
    }
    if (has("radii")) c.radii = numbers(j["radii"], "radii");
    if (has("scales")) c.scales = numbers(j["scales"], "scales");
    if (has("t_list")) c.t_list = numbers(j["t_list"], "t_list");
    if (has("gt_pairs")) c.gt_pairs = pairs(j["gt_pairs"], "gt_pairs");
    if (has("seed")) {
        const long s = integer(j["seed"], "seed");
        require(s >= 0, "seed", "seed >= 0");
        c.seed = static_cast<std::uint64_t>(s);
    }
    if (has("input")) {
        if (!j["input"].is_string()) fail("input", "expected a field dump stem");
        c.input = j["input"].get<std::string>();
    }
    num("w0", c.w0);
    num("w0p", c.w0p);
    num("T", c.T);
    num("dt", c.dt);
    integ("sample_every", c.sample_every);
    integ("samples", c.samples);
    if (has("criteria")) c.criteria = integers(j["criteria"], "criteria");
    if (has("fleet_ks")) c.fleet_ks = integers(j["fleet_ks"], "fleet_ks");
    if (has("fleet_q")) c.fleet_q = numbers(j["fleet_q"], "fleet_q");
    integ("trajectories", c.trajectories);
    num("slope_min", c.slope_min);
    num("slope_max", c.slope_max);
    num("fleet_T", c.fleet_T);
    num("fleet_dt", c.fleet_dt);
    integ("regular_points", c.regular_points);
    validate(c);
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

nlohmann::ordered_json to_json(const Config& c) {
    nlohmann::ordered_json j;
    if (!c.pipeline.empty()) j["pipeline"] = c.pipeline;
    j["q"] = c.q;
    j["lambda_plus"] = c.lambda_plus;
    j["lambda_minus"] = c.lambda_minus;
    j["mu"] = c.mu;
    j["n"] = c.n;
    j["eps0"] = c.eps0;
    j["eps_steps"] = c.eps_steps;
    j["tol"] = c.tol;
    j["k"] = c.k;
    auto& centers = j["centers"] = nlohmann::ordered_json::array();
    for (const Point& x : c.centers) centers.push_back({x.x, x.y});
    j["radii"] = c.radii;
    j["scales"] = c.scales;
    j["t_list"] = c.resolved_t_list();
    auto& gt = j["gt_pairs"] = nlohmann::ordered_json::array();
    for (const auto& [g, t] : c.resolved_gt_pairs()) gt.push_back({g, t});
    j["seed"] = c.seed;
    j["input"] = c.input;
    j["w0"] = c.w0;
    j["w0p"] = c.w0p;
    j["T"] = c.T;
    j["dt"] = c.dt;
    j["sample_every"] = c.sample_every;
    j["samples"] = c.samples;
    j["criteria"] = c.criteria;
    j["fleet_ks"] = c.fleet_ks;
    j["fleet_q"] = c.fleet_q;
    j["trajectories"] = c.trajectories;
    j["slope_min"] = c.slope_min;
    j["slope_max"] = c.slope_max;
    j["fleet_T"] = c.fleet_T;
    j["fleet_dt"] = c.fleet_dt;
    j["regular_points"] = c.regular_points;
    return j;
}

}  // namespace lelab::cli
