#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "lelab/acceptance.hpp"
#include "lelab/field_io.hpp"
#include "lelab/monotonicity.hpp"
#include "lelab/nodal.hpp"
#include "lelab/profiles.hpp"
#include "lelab/symmetric.hpp"

namespace fs = std::filesystem;
using lelab::cli::Config;
using lelab::cli::ConfigError;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitAcceptance = 4;

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string g17(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// Collects produced files and writes the manifest last.
class Artifacts {
public:
    explicit Artifacts(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    [[nodiscard]] fs::path path(const std::string& name) const { return dir_ / name; }

    void add(const std::string& name) { files_.push_back(name); }

    std::ofstream open(const std::string& name) {
        std::ofstream os(path(name), std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + path(name).string());
        add(name);
        return os;
    }

    void field(const std::string& stem, const lelab::ScalarField& u, const lelab::ProblemParams& p) {
        lelab::write_field(path(stem), u, p);
        add(stem + ".f64");
        add(stem + ".json");
    }

    void write_manifest(const std::string& pipeline, const Config& c, int status) const {
        nlohmann::ordered_json m;
        m["pipeline"] = pipeline;
        m["exit_status"] = status;
        m["config"] = lelab::cli::to_json(c);
        auto& list = m["artifacts"] = nlohmann::ordered_json::array();
        for (const auto& name : files_) {
            char crc[16];
            std::snprintf(crc, sizeof crc, "%08x", lelab::crc32_file(path(name)));
            list.push_back({{"path", name}, {"bytes", fs::file_size(path(name))}, {"crc32", crc}});
        }
        std::ofstream os(dir_ / "manifest.json", std::ios::binary);
        os << m.dump(2) << '\n';
    }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

struct Run {
    const Config& cfg;
    bool fast;
    Artifacts& out;

    [[nodiscard]] int n() const { return fast ? std::min(cfg.n, 129) : cfg.n; }
    [[nodiscard]] lelab::ProblemParams params() const {
        return {cfg.q, cfg.lambda_plus, cfg.lambda_minus, 0.0, cfg.mu};
    }
    [[nodiscard]] lelab::SolverOptions solver_options() const {
        lelab::SolverOptions opt;
        opt.tol = cfg.tol;
        return opt;
    }
    [[nodiscard]] std::vector<double> schedule() const { return lelab::halving_schedule(cfg.eps0, cfg.eps_steps); }

    void continuation_csv(const std::string& name, const lelab::ApproximationSequence& seq) {
        std::ofstream os = out.open(name);
        os << "index,epsilon,energy,residual_inf,step_sup,step_h1,iterations\n";
        for (std::size_t i = 0; i < seq.entries.size(); ++i) {
            const auto& e = seq.entries[i];
            os << i << ',' << g17(e.epsilon) << ',' << g17(e.energy) << ',' << g17(e.residual_inf) << ','
               << g17(e.step_sup) << ',' << g17(e.step_h1) << ',' << e.iterations << '\n';
        }
    }

    lelab::SectorResult sector_sequence() {
        try {
            return lelab::solve_sector(cfg.k, params(), n(), schedule(), solver_options());
        } catch (const lelab::InvalidArgument&) {
            throw;
        } catch (const std::runtime_error& e) {
            throw NonConvergence(std::string("sector solve failed: ") + e.what());
        }
    }

    /// Field for the analysis pipelines: a dump from `input`, else a fresh solve.
    std::pair<lelab::ScalarField, lelab::ProblemParams> source() {
        if (!cfg.input.empty()) {
            lelab::LoadedField f = lelab::read_field(cfg.input);
            return {std::move(f.field), f.params};
        }
        if (cfg.k == 0) {
            const auto seq = disc_sequence();
            if (seq.failed) throw NonConvergence("continuation failed: " + seq.failure);
            const auto p = seq.params.with_epsilon(seq.last().epsilon);
            out.field("u_source", seq.last().u, p);
            return {seq.last().u, p};
        }
        const auto r = sector_sequence();
        const auto p = r.sequence.params.with_epsilon(r.sequence.last().epsilon);
        auto u = lelab::odd_reflect(r.sequence.last().u, cfg.k);
        out.field("u_source", u, p);
        return {std::move(u), p};
    }

    lelab::ApproximationSequence disc_sequence() const {
        const auto u0 = lelab::make_field(lelab::build_disc(n()), [](double x, double y) { return 0.1 * (1 - x * x - y * y); });
        return lelab::continuation(params(), schedule(), u0, solver_options());
    }

    int solve() {
        const auto seq = disc_sequence();
        for (std::size_t i = 0; i < seq.entries.size(); ++i) {
            out.field("u_eps" + std::to_string(i), seq.entries[i].u, seq.params.with_epsilon(seq.entries[i].epsilon));
        }
        continuation_csv("continuation.csv", seq);
        if (seq.failed) {
            std::cerr << "error: continuation failed: " << seq.failure << '\n';
            return kExitNonConvergence;
        }
        const auto& e = seq.last();
        std::printf("solve: %zu entries, eps %.3g, residual %.3g, energy %.10g\n", seq.entries.size(), e.epsilon,
                    e.residual_inf, e.energy);
        return 0;
    }

    int sector() {
        if (cfg.k < 1) throw ConfigError("config key 'k': must satisfy k >= 1 for the sector pipeline");
        const auto r = sector_sequence();
        const auto& seq = r.sequence;
        const auto p = seq.params.with_epsilon(seq.last().epsilon);
        const auto u = lelab::odd_reflect(seq.last().u, cfg.k);
        out.field("u_sector", seq.last().u, p);
        out.field("u_reflected", u, p);
        continuation_csv("continuation.csv", seq);
        const auto rep = lelab::verify_reflected_solution(u, p, cfg.k, cfg.tol);
        const auto sign = lelab::check_sign_pattern(u, cfg.k);
        nlohmann::ordered_json j;
        j["k"] = cfg.k;
        j["n"] = n();
        j["seed_used"] = r.seed_used;
        j["degenerate"] = r.degenerate;
        j["epsilon"] = seq.last().epsilon;
        j["energy"] = lelab::energy(u, p);
        j["off_ray_residual"] = rep.off_ray_residual;
        j["ray_residual"] = rep.ray_residual;
        j["reflection_pass"] = rep.pass;
        j["sign_checked"] = sign.checked;
        j["sign_violations"] = sign.violations;
        out.open("sector.json") << j.dump(2) << '\n';
        std::printf("sector k=%d: off-ray residual %.3g, ray residual %.3g, sign violations %ld\n", cfg.k,
                    rep.off_ray_residual, rep.ray_residual, sign.violations);
        return 0;
    }

    int scan() {
        const auto [u, p] = source();
        const lelab::FieldSampler s(u, p);
        for (std::size_t i = 0; i < cfg.centers.size(); ++i) {
            const lelab::Point c = cfg.centers[i];
            for (double r : cfg.radii) {
                if (r >= lelab::boundary_distance(*u.grid, c))
                    throw ConfigError("config key 'radii': r = " + g17(r) + " leaves the domain around center (" +
                                      g17(c.x) + ", " + g17(c.y) + ")");
            }
            const auto fs = lelab::scan(s, c, cfg.radii, cfg.resolved_t_list(), cfg.resolved_gt_pairs());
            std::ofstream os = out.open("scan_c" + std::to_string(i) + ".csv");
            lelab::write_scan_csv(os, fs);
        }
        std::printf("scan: %zu centers x %zu radii\n", cfg.centers.size(), cfg.radii.size());
        return 0;
    }

    int nodal() {
        const auto [u, p] = source();
        const lelab::FieldSampler s(u, p);
        const double tau = lelab::default_tau_grad(s);
        const auto set = lelab::extract_nodal(s, tau);
        {
            std::ofstream os = out.open("nodal_segments.csv");
            os << "segment,x,y\n";
            for (std::size_t i = 0; i < set.segments.size(); ++i) {
                for (const auto& x : set.segments[i]) os << i << ',' << g17(x.x) << ',' << g17(x.y) << '\n';
            }
        }
        {
            std::ofstream os = out.open("nodal_points.csv");
            os << "x,y,grad,kind\n";
            for (const auto& np : set.regular_points)
                os << g17(np.x.x) << ',' << g17(np.x.y) << ',' << g17(np.grad) << ",regular\n";
            for (const auto& np : set.singular_points)
                os << g17(np.x.x) << ',' << g17(np.x.y) << ',' << g17(np.grad) << ",singular\n";
        }
        std::ofstream os = out.open("nodal_orders.csv");
        os << "x,y,grad,beta,fit_r2,class\n";
        const double h = s.h();
        for (const auto& c : set.singular_clusters) {
            const double r_min = 4 * h;
            const double r_max = std::min(0.1, 0.5 * lelab::boundary_distance(*u.grid, c.x));
            double beta = std::nan(""), r2 = std::nan("");
            std::string cls = "unresolved";
            if (r_max > 1.5 * r_min) {
                const auto vo = lelab::vanishing_order(s, c.x, r_min, r_max);
                beta = vo.beta;
                r2 = vo.fit_r2;
                cls = lelab::to_string(vo.cls);
            }
            os << g17(c.x.x) << ',' << g17(c.x.y) << ',' << g17(c.grad) << ',' << g17(beta) << ',' << g17(r2) << ','
               << cls << '\n';
        }
        std::printf("nodal: tau %.3g, %zu segments, %zu regular, %zu singular points, %zu clusters\n", tau,
                    set.segments.size(), set.regular_points.size(), set.singular_points.size(),
                    set.singular_clusters.size());
        return 0;
    }

    int blowup() {
        const auto [u, p] = source();
        const lelab::FieldSampler s(u, p);
        const double gamma = lelab::gamma_q(p.q);
        for (std::size_t i = 0; i < cfg.centers.size(); ++i) {
            const auto b = lelab::blowup(s, cfg.centers[i], cfg.scales, gamma);
            std::ofstream os = out.open("blowup_c" + std::to_string(i) + ".csv");
            os << "scale,norm,alpha,delta,unit_norm\n";
            for (std::size_t m = 0; m < b.scales.size(); ++m) {
                os << g17(b.scales[m]) << ',' << g17(b.norms[m]) << ',' << g17(b.alpha[m]) << ',' << g17(b.delta[m])
                   << ',' << g17(b.unit_norm[m]) << '\n';
            }
            std::printf("blowup c%zu: delta at smallest scale %.3g (gamma %.6g)\n", i, b.delta.back(), gamma);
        }
        return 0;
    }

    int profile1d() {
        const auto tr = lelab::integrate_1d(cfg.w0, cfg.w0p, params(), cfg.T, cfg.dt, cfg.sample_every);
        out.add("trajectory.csv");
        lelab::write_trajectory_csv(out.path("trajectory.csv").string(), tr);
        nlohmann::ordered_json j;
        j["H0"] = tr.H0;
        j["min_H"] = tr.min_H;
        j["max_H"] = tr.max_H;
        j["max_drift"] = tr.max_drift;
        j["trivial"] = tr.trivial;
        j["steps"] = tr.steps;
        j["layers"] = tr.layers;
        out.open("profile1d.json") << j.dump(2) << '\n';
        std::printf("profile1d: %zu samples, H0 %.10g, max relative drift %.3g\n", tr.t.size(), tr.H0, tr.max_drift);
        return 0;
    }

    int angular() {
        if (cfg.k < 1) throw ConfigError("config key 'k': must satisfy k >= 1 for the angular pipeline");
        lelab::AngularOptions ao;
        ao.samples = cfg.samples;
        ao.tol = std::max(cfg.tol, 1e-8);
        lelab::AngularProfile a;
        try {
            a = lelab::angular_shoot(cfg.k, params(), ao);
        } catch (const lelab::DomainError& e) {
            throw NonConvergence(e.what());
        }
        out.add("angular.csv");
        lelab::write_angular_csv(out.path("angular.csv").string(), a);
        nlohmann::ordered_json j;
        j["k"] = a.k;
        j["q"] = a.q;
        j["mu"] = a.mu;
        j["residual"] = std::max(a.periodicity_residual, a.collocation_defect);
        j["periodicity_residual"] = a.periodicity_residual;
        j["collocation_defect"] = a.collocation_defect;
        j["energy_defect"] = a.energy_defect;
        j["sign_changes"] = a.sign_changes;
        j["roots"] = a.roots;
        out.open("angular.json") << j.dump(2) << '\n';
        std::printf("angular k=%d: mu %.15g, residual %.3g\n", a.k, a.mu, j["residual"].get<double>());
        return 0;
    }

    int verify_all() {
        if (cfg.lambda_plus != cfg.lambda_minus)
            throw ConfigError("config key 'lambda_minus': verify-all requires lambda_plus == lambda_minus");
        lelab::AcceptanceConfig ac;
        ac.fast = fast;
        ac.q = cfg.q;
        ac.lambda = cfg.lambda_plus;
        ac.n = cfg.n;
        ac.eps0 = cfg.eps0;
        ac.eps_steps = cfg.eps_steps;
        ac.tol = cfg.tol;
        ac.seed = cfg.seed;
        ac.criteria = cfg.criteria;
        ac.fleet_ks = cfg.fleet_ks;
        ac.radii = cfg.radii;
        ac.scales = cfg.scales;
        ac.regular_points = cfg.regular_points;
        ac.fleet_q = cfg.fleet_q;
        ac.trajectories = cfg.trajectories;
        ac.slope_min = cfg.slope_min;
        ac.slope_max = cfg.slope_max;
        ac.T = cfg.fleet_T;
        ac.dt = cfg.fleet_dt;
        const auto rep = lelab::run_acceptance(ac, [](const lelab::CriterionResult& r) {
            std::printf("%s\n", lelab::format_result(r).c_str());
            std::fflush(stdout);
        });
        for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
        std::ofstream os = out.open("acceptance.csv");
        os << "id,name,pass,measured,threshold\n";
        int passed = 0;
        for (const auto& r : rep.results) {
            passed += r.pass ? 1 : 0;
            os << r.id << ',' << csv_field(r.name) << ',' << (r.pass ? "true" : "false") << ',' << csv_field(r.measured)
               << ',' << csv_field(r.threshold) << '\n';
        }
        std::printf("\n%-4s %-6s %s\n", "id", "result", "criterion");
        for (const auto& r : rep.results) std::printf("C%02d  %-6s %s\n", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str());
        std::printf("%d/%zu criteria passed in %.1f s\n", passed, rep.results.size(), rep.seconds);
        return rep.all_pass() ? 0 : kExitAcceptance;
    }

    int dispatch(const std::string& pipeline) {
        if (pipeline == "solve") return solve();
        if (pipeline == "sector") return sector();
        if (pipeline == "scan") return scan();
        if (pipeline == "nodal") return nodal();
        if (pipeline == "blowup") return blowup();
        if (pipeline == "profile1d") return profile1d();
        if (pipeline == "angular") return angular();
        return verify_all();
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lane-Emden nodal-set laboratory"};
    std::string pipeline, config_path, out_dir = "out";
    bool fast = false, print_defaults = false;
    app.add_option("pipeline", pipeline, "solve | sector | scan | nodal | blowup | profile1d | angular | verify-all")
        ->check(CLI::IsMember(lelab::cli::kPipelines));
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "artifact directory")->capture_default_str();
    app.add_flag("--fast", fast, "coarse resolution (n <= 129)");
    app.add_flag("--print-defaults", print_defaults, "print every config default as JSON and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    if (print_defaults) {
        std::printf("%s\n", lelab::cli::to_json(Config{}).dump(2).c_str());
        return 0;
    }
    if (pipeline.empty() || config_path.empty()) {
        std::fprintf(stderr, "error: a pipeline and --config are required\n");
        return kExitConfig;
    }

    Config cfg;
    try {
        cfg = lelab::cli::load_config(config_path);
        if (!cfg.pipeline.empty() && cfg.pipeline != pipeline)
            throw ConfigError("config key 'pipeline': '" + cfg.pipeline + "' does not match '" + pipeline + "'");
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }

    Artifacts out(out_dir);
    int status = 1;
    try {
        Run run{cfg, fast, out};
        status = run.dispatch(pipeline);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        status = kExitConfig;
    } catch (const lelab::InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        status = kExitConfig;
    } catch (const lelab::DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        status = kExitConfig;
    } catch (const NonConvergence& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        status = kExitNonConvergence;
    } catch (const lelab::ConvergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        status = kExitNonConvergence;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        status = 1;
    }
    out.write_manifest(pipeline, cfg, status);
    return status;
}
