// Command-line entry point: `enet`, `flasso`, `jgl` optimization runs and the
// `simulate` data generator.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paretune/io/csv.hpp"
#include "paretune/io/run.hpp"
#include "paretune/simulate.hpp"

using namespace paretune;

namespace {

struct Bounds {
    std::optional<double> lo1, hi1, lo2, hi2;
};

void add_common(CLI::App* cmd, RunConfig& cfg, std::size_t default_budget)
{
    cfg.budget.total_budget = default_budget;
    cmd->add_option("--budget", cfg.budget.total_budget, "Pareto budget: successful evaluations in total")
        ->capture_default_str();
    cmd->add_option("--initial", cfg.budget.initial_design, "Initial design size (default max(d+2, ceil(B/5)))");
    cmd->add_option("--seed", cfg.budget.seed, "Random seed")->capture_default_str();
    cmd->add_option("--pool", cfg.budget.candidate_pool_size, "Candidate pool size per iteration")
        ->capture_default_str();
    cmd->add_option("--mc-samples", cfg.budget.mc_samples, "Monte Carlo samples for EHVI")->capture_default_str();
    cmd->add_option("--out-json", cfg.out_json, "Results JSON path")->capture_default_str();
    cmd->add_option("--out-html", cfg.out_html, "HTML report path (empty to skip)")->capture_default_str();
    cmd->add_option("--viewer-bundle", cfg.viewer_bundle, "Inline this viewer script instead of the built-in one");
    cmd->add_option("--edge-eps", cfg.solver.edge_eps, "Edge threshold for precision matrices")
        ->capture_default_str();
    cmd->add_option("--tol", cfg.solver.tol, "Solver tolerance (family default when omitted)");
    cmd->add_option("--max-iter", cfg.solver.max_iter, "Solver iteration cap (family default when omitted)");
    cmd->add_flag("!--quiet,!-q", cfg.progress, "Suppress progress lines on stderr");
}

void add_bounds(CLI::App* cmd, Bounds& b, const std::string& p1, const std::string& p2)
{
    cmd->add_option("--" + p1 + "-min", b.lo1, "Lower bound for " + p1 + " (natural scale)");
    cmd->add_option("--" + p1 + "-max", b.hi1, "Upper bound for " + p1 + " (natural scale)");
    cmd->add_option("--" + p2 + "-min", b.lo2, "Lower bound for " + p2 + " (natural scale)");
    cmd->add_option("--" + p2 + "-max", b.hi2, "Upper bound for " + p2 + " (natural scale)");
}

std::vector<Eigen::Index> parse_sizes(const std::string& s)
{
    std::vector<Eigen::Index> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto next = s.find(',', pos);
        const std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            const long long v = std::stoll(tok, &used);
            if (used != tok.size() || v < 2) throw std::invalid_argument(tok);
            out.push_back(static_cast<Eigen::Index>(v));
        } catch (const std::exception&) {
            throw ConfigError("--sizes expects comma-separated integers >= 2, got '" + s + "'");
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

Eigen::MatrixXd with_response(const SimulatedRegression& sim)
{
    Eigen::MatrixXd m(sim.X.rows(), sim.X.cols() + 1);
    m.col(0) = sim.y;
    m.rightCols(sim.X.cols()) = sim.X;
    return m;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pareto-front hyperparameter selection for penalized regression and graphical models"};
    app.require_subcommand(1);

    RunConfig enet_cfg, flasso_cfg, jgl_cfg;
    Bounds enet_b, flasso_b, jgl_b;
    std::string penalty = "fused";

    auto* enet = app.add_subcommand("enet", "Elastic net: deviance, nonzero coefficients, l2 norm");
    enet->add_option("data", enet_cfg.inputs, "CSV with a header row")->required()->expected(1);
    enet->add_option("--response", enet_cfg.response, "Response column")->capture_default_str();
    add_bounds(enet, enet_b, "lambda", "alpha");
    add_common(enet, enet_cfg, 50);

    auto* flasso = app.add_subcommand("flasso", "Fused lasso: RSS, nonzero coefficients, roughness");
    flasso->add_option("data", flasso_cfg.inputs, "CSV with a header row")->required()->expected(1);
    flasso->add_option("--response", flasso_cfg.response, "Response column")->capture_default_str();
    add_bounds(flasso, flasso_b, "lambda1", "lambda2");
    add_common(flasso, flasso_cfg, 80);

    auto* jgl = app.add_subcommand("jgl", "Joint graphical lasso over K group CSVs");
    jgl->add_option("groups", jgl_cfg.inputs, "One CSV per group, identical headers")->required();
    jgl->add_option("--penalty", penalty, "Cross-group penalty")
        ->check(CLI::IsMember({"fused", "group"}))
        ->capture_default_str();
    add_bounds(jgl, jgl_b, "lambda1", "lambda2");
    add_common(jgl, jgl_cfg, 0);

    std::string sim_family, sim_out, sim_sizes = "20,40,60,80";
    Eigen::Index sim_n = 100, sim_p = 0;
    std::uint64_t sim_seed = 1;
    int sim_perturb = 2;
    auto* sim = app.add_subcommand("simulate", "Write seeded synthetic data sets");
    sim->add_option("family", sim_family, "enet, flasso or jgl")
        ->required()
        ->check(CLI::IsMember({"enet", "flasso", "jgl"}));
    sim->add_option("--out", sim_out, "Output CSV (regression) or path prefix (jgl: <prefix>1.csv, ...)")
        ->required();
    sim->add_option("--n", sim_n, "Sample size (regression)")->capture_default_str();
    sim->add_option("--p", sim_p, "Variables (default 5 enet, 10 flasso, 20 jgl)");
    sim->add_option("--sizes", sim_sizes, "Group sample sizes (jgl)")->capture_default_str();
    sim->add_option("--perturb", sim_perturb, "Edges swapped per group (jgl)")->capture_default_str();
    sim->add_option("--seed", sim_seed, "Random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    auto apply = [](RunConfig& cfg, const Bounds& b) {
        cfg.param1 = {b.lo1, b.hi1};
        cfg.param2 = {b.lo2, b.hi2};
    };
    try {
        if (enet->parsed()) {
            enet_cfg.family = Family::enet;
            apply(enet_cfg, enet_b);
            return run(enet_cfg);
        }
        if (flasso->parsed()) {
            flasso_cfg.family = Family::flasso;
            apply(flasso_cfg, flasso_b);
            return run(flasso_cfg);
        }
        if (jgl->parsed()) {
            jgl_cfg.family = penalty == "fused" ? Family::jgl_fused : Family::jgl_group;
            if (jgl_cfg.budget.total_budget == 0) jgl_cfg.budget.total_budget = penalty == "fused" ? 40 : 50;
            apply(jgl_cfg, jgl_b);
            return run(jgl_cfg);
        }
        if (sim_family == "jgl") {
            const auto groups = simulate_jgl(parse_sizes(sim_sizes), sim_p ? sim_p : 20, sim_seed, sim_perturb);
            for (std::size_t k = 0; k < groups.groups.size(); ++k) {
                const std::string path = sim_out + std::to_string(k + 1) + ".csv";
                write_csv(path, groups.names, groups.groups[k]);
                std::cout << path << '\n';
            }
            return exit_ok;
        }
        const auto data = sim_family == "enet" ? simulate_enet(sim_n, sim_p ? sim_p : 5, sim_seed)
                                               : simulate_flasso(sim_n, sim_p ? sim_p : 10, sim_seed);
        std::vector<std::string> header{"y"};
        header.insert(header.end(), data.names.begin(), data.names.end());
        write_csv(sim_out, header, with_response(data));
        std::cout << sim_out << '\n';
        return exit_ok;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    }
}
