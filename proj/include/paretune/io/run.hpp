#pragma once
#include <exception>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../moo_engine.hpp"
#include "../problems.hpp"
#include "csv.hpp"
#include "results.hpp"

namespace paretune {

struct RunConfig {
    Family family = Family::enet;
    std::vector<std::string> inputs;  // one CSV for regression, one per group for JGL
    std::string response = "y";
    BoundOverride param1;  // lambda / lambda1
    BoundOverride param2;  // alpha / lambda2
    BudgetConfig budget;
    SolverSettings solver;
    std::string out_json = "results.json";
    std::string out_html = "report.html";
    std::string viewer_bundle;  // optional path to a replacement viewer script
    bool progress = true;
};

enum ExitCode : int { exit_ok = 0, exit_io = 1, exit_config = 2, exit_data = 3, exit_numerical = 4 };

namespace detail {

inline Json bound_json(const BoundOverride& b)
{
    Json j;
    j["lower"] = b.lower ? Json(*b.lower) : Json(nullptr);
    j["upper"] = b.upper ? Json(*b.upper) : Json(nullptr);
    return j;
}

} // namespace detail

inline Json config_to_json(const RunConfig& c, const DesignSpace& space, const BudgetConfig& resolved)
{
    Json j;
    j["family"] = to_string(c.family);
    j["inputs"] = c.inputs;
    if (c.family == Family::enet || c.family == Family::flasso) j["response"] = c.response;
    j["budget"] = resolved.total_budget;
    j["initial_design"] = resolved.initial_design;
    j["candidate_pool_size"] = resolved.candidate_pool_size;
    j["mc_samples"] = resolved.mc_samples;
    j["seed"] = resolved.seed;
    Json specs = Json::array();
    for (const auto& s : space.specs())
        specs.push_back({{"name", s.name}, {"lower", s.lower}, {"upper", s.upper}, {"scale", to_string(s.scale)}});
    j["space"] = specs;
    j["solver"] = {{"tol", c.solver.tol ? Json(*c.solver.tol) : Json(nullptr)},
                   {"max_iter", c.solver.max_iter ? Json(*c.solver.max_iter) : Json(nullptr)},
                   {"edge_eps", c.solver.edge_eps}};
    return j;
}

/// Checks that need no data. Throws ConfigError.
inline BudgetConfig validate_config(const RunConfig& c)
{
    const bool regression = c.family == Family::enet || c.family == Family::flasso;
    if (regression && c.inputs.size() != 1) throw ConfigError("regression families take exactly one input CSV");
    if (!regression && c.inputs.size() < 2) throw ConfigError("joint graphical lasso needs at least two group CSVs");
    if (c.out_json.empty() && c.out_html.empty()) throw ConfigError("no output path given");
    if (c.solver.tol && !(*c.solver.tol > 0.0)) throw ConfigError("--tol must be > 0");
    if (c.solver.max_iter && *c.solver.max_iter < 1) throw ConfigError("--max-iter must be >= 1");
    if (!(c.solver.edge_eps >= 0.0)) throw ConfigError("--edge-eps must be >= 0");
    const BudgetConfig b = c.budget.resolved(2);
    if (b.total_budget < b.initial_design + 1)
        throw ConfigError("budget (" + std::to_string(b.total_budget) + ") must exceed the initial design (" +
                          std::to_string(b.initial_design) + ") by at least one");
    return b;
}

/// Loads data, runs the optimization and returns the results document. Throws on
/// any fatal error; nothing is written here.
inline Json run_to_json(const RunConfig& c, std::ostream* log = nullptr)
{
    const BudgetConfig budget = validate_config(c);
    std::optional<DesignSpace> space;
    Problem problem;
    switch (c.family) {
    case Family::enet:
    case Family::flasso: {
        const auto raw = load_regression_csv(c.inputs.front(), c.response);
        auto data = prepare_regression(raw.X, raw.y, raw.predictor_names);
        if (c.family == Family::enet) {
            space = enet_space(data, c.param1, c.param2);
            problem = make_problem_enet(std::move(data), c.solver);
        } else {
            if (data.p() < 2) throw DataError("fused lasso needs at least two predictors");
            space = flasso_space(data, c.param1, c.param2);
            problem = make_problem_flasso(std::move(data), c.solver);
        }
        break;
    }
    case Family::jgl_fused:
    case Family::jgl_group: {
        const JglPenalty penalty = c.family == Family::jgl_fused ? JglPenalty::fused : JglPenalty::group;
        auto data = load_group_csvs(c.inputs);
        space = jgl_space(data, penalty, c.param1, c.param2);
        problem = make_problem_jgl(std::move(data), penalty, c.solver);
        break;
    }
    }
    const MooResult result = run_moo(problem, *space, budget, log);
    return results_to_json(result, to_string(c.family), config_to_json(c, *space, result.config));
}

/// Full workflow with outputs. Returns the process exit status and prints a
/// one-line diagnostic to `err` on failure.
inline int run(const RunConfig& c, std::ostream& err = std::cerr)
{
    try {
        const std::string viewer = c.viewer_bundle.empty() ? std::string() : read_file(c.viewer_bundle);
        const Json doc = run_to_json(c, c.progress ? &err : nullptr);
        const std::string html = c.out_html.empty() ? std::string() : render_html_report(doc, viewer);
        if (!c.out_json.empty()) write_results_json(doc, c.out_json);
        if (!c.out_html.empty()) write_file_atomic(c.out_html, html);
        return exit_ok;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return exit_data;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace paretune
