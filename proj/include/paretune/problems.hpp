#pragma once
#include <optional>
#include <stdexcept>
#include <string>

#include "design_space.hpp"
#include "errors.hpp"
#include "moo_engine.hpp"
#include "objectives.hpp"
#include "solvers/elastic_net.hpp"
#include "solvers/fused_lasso.hpp"
#include "solvers/jgl.hpp"

namespace paretune {

enum class Family { enet, flasso, jgl_fused, jgl_group };

inline const char* to_string(Family f)
{
    switch (f) {
    case Family::enet: return "enet";
    case Family::flasso: return "flasso";
    case Family::jgl_fused: return "jgl-fused";
    case Family::jgl_group: return "jgl-group";
    }
    return "unknown";
}

/// User overrides for one hyperparameter's natural-scale bounds.
struct BoundOverride {
    std::optional<double> lower;
    std::optional<double> upper;
};

struct SolverSettings {
    std::optional<double> tol;  // family default when unset
    std::optional<int> max_iter;
    double edge_eps = 1e-6;
};

/// Smallest alpha used when computing the elastic-net anchor.
constexpr double kAlphaAnchorFloor = 0.001;

/// log10 spec over [1e-4 * anchor, anchor] unless overridden. Throws ConfigError.
inline HyperparameterSpec penalty_spec(const std::string& name, double anchor, const BoundOverride& o)
{
    if (!(anchor > 0.0) && !(o.lower && o.upper))
        throw DataError("penalty anchor for '" + name + "' is zero: the response carries no signal to regularize");
    HyperparameterSpec s{name, o.lower.value_or(1e-4 * anchor), o.upper.value_or(anchor), Scale::log10};
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

inline DesignSpace enet_space(const RegressionDataset& data, const BoundOverride& lambda = {},
                              const BoundOverride& alpha = {})
{
    HyperparameterSpec a{"alpha", alpha.lower.value_or(0.0), alpha.upper.value_or(1.0), Scale::linear};
    try {
        a.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (a.lower < 0.0 || a.upper > 1.0) throw ConfigError("alpha bounds must lie within [0, 1]");
    return DesignSpace({penalty_spec("lambda", lambda_anchor_enet(data, kAlphaAnchorFloor), lambda), a});
}

inline DesignSpace flasso_space(const RegressionDataset& data, const BoundOverride& lambda1 = {},
                                const BoundOverride& lambda2 = {})
{
    return DesignSpace({penalty_spec("lambda1", lambda_anchor_fused_sparsity(data), lambda1),
                        penalty_spec("lambda2", lambda_anchor_fused_fusion(data), lambda2)});
}

inline DesignSpace jgl_space(const MultiGroupDataset& data, JglPenalty penalty, const BoundOverride& lambda1 = {},
                             const BoundOverride& lambda2 = {})
{
    const double a1 = lambda_anchor_jgl_sparsity(data);
    const double a2 = penalty == JglPenalty::group ? lambda_anchor_jgl_group(data) : a1;
    return DesignSpace({penalty_spec("lambda1", a1, lambda1), penalty_spec("lambda2", a2, lambda2)});
}

/// Point coordinates: (lambda, alpha).
inline Problem make_problem_enet(RegressionDataset data, SolverSettings settings = {})
{
    return [data = std::move(data), settings](const DesignPoint& x) {
        const auto fit = fit_elastic_net(data, {x.natural.at(0), x.natural.at(1)}, settings.tol.value_or(1e-7),
                                         settings.max_iter.value_or(100000));
        auto obj = enet_objectives(fit, data);
        auto summary = summarize_regression("enet", fit, data, obj);
        return EvaluationOutcome{std::move(obj), std::move(summary)};
    };
}

/// Point coordinates: (lambda1, lambda2).
inline Problem make_problem_flasso(RegressionDataset data, SolverSettings settings = {})
{
    return [data = std::move(data), settings](const DesignPoint& x) {
        const auto fit = fit_fused_lasso(data, {x.natural.at(0), x.natural.at(1)}, settings.tol.value_or(1e-5),
                                         settings.max_iter.value_or(10000));
        auto obj = flasso_objectives(fit, data);
        auto summary = summarize_regression("flasso", fit, data, obj);
        return EvaluationOutcome{std::move(obj), std::move(summary)};
    };
}

/// Point coordinates: (lambda1, lambda2).
inline Problem make_problem_jgl(MultiGroupDataset data, JglPenalty penalty, SolverSettings settings = {})
{
    return [data = std::move(data), penalty, settings](const DesignPoint& x) {
        const auto est = fit_jgl(data, {x.natural.at(0), x.natural.at(1), penalty}, settings.tol.value_or(1e-5),
                                 settings.max_iter.value_or(10000));
        auto obj = penalty == JglPenalty::fused ? jgl_fused_objectives(est, data, settings.edge_eps)
                                                : jgl_group_objectives(est, data, settings.edge_eps);
        const std::string family = penalty == JglPenalty::fused ? "jgl-fused" : "jgl-group";
        auto summary = summarize_jgl(family, est, data, settings.edge_eps);
        summary.stats.push_back({obj.labels.front(), obj.values.front()});
        return EvaluationOutcome{std::move(obj), std::move(summary)};
    };
}

} // namespace paretune
