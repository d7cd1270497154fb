#pragma once
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "design_space.hpp"
#include "errors.hpp"
#include "objectives.hpp"
#include "pareto.hpp"
#include "rng.hpp"
#include "surrogate.hpp"

namespace paretune {

struct BudgetConfig {
    std::size_t total_budget = 50;
    std::size_t initial_design = 0;  // 0: max(d + 2, ceil(B / 5))
    std::size_t candidate_pool_size = 1000;
    std::size_t mc_samples = 512;
    std::uint64_t seed = 1;

    static std::size_t default_initial_design(std::size_t budget, std::size_t d)
    {
        return std::max(d + 2, (budget + 4) / 5);
    }

    /// Copy with the initial design size resolved for dimension d. Throws ConfigError.
    BudgetConfig resolved(std::size_t d) const
    {
        BudgetConfig c = *this;
        if (c.initial_design == 0) c.initial_design = default_initial_design(c.total_budget, d);
        if (c.total_budget < 1) throw ConfigError("budget must be at least 1");
        if (c.initial_design < d + 2)
            throw ConfigError("initial design needs at least d + 2 = " + std::to_string(d + 2) + " points");
        if (c.initial_design > c.total_budget)
            throw ConfigError("initial design (" + std::to_string(c.initial_design) + ") exceeds budget (" +
                              std::to_string(c.total_budget) + ")");
        if (c.candidate_pool_size < 100) throw ConfigError("candidate pool must hold at least 100 points");
        if (c.mc_samples < 1) throw ConfigError("need at least one Monte Carlo sample");
        return c;
    }
};

struct EvaluationOutcome {
    ObjectiveVector objectives;
    ModelSummary summary;
};

/// Evaluates one design point. Signals failure by throwing.
using Problem = std::function<EvaluationOutcome(const DesignPoint&)>;

struct MooResult {
    std::vector<EvaluationRecord> evaluations;
    ParetoArchive archive;
    std::vector<double> hypervolume_trace;
    BudgetConfig config;
    std::vector<std::string> labels;
    std::vector<Sense> directions;
    double wall_time = 0.0;  // seconds
};

/// Standard normal draws shared by every candidate of one iteration.
inline Eigen::MatrixXd common_normals(std::size_t samples, std::size_t q, std::uint64_t seed)
{
    const CounterRng rng(seed, 0xe4f1);
    Eigen::MatrixXd z(static_cast<Eigen::Index>(samples), static_cast<Eigen::Index>(q));
    for (std::size_t s = 0; s < samples; ++s)
        for (std::size_t i = 0; i < q; ++i)
            z(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = rng.normal(s * q + i);
    return z;
}

struct EhviEstimate {
    double value = 0.0;
    double standard_error = 0.0;
};

/// Monte Carlo EHVI for independent Gaussian predictions (mean, variance) per
/// objective, using the given standard normal draws (one row per sample).
inline EhviEstimate ehvi_from_predictions(const std::vector<Prediction>& pred, const Front& front,
                                          const std::vector<double>& ref, const Eigen::MatrixXd& normals)
{
    const std::size_t q = ref.size();
    if (pred.size() != q || static_cast<std::size_t>(normals.cols()) != q)
        throw std::invalid_argument("prediction count must match the number of objectives");
    std::vector<double> sd(q), y(q);
    for (std::size_t i = 0; i < q; ++i) sd[i] = std::sqrt(std::max(0.0, pred[i].variance));
    double sum = 0.0, sum2 = 0.0;
    const auto S = static_cast<std::size_t>(normals.rows());
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t i = 0; i < q; ++i)
            y[i] = pred[i].mean + sd[i] * normals(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i));
        const double h = hypervolume_improvement(front, y, ref);
        sum += h;
        sum2 += h * h;
    }
    const double n = static_cast<double>(S);
    const double mean = sum / n;
    const double var = S > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n)};
}

inline EhviEstimate ehvi_estimate(const std::vector<GpSurrogate>& surrogates, const std::vector<double>& u,
                                  const Front& front, const std::vector<double>& ref, std::size_t mc_samples,
                                  std::uint64_t seed)
{
    std::vector<Prediction> pred;
    for (const auto& gp : surrogates) pred.push_back(gp.predict(u));
    return ehvi_from_predictions(pred, front, ref, common_normals(mc_samples, ref.size(), seed));
}

inline double ehvi(const std::vector<GpSurrogate>& surrogates, const std::vector<double>& u, const Front& front,
                   const std::vector<double>& ref, std::size_t mc_samples, std::uint64_t seed)
{
    return ehvi_estimate(surrogates, u, front, ref, mc_samples, seed).value;
}

namespace detail {

inline std::string format_values(const std::vector<double>& v)
{
    std::ostringstream os;
    os << std::setprecision(6) << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ']';
    return os.str();
}

inline Front ok_values(const std::vector<EvaluationRecord>& evals, std::size_t upto)
{
    Front f;
    for (std::size_t i = 0; i < upto; ++i)
        if (evals[i].status == EvalStatus::ok) f.push_back(evals[i].objectives.values);
    return f;
}

} // namespace detail

/// Sequential EHVI optimization. Evaluates an initial Latin hypercube, then one
/// EHVI-maximizing candidate per iteration until `total_budget` evaluations have
/// succeeded. Failed evaluations are recorded and do not count; ten consecutive
/// failures in the sequential phase, or an initial design that fails entirely,
/// raise NumericalError.
inline MooResult run_moo(const Problem& problem, const DesignSpace& space, const BudgetConfig& budget,
                         std::ostream* log = nullptr)
{
    const auto start = std::chrono::steady_clock::now();
    const std::size_t d = space.dimension();
    const BudgetConfig cfg = budget.resolved(d);
    MooResult result;
    result.config = cfg;
    auto& evals = result.evaluations;
    std::set<std::vector<double>> seen;
    std::size_t ok_count = 0;

    auto evaluate = [&](DesignPoint point) {
        EvaluationRecord rec;
        rec.id = static_cast<int>(evals.size());
        rec.point = std::move(point);
        try {
            auto out = problem(rec.point);
            if (out.objectives.size() < 2 || out.objectives.size() > 3)
                throw NumericalError("problem must return 2 or 3 objectives");
            for (double v : out.objectives.values)
                if (!std::isfinite(v)) throw NumericalError("objective value is not finite");
            if (result.labels.empty()) {
                result.labels = out.objectives.labels;
                result.directions = out.objectives.directions;
            } else if (out.objectives.size() != result.labels.size()) {
                throw NumericalError("objective count changed between evaluations");
            }
            rec.objectives = std::move(out.objectives);
            rec.summary = std::move(out.summary);
            rec.status = EvalStatus::ok;
            ++ok_count;
        } catch (const std::exception& e) {
            rec.objectives = {};
            rec.summary = {};
            rec.summary.error = e.what();
            rec.status = EvalStatus::failed;
        }
        if (rec.summary.hyperparameters.empty())
            for (std::size_t i = 0; i < d; ++i) rec.summary.hyperparameters.push_back({space[i].name, rec.point.natural[i]});
        seen.insert(rec.point.unit);
        evals.push_back(std::move(rec));
        return evals.back().status == EvalStatus::ok;
    };

    auto report = [&](const char* phase, std::size_t iter) {
        if (!log) return;
        const auto& rec = evals.back();
        const Front f = detail::ok_values(evals, evals.size());
        *log << phase << ' ' << iter << " natural=" << detail::format_values(rec.point.natural);
        if (rec.status == EvalStatus::ok)
            *log << " objectives=" << detail::format_values(rec.objectives.values);
        else
            *log << " failed: " << rec.summary.error;
        if (!f.empty()) {
            const auto archive = non_dominated_filter(evals);
            *log << " archive=" << archive.records.size() << " hv=" << hypervolume(archive.front(), archive.reference_point);
        }
        *log << '\n';
    };

    const auto initial = latin_hypercube(space, cfg.initial_design, cfg.seed);
    for (std::size_t i = 0; i < initial.size() && ok_count < cfg.total_budget; ++i) {
        evaluate(initial[i]);
        report("init", i);
    }
    if (ok_count == 0) throw NumericalError("every initial design evaluation failed");
    const std::size_t initial_count = evals.size();

    const std::size_t q = result.labels.size();
    const CounterRng pool_rng(cfg.seed, 0x9001);
    std::size_t consecutive_failures = 0;
    for (std::size_t iter = 0; ok_count < cfg.total_budget; ++iter) {
        const std::uint64_t iter_seed = mix64(cfg.seed ^ mix64(iter + 1));

        std::vector<std::vector<double>> pool =
            latin_hypercube_unit(cfg.candidate_pool_size, d, pool_rng.derive(iter));
        const ParetoArchive archive = non_dominated_filter(evals);
        RngStream jitter(CounterRng(iter_seed, 0x7e57));
        for (std::size_t j = 0; j < 20; ++j) {
            auto u = archive.records[j % archive.records.size()].point.unit;
            for (auto& x : u) x = std::clamp(x + 0.05 * jitter.normal(), 0.0, 1.0);
            pool.push_back(std::move(u));
        }

        std::size_t chosen = 0;
        if (ok_count >= 3) {
            Eigen::MatrixXd X(static_cast<Eigen::Index>(ok_count), static_cast<Eigen::Index>(d));
            Eigen::MatrixXd Y(static_cast<Eigen::Index>(ok_count), static_cast<Eigen::Index>(q));
            Eigen::Index row = 0;
            for (const auto& r : evals) {
                if (r.status != EvalStatus::ok) continue;
                for (std::size_t k = 0; k < d; ++k) X(row, static_cast<Eigen::Index>(k)) = r.point.unit[k];
                for (std::size_t k = 0; k < q; ++k) Y(row, static_cast<Eigen::Index>(k)) = r.objectives.values[k];
                ++row;
            }
            std::vector<GpSurrogate> gps;
            for (std::size_t k = 0; k < q; ++k)
                gps.push_back(fit_gp(X, Y.col(static_cast<Eigen::Index>(k)), mix64(iter_seed + k)));

            const Front front = archive.front();
            const Eigen::MatrixXd normals = common_normals(cfg.mc_samples, q, iter_seed);
            double best = -1.0;
            std::vector<Prediction> pred(q);
            for (std::size_t c = 0; c < pool.size(); ++c) {
                for (std::size_t k = 0; k < q; ++k) pred[k] = gps[k].predict(pool[c]);
                const double v = ehvi_from_predictions(pred, front, archive.reference_point, normals).value;
                if (v > best) {
                    best = v;
                    chosen = c;
                }
            }
        }

        std::vector<double> u = pool[chosen];
        while (seen.count(u))
            for (auto& x : u) x = x + 1e-6 <= 1.0 ? x + 1e-6 : x - 1e-6;
        const bool ok = evaluate(space.from_unit(u));
        report("iter", iter);
        consecutive_failures = ok ? 0 : consecutive_failures + 1;
        if (consecutive_failures >= 10)
            throw NumericalError("aborting after 10 consecutive failed evaluations");
    }

    result.archive = non_dominated_filter(evals);
    // Trace against the final reference point: after the initial design, then per iteration.
    const auto& ref = result.archive.reference_point;
    for (std::size_t upto = initial_count; upto <= evals.size(); ++upto) {
        const Front f = detail::ok_values(evals, upto);
        Front nd;
        for (std::size_t i : non_dominated_indices(f)) nd.push_back(f[i]);
        result.hypervolume_trace.push_back(hypervolume(nd, ref));
    }
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace paretune
