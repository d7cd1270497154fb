#pragma once
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "solvers/elastic_net.hpp"
#include "solvers/jgl.hpp"

namespace paretune {

enum class Sense { minimize, maximize };

inline const char* to_string(Sense s) { return s == Sense::minimize ? "min" : "max"; }

/// Objective values in minimization convention: objectives whose native sense is
/// "maximize" are stored negated.
struct ObjectiveVector {
    std::vector<double> values;
    std::vector<std::string> labels;
    std::vector<Sense> directions;

    std::size_t size() const noexcept { return values.size(); }

    /// Value in its native sense, undoing the sign normalization.
    double native(std::size_t i) const
    {
        return directions.at(i) == Sense::maximize ? -values.at(i) : values.at(i);
    }
};

struct NamedValue {
    std::string name;
    double value = 0.0;
};

struct Edge {
    int i = 0;
    int j = 0;
    double value = 0.0;
};

/// What the report shows for one fitted model.
struct ModelSummary {
    std::string family;
    std::vector<NamedValue> hyperparameters;  // natural scale
    std::vector<NamedValue> stats;
    bool converged = true;
    int iterations = 0;
    std::vector<double> coefficients;       // regression, raw predictor scale
    std::vector<std::string> coefficient_names;
    std::vector<std::vector<Edge>> edges;   // JGL, per group, upper triangle
    std::string error;                      // failed evaluations only
};

inline double residual_sum_of_squares(const Eigen::VectorXd& beta, const RegressionDataset& data)
{
    return (data.y - data.X * beta).squaredNorm();
}

inline double count_nonzero(const Eigen::VectorXd& beta)
{
    return static_cast<double>((beta.array() != 0.0).count());
}

/// [RSS (Gaussian deviance), #nonzero, ||beta||_2]
inline ObjectiveVector enet_objectives(const FittedRegression& fit, const RegressionDataset& data)
{
    if (fit.beta.size() != data.p()) throw std::invalid_argument("fit does not match dataset");
    return {{residual_sum_of_squares(fit.beta, data), count_nonzero(fit.beta), fit.beta.norm()},
            {"deviance", "nonzero coefficients", "l2 norm"},
            {Sense::minimize, Sense::minimize, Sense::minimize}};
}

/// [RSS, #nonzero, mean |beta_j - beta_{j-1}|]
inline ObjectiveVector flasso_objectives(const FittedRegression& fit, const RegressionDataset& data)
{
    const Eigen::Index p = fit.beta.size();
    if (p < 2) throw std::invalid_argument("roughness needs p >= 2");
    if (p != data.p()) throw std::invalid_argument("fit does not match dataset");
    double rough = 0.0;
    for (Eigen::Index j = 1; j < p; ++j) rough += std::abs(fit.beta(j) - fit.beta(j - 1));
    rough /= static_cast<double>(p - 1);
    return {{residual_sum_of_squares(fit.beta, data), count_nonzero(fit.beta), rough},
            {"rss", "nonzero coefficients", "roughness"},
            {Sense::minimize, Sense::minimize, Sense::minimize}};
}

/// Upper-triangle edge count with |theta_ij| > edge_eps.
inline int count_edges(const Eigen::MatrixXd& theta, double edge_eps)
{
    int count = 0;
    for (Eigen::Index i = 0; i < theta.rows(); ++i)
        for (Eigen::Index j = i + 1; j < theta.cols(); ++j)
            if (std::abs(theta(i, j)) > edge_eps) ++count;
    return count;
}

/// sum_k (n_k tr(S_k Theta_k) - n_k log det Theta_k + 2 E_k). Throws
/// NumericalError when some Theta_k is not positive definite.
inline double jgl_aic(const PrecisionEstimates& est, const MultiGroupDataset& data, double edge_eps)
{
    if (est.theta.size() != data.K()) throw std::invalid_argument("estimate group count mismatch");
    double aic = 0.0;
    for (std::size_t k = 0; k < data.K(); ++k) {
        const Eigen::MatrixXd& theta = est.theta[k];
        Eigen::LLT<Eigen::MatrixXd> llt(theta);
        if (llt.info() != Eigen::Success || !(llt.matrixLLT().diagonal().array() > 0.0).all())
            throw NumericalError("precision estimate for group " + std::to_string(k + 1) +
                                 " is not positive definite");
        const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
        const double nk = static_cast<double>(data.sample_sizes[k]);
        aic += nk * (data.S[k].cwiseProduct(theta).sum()) - nk * logdet + 2.0 * count_edges(theta, edge_eps);
    }
    return aic;
}

inline double total_edges(const PrecisionEstimates& est, double edge_eps)
{
    double total = 0.0;
    for (const auto& t : est.theta) total += count_edges(t, edge_eps);
    return total;
}

/// Mean over unordered group pairs and all (i, j), diagonal included, of
/// |theta_ij^(k) - theta_ij^(k')|. Zero for a single group.
inline double mean_pairwise_difference(const PrecisionEstimates& est)
{
    const std::size_t K = est.theta.size();
    if (K < 2) return 0.0;
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t m = k + 1; m < K; ++m, ++pairs) sum += (est.theta[k] - est.theta[m]).cwiseAbs().sum();
    const auto entries = static_cast<double>(est.theta.front().size());
    return sum / (static_cast<double>(pairs) * entries);
}

/// Upper-triangle edges present in every group.
inline int shared_edges(const PrecisionEstimates& est, double edge_eps)
{
    if (est.theta.empty()) return 0;
    const Eigen::Index p = est.theta.front().rows();
    int shared = 0;
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = i + 1; j < p; ++j) {
            bool all = true;
            for (const auto& t : est.theta)
                if (!(std::abs(t(i, j)) > edge_eps)) {
                    all = false;
                    break;
                }
            if (all) ++shared;
        }
    return shared;
}

/// [AIC, total edges, mean pairwise |difference|]
inline ObjectiveVector jgl_fused_objectives(const PrecisionEstimates& est, const MultiGroupDataset& data,
                                            double edge_eps = 1e-6)
{
    if (!(edge_eps >= 0.0)) throw std::invalid_argument("edge_eps must be >= 0");
    return {{jgl_aic(est, data, edge_eps), total_edges(est, edge_eps), mean_pairwise_difference(est)},
            {"aic", "total edges", "mean abs difference"},
            {Sense::minimize, Sense::minimize, Sense::minimize}};
}

/// [AIC, total edges, -(shared edges)]; shared edges are maximized, hence negated.
inline ObjectiveVector jgl_group_objectives(const PrecisionEstimates& est, const MultiGroupDataset& data,
                                            double edge_eps = 1e-6)
{
    if (!(edge_eps >= 0.0)) throw std::invalid_argument("edge_eps must be >= 0");
    return {{jgl_aic(est, data, edge_eps), total_edges(est, edge_eps),
             -static_cast<double>(shared_edges(est, edge_eps))},
            {"aic", "total edges", "shared edges"},
            {Sense::minimize, Sense::minimize, Sense::maximize}};
}

inline ModelSummary summarize_regression(const std::string& family, const FittedRegression& fit,
                                         const RegressionDataset& data, const ObjectiveVector& obj)
{
    ModelSummary s;
    s.family = family;
    s.converged = fit.converged;
    s.iterations = fit.iterations;
    s.coefficients.assign(fit.beta_natural.data(), fit.beta_natural.data() + fit.beta_natural.size());
    s.coefficient_names = data.column_names;
    s.stats.push_back({"nonzero", count_nonzero(fit.beta)});
    s.stats.push_back({obj.labels.front(), obj.values.front()});
    return s;
}

inline ModelSummary summarize_jgl(const std::string& family, const PrecisionEstimates& est,
                                  const MultiGroupDataset& data, double edge_eps)
{
    ModelSummary s;
    s.family = family;
    s.converged = est.converged;
    s.iterations = est.iterations;
    for (std::size_t k = 0; k < est.theta.size(); ++k) {
        std::vector<Edge> edges;
        const auto& t = est.theta[k];
        for (Eigen::Index i = 0; i < t.rows(); ++i)
            for (Eigen::Index j = i + 1; j < t.cols(); ++j)
                if (std::abs(t(i, j)) > edge_eps)
                    edges.push_back({static_cast<int>(i), static_cast<int>(j), t(i, j)});
        s.stats.push_back({"edges group " + std::to_string(k + 1), static_cast<double>(edges.size())});
        s.edges.push_back(std::move(edges));
    }
    s.stats.push_back({"shared edges", static_cast<double>(shared_edges(est, edge_eps))});
    s.coefficient_names = data.variable_names;
    return s;
}

} // namespace paretune
