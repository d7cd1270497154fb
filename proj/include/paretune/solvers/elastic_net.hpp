#pragma once
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "regression_data.hpp"

namespace paretune {

struct ElasticNetParams {
    double lambda = 0.0;  // overall regularization
    double alpha = 1.0;   // weight of the l1 term; alpha = 1 is the lasso

    void validate() const
    {
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("elastic net lambda must be finite and >= 0");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("elastic net alpha must lie in [0,1]");
    }
};

struct FittedRegression {
    Eigen::VectorXd beta;          // standardized scale
    Eigen::VectorXd beta_natural;  // raw predictor scale
    bool converged = false;
    int iterations = 0;
};

inline double soft_threshold(double z, double gamma) noexcept
{
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

/// (1/2n)||y - X b||^2 + lambda [alpha ||b||_1 + (1 - alpha) ||b||^2]
inline double elastic_net_objective(const RegressionDataset& data, const ElasticNetParams& params,
                                    const Eigen::VectorXd& beta)
{
    const double n = static_cast<double>(data.n());
    const double rss = (data.y - data.X * beta).squaredNorm();
    return rss / (2.0 * n) +
           params.lambda * (params.alpha * beta.lpNorm<1>() + (1.0 - params.alpha) * beta.squaredNorm());
}

/// Smallest lambda at which the fit with this alpha is identically zero.
inline double lambda_anchor_enet(const RegressionDataset& data, double alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("lambda anchor needs alpha in (0,1]");
    const double n = static_cast<double>(data.n());
    return (data.X.transpose() * data.y).cwiseAbs().maxCoeff() / (n * alpha);
}

/**
 * Cyclic coordinate descent on the elastic net objective. One iteration is one
 * full sweep over the p coordinates; the fit stops once the largest coordinate
 * change within a sweep drops below tol.
 *
 * Each update is
 *   beta_j = S(<x_j, r_j>/n, lambda*alpha) / (||x_j||^2/n + 2*lambda*(1-alpha))
 * with r_j the partial residual excluding coordinate j.
 */
inline FittedRegression fit_elastic_net(const RegressionDataset& data, const ElasticNetParams& params,
                                        double tol = 1e-7, int max_iter = 100000)
{
    params.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    const Eigen::Index p = data.p();
    const double n = static_cast<double>(data.n());
    const double l1 = params.lambda * params.alpha;
    const double l2 = 2.0 * params.lambda * (1.0 - params.alpha);

    Eigen::VectorXd col_sq(p);
    for (Eigen::Index j = 0; j < p; ++j) col_sq(j) = data.X.col(j).squaredNorm() / n;

    FittedRegression fit;
    fit.beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd resid = data.y;

    for (fit.iterations = 1; fit.iterations <= max_iter; ++fit.iterations) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            const double old = fit.beta(j);
            const double z = data.X.col(j).dot(resid) / n + col_sq(j) * old;
            const double updated = soft_threshold(z, l1) / (col_sq(j) + l2);
            if (updated != old) {
                resid.noalias() -= (updated - old) * data.X.col(j);
                fit.beta(j) = updated;
                max_change = std::max(max_change, std::abs(updated - old));
            }
        }
        if (max_change < tol) {
            fit.converged = true;
            break;
        }
    }
    fit.iterations = std::min(fit.iterations, max_iter);
    fit.beta_natural = data.to_natural_scale(fit.beta);
    return fit;
}

} // namespace paretune
