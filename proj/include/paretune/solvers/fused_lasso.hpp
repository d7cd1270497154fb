#pragma once
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "admm.hpp"
#include "elastic_net.hpp"

namespace paretune {

struct FusedLassoParams {
    double lambda1 = 0.0;  // sparsity
    double lambda2 = 0.0;  // fusion of successive coefficients

    void validate() const
    {
        if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || !std::isfinite(lambda1) || !std::isfinite(lambda2))
            throw std::invalid_argument("fused lasso penalties must be finite and >= 0");
    }
};

/// (1/2n)||y - X b||^2 + lambda1 ||b||_1 + lambda2 sum_j |b_j - b_{j-1}|
inline double fused_lasso_objective(const RegressionDataset& data, const FusedLassoParams& params,
                                    const Eigen::VectorXd& beta)
{
    const double n = static_cast<double>(data.n());
    double tv = 0.0;
    for (Eigen::Index j = 1; j < beta.size(); ++j) tv += std::abs(beta(j) - beta(j - 1));
    return (data.y - data.X * beta).squaredNorm() / (2.0 * n) + params.lambda1 * beta.lpNorm<1>() +
           params.lambda2 * tv;
}

/// Smallest lambda1 giving beta = 0 (for any lambda2).
inline double lambda_anchor_fused_sparsity(const RegressionDataset& data)
{
    return lambda_anchor_enet(data, 1.0);
}

/// Smallest lambda2 giving a fully fused beta when lambda1 = 0.
inline double lambda_anchor_fused_fusion(const RegressionDataset& data)
{
    const double n = static_cast<double>(data.n());
    const Eigen::VectorXd row_sums = data.X.rowwise().sum();
    const double denom = row_sums.squaredNorm();
    const double level = denom > 0.0 ? row_sums.dot(data.y) / denom : 0.0;
    const Eigen::VectorXd grad = data.X.transpose() * (data.y - level * row_sums) / n;
    double cumulative = 0.0;
    double anchor = 0.0;
    for (Eigen::Index j = 0; j + 1 < grad.size(); ++j) {
        cumulative += grad(j);
        anchor = std::max(anchor, std::abs(cumulative));
    }
    return anchor;
}

/**
 * Fused lasso by ADMM with the split z = [beta; D beta], D the first-difference
 * operator. The beta-step solves (X'X/n + rho (I + D'D)) beta = X'y/n + rho A'(z - u)
 * with a cached Cholesky factor that is refreshed whenever rho adapts.
 *
 * The returned coefficients are the soft-thresholded copy z[0:p], so zeros are exact.
 */
inline FittedRegression fit_fused_lasso(const RegressionDataset& data, const FusedLassoParams& params,
                                        double tol = 1e-5, int max_iter = 10000)
{
    params.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    const Eigen::Index p = data.p();
    if (p < 2) throw std::invalid_argument("fused lasso needs p >= 2");
    const double n = static_cast<double>(data.n());

    const Eigen::MatrixXd gram = data.X.transpose() * data.X / n;
    const Eigen::VectorXd xty = data.X.transpose() * data.y / n;
    Eigen::MatrixXd DtD = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j + 1 < p; ++j) {
        DtD(j, j) += 1.0;
        DtD(j + 1, j + 1) += 1.0;
        DtD(j, j + 1) -= 1.0;
        DtD(j + 1, j) -= 1.0;
    }
    const Eigen::MatrixXd AtA = Eigen::MatrixXd::Identity(p, p) + DtD;

    auto apply_A = [p](const Eigen::VectorXd& b) {
        Eigen::VectorXd out(2 * p - 1);
        out.head(p) = b;
        for (Eigen::Index j = 0; j + 1 < p; ++j) out(p + j) = b(j + 1) - b(j);
        return out;
    };
    auto apply_At = [p](const Eigen::VectorXd& v) {
        Eigen::VectorXd out = v.head(p);
        for (Eigen::Index j = 0; j + 1 < p; ++j) {
            out(j) -= v(p + j);
            out(j + 1) += v(p + j);
        }
        return out;
    };

    AdmmPenalty rho;
    Eigen::LLT<Eigen::MatrixXd> chol(gram + rho.value() * AtA);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * p - 1);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * p - 1);

    FittedRegression fit;
    for (fit.iterations = 1; fit.iterations <= max_iter; ++fit.iterations) {
        beta = chol.solve(xty + rho.value() * apply_At(z - u));
        const Eigen::VectorXd Ab = apply_A(beta);
        const Eigen::VectorXd z_old = z;
        const Eigen::VectorXd v = Ab + u;
        const double t1 = params.lambda1 / rho.value();
        const double t2 = params.lambda2 / rho.value();
        for (Eigen::Index j = 0; j < p; ++j) z(j) = soft_threshold(v(j), t1);
        for (Eigen::Index j = p; j < 2 * p - 1; ++j) z(j) = soft_threshold(v(j), t2);
        u += Ab - z;

        const double primal = (Ab - z).norm();
        const double dual = rho.value() * apply_At(z - z_old).norm();
        const double primal_scale = std::max({1.0, Ab.norm(), z.norm()});
        const double dual_scale = std::max(1.0, rho.value() * apply_At(u).norm());
        if (primal <= tol * primal_scale && dual <= tol * dual_scale) {
            fit.converged = true;
            break;
        }
        if (const double factor = rho.adapt(fit.iterations, primal, dual); factor != 1.0) {
            u /= factor;
            chol.compute(gram + rho.value() * AtA);
        }
    }
    fit.iterations = std::min(fit.iterations, max_iter);
    fit.beta = z.head(p);
    fit.beta_natural = data.to_natural_scale(fit.beta);
    return fit;
}

} // namespace paretune
