#pragma once
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "../errors.hpp"
#include "admm.hpp"
#include "elastic_net.hpp"

namespace paretune {

struct MultiGroupDataset {
    std::vector<Eigen::MatrixXd> groups;  // may be empty when built from covariances
    std::vector<Eigen::Index> sample_sizes;
    std::vector<Eigen::MatrixXd> S;       // (1/n_k) Xc' Xc
    std::vector<std::string> variable_names;

    std::size_t K() const noexcept { return S.size(); }
    Eigen::Index p() const noexcept { return S.empty() ? 0 : S.front().rows(); }
};

inline Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& X)
{
    const Eigen::MatrixXd centered = X.rowwise() - X.colwise().mean();
    Eigen::MatrixXd S = centered.transpose() * centered / static_cast<double>(X.rows());
    return (S + S.transpose()) / 2.0;
}

inline MultiGroupDataset make_multigroup(std::vector<Eigen::MatrixXd> groups,
                                         std::vector<std::string> names = {})
{
    if (groups.empty()) throw DataError("need at least one group");
    const Eigen::Index p = groups.front().cols();
    if (p < 2) throw DataError("need at least 2 variables");
    MultiGroupDataset d;
    for (std::size_t k = 0; k < groups.size(); ++k) {
        if (groups[k].cols() != p)
            throw DataError("group " + std::to_string(k + 1) + " has a different variable count");
        if (groups[k].rows() < 2)
            throw DataError("group " + std::to_string(k + 1) + " needs at least 2 samples");
        if (!groups[k].allFinite()) throw DataError("non-finite value in group " + std::to_string(k + 1));
        d.sample_sizes.push_back(groups[k].rows());
        d.S.push_back(empirical_covariance(groups[k]));
    }
    if (names.empty())
        for (Eigen::Index j = 0; j < p; ++j) names.push_back("v" + std::to_string(j + 1));
    d.variable_names = std::move(names);
    d.groups = std::move(groups);
    return d;
}

inline MultiGroupDataset multigroup_from_covariances(std::vector<Eigen::MatrixXd> S,
                                                     std::vector<Eigen::Index> sample_sizes)
{
    if (S.empty() || S.size() != sample_sizes.size())
        throw std::invalid_argument("need one sample size per covariance matrix");
    MultiGroupDataset d;
    for (std::size_t k = 0; k < S.size(); ++k) {
        if (S[k].rows() != S[k].cols() || S[k].rows() != S.front().rows())
            throw std::invalid_argument("covariance matrices must be square with a shared size");
        if (sample_sizes[k] < 2) throw std::invalid_argument("each group needs n_k >= 2");
    }
    for (Eigen::Index j = 0; j < S.front().rows(); ++j) d.variable_names.push_back("v" + std::to_string(j + 1));
    d.S = std::move(S);
    d.sample_sizes = std::move(sample_sizes);
    return d;
}

enum class JglPenalty { fused, group };

inline const char* to_string(JglPenalty p) { return p == JglPenalty::fused ? "fused" : "group"; }

struct JGLParams {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    JglPenalty penalty = JglPenalty::fused;

    void validate() const
    {
        if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || !std::isfinite(lambda1) || !std::isfinite(lambda2))
            throw std::invalid_argument("JGL penalties must be finite and >= 0");
    }
};

struct PrecisionEstimates {
    std::vector<Eigen::MatrixXd> theta;
    bool converged = false;
    int iterations = 0;
};

namespace detail {

/// Pool-adjacent-violators: nondecreasing least-squares fit to b, in place.
inline void isotonic_nondecreasing(std::vector<double>& b)
{
    std::vector<double> level;
    std::vector<std::size_t> width;
    for (double v : b) {
        level.push_back(v);
        width.push_back(1);
        while (level.size() > 1 && level[level.size() - 2] > level.back()) {
            const std::size_t w = width[width.size() - 2] + width.back();
            const double merged = (level[level.size() - 2] * static_cast<double>(width[width.size() - 2]) +
                                   level.back() * static_cast<double>(width.back())) /
                                  static_cast<double>(w);
            level.pop_back();
            width.pop_back();
            level.back() = merged;
            width.back() = w;
        }
    }
    std::size_t pos = 0;
    for (std::size_t g = 0; g < level.size(); ++g)
        for (std::size_t i = 0; i < width[g]; ++i) b[pos++] = level[g];
}

} // namespace detail

/**
 * argmin_x 1/2||x - a||^2 + l1 sum_k |x_k| + l2 sum_{k<k'} |x_k - x_k'|.
 *
 * The fusion prox over the complete graph keeps the order of a, where the
 * pairwise term is linear, so it reduces to isotonic regression of
 * a_(r) - l2 (2r - K - 1) over the sorted order. Soft-thresholding that result
 * gives the full prox.
 */
inline void prox_fused_complete(std::vector<double>& a, double l1, double l2)
{
    const std::size_t K = a.size();
    if (l2 > 0.0 && K > 1) {
        std::vector<std::size_t> order(K);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });
        std::vector<double> b(K);
        for (std::size_t r = 0; r < K; ++r)
            b[r] = a[order[r]] - l2 * (2.0 * static_cast<double>(r + 1) - static_cast<double>(K) - 1.0);
        detail::isotonic_nondecreasing(b);
        for (std::size_t r = 0; r < K; ++r) a[order[r]] = b[r];
    }
    for (double& v : a) v = soft_threshold(v, l1);
}

/// argmin_x 1/2||x - a||^2 + l1 ||x||_1 + l2 ||x||_2.
inline void prox_group(std::vector<double>& a, double l1, double l2)
{
    double norm_sq = 0.0;
    for (double& v : a) {
        v = soft_threshold(v, l1);
        norm_sq += v * v;
    }
    const double norm = std::sqrt(norm_sq);
    const double shrink = norm > l2 ? 1.0 - l2 / norm : 0.0;
    for (double& v : a) v *= shrink;
}

/// Smallest lambda1 at which every off-diagonal is zero.
inline double lambda_anchor_jgl_sparsity(const MultiGroupDataset& data)
{
    double anchor = 0.0;
    for (std::size_t k = 0; k < data.K(); ++k) {
        const auto& S = data.S[k];
        const double nk = static_cast<double>(data.sample_sizes[k]);
        for (Eigen::Index i = 0; i < S.rows(); ++i)
            for (Eigen::Index j = i + 1; j < S.cols(); ++j) anchor = std::max(anchor, nk * std::abs(S(i, j)));
    }
    return anchor;
}

/// Smallest group-penalty lambda2 at which every off-diagonal is zero.
inline double lambda_anchor_jgl_group(const MultiGroupDataset& data)
{
    double anchor = 0.0;
    const Eigen::Index p = data.p();
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = i + 1; j < p; ++j) {
            double sq = 0.0;
            for (std::size_t k = 0; k < data.K(); ++k) {
                const double g = static_cast<double>(data.sample_sizes[k]) * data.S[k](i, j);
                sq += g * g;
            }
            anchor = std::max(anchor, std::sqrt(sq));
        }
    return anchor;
}

/// sum_k n_k [tr(S Theta) - log det Theta] + P, the minimization form of the JGL
/// criterion. The l1 and group terms cover off-diagonal entries, the fused
/// cross-group term every entry; each ordered pair (i,j) counts once.
inline double jgl_objective(const MultiGroupDataset& data, const JGLParams& params,
                            const std::vector<Eigen::MatrixXd>& theta)
{
    const Eigen::Index p = data.p();
    double value = 0.0;
    for (std::size_t k = 0; k < data.K(); ++k) {
        Eigen::LLT<Eigen::MatrixXd> llt(theta[k]);
        if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
        const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
        const double nk = static_cast<double>(data.sample_sizes[k]);
        value += nk * ((data.S[k] * theta[k]).trace() - logdet);
    }
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) {
            if (i == j) {
                if (params.penalty == JglPenalty::fused)
                    for (std::size_t k = 0; k < data.K(); ++k)
                        for (std::size_t m = k + 1; m < data.K(); ++m)
                            value += params.lambda2 * std::abs(theta[k](i, i) - theta[m](i, i));
                continue;
            }
            double sq = 0.0;
            for (std::size_t k = 0; k < data.K(); ++k) {
                value += params.lambda1 * std::abs(theta[k](i, j));
                sq += theta[k](i, j) * theta[k](i, j);
                if (params.penalty == JglPenalty::fused)
                    for (std::size_t m = k + 1; m < data.K(); ++m)
                        value += params.lambda2 * std::abs(theta[k](i, j) - theta[m](i, j));
            }
            if (params.penalty == JglPenalty::group) value += params.lambda2 * std::sqrt(sq);
        }
    return value;
}

/**
 * Joint graphical lasso by consensus ADMM (Theta_k = Z_k).
 *
 * Theta-step: eigendecompose S_k - rho (Z_k - U_k) / n_k = V diag(d) V' and set
 *   theta_i = n_k / (2 rho) * (-d_i + sqrt(d_i^2 + 4 rho / n_k)),
 * which is positive for every d_i. Z-step: per entry, the fused or group prox
 * across the K groups. Diagonals carry no l1 or group term, only fusion.
 * The estimates returned are the Z copies.
 */
inline PrecisionEstimates fit_jgl(const MultiGroupDataset& data, const JGLParams& params,
                                  double tol = 1e-5, int max_iter = 10000)
{
    params.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    const std::size_t K = data.K();
    const Eigen::Index p = data.p();
    if (K == 0 || p < 1) throw std::invalid_argument("JGL needs at least one group");

    auto attempt = [&](double rho0, PrecisionEstimates& out) -> bool {
        AdmmPenalty rho(rho0);
        std::vector<Eigen::MatrixXd> theta(K), Z(K), U(K, Eigen::MatrixXd::Zero(p, p)), Z_old(K);
        for (std::size_t k = 0; k < K; ++k) {
            Eigen::VectorXd diag = data.S[k].diagonal();
            for (Eigen::Index i = 0; i < p; ++i) diag(i) = diag(i) > 1e-12 ? 1.0 / diag(i) : 1.0;
            Z[k] = diag.asDiagonal();
            theta[k] = Z[k];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p);
        std::vector<double> entry(K);
        out.converged = false;
        for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
            const double r = rho.value();
            for (std::size_t k = 0; k < K; ++k) {
                const double nk = static_cast<double>(data.sample_sizes[k]);
                const Eigen::MatrixXd A = data.S[k] - r * (Z[k] - U[k]) / nk;
                eig.compute(A);
                if (eig.info() != Eigen::Success) return false;
                const Eigen::VectorXd d = eig.eigenvalues();
                Eigen::VectorXd t(p);
                for (Eigen::Index i = 0; i < p; ++i)
                    t(i) = nk / (2.0 * r) * (-d(i) + std::sqrt(d(i) * d(i) + 4.0 * r / nk));
                theta[k] = eig.eigenvectors() * t.asDiagonal() * eig.eigenvectors().transpose();
                theta[k] = (theta[k] + theta[k].transpose()) / 2.0;
                if (!theta[k].allFinite()) return false;
                Z_old[k] = Z[k];
            }
            const double t1 = params.lambda1 / r;
            const double t2 = params.lambda2 / r;
            for (Eigen::Index i = 0; i < p; ++i) {
                for (std::size_t k = 0; k < K; ++k) entry[k] = theta[k](i, i) + U[k](i, i);
                if (params.penalty == JglPenalty::fused) prox_fused_complete(entry, 0.0, t2);
                for (std::size_t k = 0; k < K; ++k) Z[k](i, i) = entry[k];
                for (Eigen::Index j = i + 1; j < p; ++j) {
                    for (std::size_t k = 0; k < K; ++k) entry[k] = theta[k](i, j) + U[k](i, j);
                    if (params.penalty == JglPenalty::fused)
                        prox_fused_complete(entry, t1, t2);
                    else
                        prox_group(entry, t1, t2);
                    for (std::size_t k = 0; k < K; ++k) {
                        Z[k](i, j) = entry[k];
                        Z[k](j, i) = entry[k];
                    }
                }
            }
            double primal_sq = 0.0, dual_sq = 0.0, theta_sq = 0.0, z_sq = 0.0, u_sq = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                U[k] += theta[k] - Z[k];
                primal_sq += (theta[k] - Z[k]).squaredNorm();
                dual_sq += (Z[k] - Z_old[k]).squaredNorm();
                theta_sq += theta[k].squaredNorm();
                z_sq += Z[k].squaredNorm();
                u_sq += U[k].squaredNorm();
            }
            const double primal = std::sqrt(primal_sq);
            const double dual = r * std::sqrt(dual_sq);
            if (!std::isfinite(primal) || !std::isfinite(dual)) return false;
            if (primal <= tol * std::max({1.0, std::sqrt(theta_sq), std::sqrt(z_sq)}) &&
                dual <= tol * std::max(1.0, r * std::sqrt(u_sq))) {
                out.converged = true;
                break;
            }
            if (const double factor = rho.adapt(out.iterations, primal, dual); factor != 1.0)
                for (auto& u : U) u /= factor;
        }
        out.iterations = std::min(out.iterations, max_iter);
        out.theta = std::move(Z);
        return true;
    };

    PrecisionEstimates est;
    if (attempt(1.0, est)) return est;
    if (attempt(10.0, est)) return est;
    est.converged = false;
    est.theta.assign(K, Eigen::MatrixXd::Identity(p, p));
    return est;
}

} // namespace paretune
