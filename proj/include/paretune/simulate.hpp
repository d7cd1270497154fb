#pragma once
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rng.hpp"

namespace paretune {

struct SimulatedRegression {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    Eigen::VectorXd beta;
    std::vector<std::string> names;  // predictors
};

namespace detail {

inline Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, const CounterRng& rng)
{
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = rng.normal(static_cast<std::uint64_t>(i * cols + j));
    return m;
}

/// Rows with AR(1) correlation rho between neighbouring columns.
inline Eigen::MatrixXd ar1_design(Eigen::Index n, Eigen::Index p, double rho, const CounterRng& rng)
{
    Eigen::MatrixXd z = normal_matrix(n, p, rng);
    const double s = std::sqrt(1.0 - rho * rho);
    for (Eigen::Index j = 1; j < p; ++j) z.col(j) = rho * z.col(j - 1) + s * z.col(j);
    return z;
}

inline SimulatedRegression linear_response(Eigen::MatrixXd X, Eigen::VectorXd beta, double noise_sd,
                                           const CounterRng& rng)
{
    SimulatedRegression out;
    const Eigen::Index n = X.rows();
    out.y = X * beta + noise_sd * normal_matrix(n, 1, rng).col(0);
    out.X = std::move(X);
    out.beta = std::move(beta);
    for (Eigen::Index j = 0; j < out.X.cols(); ++j) out.names.push_back("x" + std::to_string(j + 1));
    return out;
}

} // namespace detail

/// Gaussian linear model with every coefficient nonzero, decaying in size.
inline SimulatedRegression simulate_enet(Eigen::Index n = 100, Eigen::Index p = 5, std::uint64_t seed = 1)
{
    if (n < 2 || p < 1) throw std::invalid_argument("simulation needs n >= 2 and p >= 1");
    const CounterRng rng(seed, 0x51e1);
    Eigen::VectorXd beta(p);
    for (Eigen::Index j = 0; j < p; ++j) beta(j) = (j % 2 == 0 ? 1.0 : -1.0) * 2.0 / (1.0 + 0.5 * static_cast<double>(j));
    return detail::linear_response(detail::ar1_design(n, p, 0.3, rng.derive(1)), beta, 1.0, rng.derive(2));
}

/// Piecewise-constant coefficients: blocks of 0, +1.5 and -1 in order.
inline SimulatedRegression simulate_flasso(Eigen::Index n = 100, Eigen::Index p = 10, std::uint64_t seed = 1)
{
    if (n < 2 || p < 2) throw std::invalid_argument("simulation needs n >= 2 and p >= 2");
    const CounterRng rng(seed, 0x51e2);
    Eigen::VectorXd beta(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double frac = static_cast<double>(j) / static_cast<double>(p);
        beta(j) = frac < 0.3 ? 0.0 : (frac < 0.7 ? 1.5 : -1.0);
    }
    return detail::linear_response(detail::ar1_design(n, p, 0.3, rng.derive(1)), beta, 1.0, rng.derive(2));
}

struct SimulatedGroups {
    std::vector<Eigen::MatrixXd> groups;  // n_k x p samples
    std::vector<Eigen::MatrixXd> precision;
    std::vector<std::string> names;
};

/**
 * K Gaussian samples sharing a sparse chain-plus-random graph. Each group then
 * drops `perturb` shared edges and gains `perturb` edges of its own. Precision
 * matrices are made diagonally dominant, so positive definite.
 */
inline SimulatedGroups simulate_jgl(const std::vector<Eigen::Index>& sizes, Eigen::Index p = 20,
                                    std::uint64_t seed = 1, int perturb = 2)
{
    if (sizes.empty() || p < 2) throw std::invalid_argument("simulation needs at least one group and p >= 2");
    const CounterRng rng(seed, 0x51e3);
    RngStream pick(rng.derive(1));

    std::set<std::pair<Eigen::Index, Eigen::Index>> shared;
    for (Eigen::Index i = 0; i + 1 < p; ++i) shared.insert({i, i + 1});
    for (Eigen::Index e = 0; e < p / 4; ++e) {
        const auto i = static_cast<Eigen::Index>(pick.below(static_cast<std::uint64_t>(p)));
        const auto j = static_cast<Eigen::Index>(pick.below(static_cast<std::uint64_t>(p)));
        if (i != j) shared.insert({std::min(i, j), std::max(i, j)});
    }

    SimulatedGroups out;
    for (Eigen::Index j = 0; j < p; ++j) out.names.push_back("v" + std::to_string(j + 1));
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        auto edges = shared;
        for (int t = 0; t < perturb && !edges.empty(); ++t) {
            auto it = edges.begin();
            std::advance(it, static_cast<long>(pick.below(edges.size())));
            edges.erase(it);
        }
        for (int t = 0; t < perturb;) {
            const auto i = static_cast<Eigen::Index>(pick.below(static_cast<std::uint64_t>(p)));
            const auto j = static_cast<Eigen::Index>(pick.below(static_cast<std::uint64_t>(p)));
            if (i == j) continue;
            if (edges.insert({std::min(i, j), std::max(i, j)}).second) ++t;
        }
        Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(p, p);
        for (auto [i, j] : edges) {
            const double v = (pick.uniform() < 0.5 ? -1.0 : 1.0) * (0.25 + 0.15 * pick.uniform());
            theta(i, j) = theta(j, i) = v;
        }
        for (Eigen::Index i = 0; i < p; ++i) theta(i, i) = 1.0 + theta.row(i).cwiseAbs().sum();

        // x = L^{-T} z has covariance (L L^T)^{-1} = theta^{-1}.
        const Eigen::LLT<Eigen::MatrixXd> llt(theta);
        const Eigen::MatrixXd z = detail::normal_matrix(sizes[k], p, rng.derive(100 + k));
        const Eigen::MatrixXd x = llt.matrixU().solve(z.transpose()).transpose();
        out.groups.push_back(x);
        out.precision.push_back(theta);
    }
    return out;
}

} // namespace paretune
