#pragma once
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace fixtures {

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
    return m;
}

inline Eigen::VectorXd gaussian_vector(Eigen::Index n, std::uint64_t seed)
{
    return gaussian_matrix(n, 1, seed).col(0);
}

/// Correlated design plus a linear response with unit noise.
struct LinearProblem {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

inline LinearProblem linear_problem(Eigen::Index n, const Eigen::VectorXd& beta, std::uint64_t seed)
{
    const Eigen::Index p = beta.size();
    Eigen::MatrixXd X = gaussian_matrix(n, p, seed);
    for (Eigen::Index j = 1; j < p; ++j) X.col(j) += 0.4 * X.col(j - 1);
    Eigen::VectorXd y = X * beta + gaussian_vector(n, seed + 1);
    return {X, y};
}

} // namespace fixtures
