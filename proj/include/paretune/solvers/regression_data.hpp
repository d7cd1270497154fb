#pragma once
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "../errors.hpp"

namespace paretune {

/// Centered response and standardized predictors. No intercept is fitted
/// downstream, so centering is what absorbs it.
struct RegressionDataset {
    Eigen::MatrixXd X;             // n x p, each column mean 0, population sd 1
    Eigen::VectorXd y;             // centered
    Eigen::VectorXd column_means;  // raw-scale means
    Eigen::VectorXd column_scales; // raw-scale population sds
    double response_mean = 0.0;
    std::vector<std::string> column_names;

    Eigen::Index n() const noexcept { return X.rows(); }
    Eigen::Index p() const noexcept { return X.cols(); }

    /// Coefficients on the standardized scale back to raw predictor units.
    Eigen::VectorXd to_natural_scale(const Eigen::VectorXd& beta) const
    {
        return beta.cwiseQuotient(column_scales);
    }
};

inline RegressionDataset prepare_regression(const Eigen::MatrixXd& raw_X, const Eigen::VectorXd& raw_y,
                                            std::vector<std::string> names = {})
{
    const Eigen::Index n = raw_X.rows();
    const Eigen::Index p = raw_X.cols();
    if (raw_y.size() != n) throw DataError("response length does not match predictor rows");
    if (n < 2) throw DataError("need at least 2 observations, got " + std::to_string(n));
    if (p < 1) throw DataError("need at least 1 predictor");
    if (!raw_X.allFinite() || !raw_y.allFinite()) throw DataError("non-finite value in input data");
    if (names.empty()) {
        for (Eigen::Index j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
    } else if (static_cast<Eigen::Index>(names.size()) != p) {
        throw DataError("column name count does not match predictor count");
    }

    RegressionDataset d;
    d.column_names = std::move(names);
    d.column_means = raw_X.colwise().mean().transpose();
    d.column_scales.resize(p);
    d.X.resize(n, p);
    const double nd = static_cast<double>(n);
    for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::VectorXd c = raw_X.col(j).array() - d.column_means(j);
        double sd = std::sqrt(c.squaredNorm() / nd);
        const double magnitude = raw_X.col(j).cwiseAbs().maxCoeff();
        if (!(sd > 1e-12 * std::max(1.0, magnitude)))
            throw DataError("column '" + d.column_names[j] + "' is constant");
        // A second pass makes the unit-sd postcondition hold to rounding.
        c /= sd;
        c.array() -= c.mean();
        const double sd2 = std::sqrt(c.squaredNorm() / nd);
        c /= sd2;
        d.column_scales(j) = sd * sd2;
        d.X.col(j) = c;
    }
    d.response_mean = raw_y.mean();
    d.y = raw_y.array() - d.response_mean;
    return d;
}

} // namespace paretune
