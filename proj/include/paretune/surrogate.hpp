#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "design_space.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace paretune {

struct KernelParams {
    std::vector<double> lengthscales;
    double signal_variance = 1.0;
    double nugget = 1e-6;
};

constexpr double kNuggetFloor = 1e-6;
constexpr double kNuggetCeiling = 1e-2;

/// Anisotropic Matern-5/2.
inline double matern52(double scaled_r2, double signal_variance)
{
    const double s = std::sqrt(5.0 * scaled_r2);
    return signal_variance * (1.0 + s + s * s / 3.0) * std::exp(-s);
}

namespace detail {

/// Per-dimension squared differences, reused across likelihood evaluations.
struct PairwiseSquares {
    std::vector<Eigen::MatrixXd> per_dim;

    explicit PairwiseSquares(const Eigen::MatrixXd& X)
    {
        const Eigen::Index m = X.rows();
        for (Eigen::Index k = 0; k < X.cols(); ++k) {
            Eigen::MatrixXd d(m, m);
            for (Eigen::Index j = 0; j < m; ++j)
                for (Eigen::Index i = 0; i < m; ++i) {
                    const double t = X(i, k) - X(j, k);
                    d(i, j) = t * t;
                }
            per_dim.push_back(std::move(d));
        }
    }

    Eigen::MatrixXd kernel(const KernelParams& kp) const
    {
        const Eigen::Index m = per_dim.front().rows();
        Eigen::MatrixXd r2 = Eigen::MatrixXd::Zero(m, m);
        for (std::size_t k = 0; k < per_dim.size(); ++k)
            r2 += per_dim[k] / (kp.lengthscales[k] * kp.lengthscales[k]);
        return r2.unaryExpr([&](double v) { return matern52(v, kp.signal_variance); });
    }
};

struct Factored {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double nugget = 0.0;
};

/// Cholesky of K + tau^2 I, escalating tau^2 by 10x up to the ceiling on failure.
inline std::optional<Factored> factor_with_escalation(const Eigen::MatrixXd& K, double nugget)
{
    const Eigen::Index m = K.rows();
    for (double tau2 = nugget;; tau2 *= 10.0) {
        Factored f{Eigen::LLT<Eigen::MatrixXd>(K + tau2 * Eigen::MatrixXd::Identity(m, m)), tau2};
        if (f.llt.info() == Eigen::Success && (f.llt.matrixLLT().diagonal().array() > 0.0).all()) return f;
        if (tau2 * 10.0 > kNuggetCeiling * (1.0 + 1e-12)) return std::nullopt;
    }
}

inline double lml_from_factor(const Factored& f, const Eigen::VectorXd& y)
{
    const Eigen::VectorXd w = f.llt.matrixL().solve(y);
    const double logdet = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
    return -0.5 * w.squaredNorm() - 0.5 * logdet -
           0.5 * static_cast<double>(y.size()) * std::log(2.0 * std::numbers::pi);
}

inline void check_params(const KernelParams& kp, Eigen::Index d)
{
    if (static_cast<Eigen::Index>(kp.lengthscales.size()) != d)
        throw std::invalid_argument("one lengthscale per input dimension required");
    for (double l : kp.lengthscales)
        if (!(l > 0.0)) throw std::invalid_argument("lengthscales must be positive");
    if (!(kp.signal_variance > 0.0) || !(kp.nugget > 0.0))
        throw std::invalid_argument("signal variance and nugget must be positive");
}

} // namespace detail

/// -1/2 y'(K + tau^2 I)^{-1} y - 1/2 log det(K + tau^2 I) - m/2 log(2 pi) for the
/// targets as given. Throws NumericalError if the matrix cannot be factored even
/// after nugget escalation.
inline double log_marginal_likelihood(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                      const KernelParams& params)
{
    if (inputs.rows() < 1 || inputs.rows() != targets.size())
        throw std::invalid_argument("inputs and targets must be non-empty and aligned");
    detail::check_params(params, inputs.cols());
    const auto f = detail::factor_with_escalation(detail::PairwiseSquares(inputs).kernel(params), params.nugget);
    if (!f) throw NumericalError("GP covariance not positive definite at nugget ceiling");
    return detail::lml_from_factor(*f, targets);
}

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

class GpSurrogate {
public:
    /// Surrogate with fixed kernel parameters. Targets are standardized internally.
    static GpSurrogate from_params(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                   const KernelParams& params)
    {
        GpSurrogate gp(inputs, targets);
        if (gp.constant_) return gp;
        detail::check_params(params, inputs.cols());
        if (!gp.factor(detail::PairwiseSquares(inputs), params))
            throw NumericalError("GP covariance not positive definite at nugget ceiling");
        return gp;
    }

    Prediction predict(const std::vector<double>& u) const
    {
        if (static_cast<Eigen::Index>(u.size()) != inputs_.cols())
            throw std::invalid_argument("prediction point has wrong dimension");
        if (constant_) return {mean_, kNuggetFloor};
        const Eigen::Index m = inputs_.rows();
        Eigen::VectorXd k(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            double r2 = 0.0;
            for (Eigen::Index j = 0; j < inputs_.cols(); ++j) {
                const double t = (inputs_(i, j) - u[static_cast<std::size_t>(j)]) / params_.lengthscales[j];
                r2 += t * t;
            }
            k(i) = matern52(r2, params_.signal_variance);
        }
        const double mu = k.dot(alpha_);
        const Eigen::VectorXd v = factor_.matrixL().solve(k);
        const double var = std::max(0.0, params_.signal_variance - v.squaredNorm());
        return {mean_ + sd_ * mu, sd_ * sd_ * var};
    }

    const KernelParams& params() const noexcept { return params_; }
    /// Nugget actually used, after any escalation.
    double nugget() const noexcept { return nugget_; }
    bool constant() const noexcept { return constant_; }
    double log_likelihood() const noexcept { return lml_; }
    double target_mean() const noexcept { return mean_; }
    double target_sd() const noexcept { return sd_; }
    const Eigen::MatrixXd& inputs() const noexcept { return inputs_; }

private:
    GpSurrogate(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) : inputs_(inputs)
    {
        if (inputs.rows() < 1 || inputs.rows() != targets.size())
            throw std::invalid_argument("inputs and targets must be non-empty and aligned");
        if (!targets.allFinite()) throw std::invalid_argument("GP targets must be finite");
        mean_ = targets.mean();
        sd_ = std::sqrt((targets.array() - mean_).square().mean());
        constant_ = !(sd_ > 1e-12 * std::max(1.0, std::abs(mean_)));
        if (constant_) {
            sd_ = 0.0;
            params_.lengthscales.assign(static_cast<std::size_t>(inputs.cols()), 1.0);
            params_.signal_variance = kNuggetFloor;
            params_.nugget = kNuggetFloor;
            nugget_ = kNuggetFloor;
        }
        z_ = (targets.array() - mean_) / (constant_ ? 1.0 : sd_);
    }

    bool factor(const detail::PairwiseSquares& sq, const KernelParams& params)
    {
        auto f = detail::factor_with_escalation(sq.kernel(params), params.nugget);
        if (!f) return false;
        params_ = params;
        nugget_ = f->nugget;
        lml_ = detail::lml_from_factor(*f, z_);
        alpha_ = f->llt.solve(z_);
        factor_ = std::move(f->llt);
        return true;
    }

    friend GpSurrogate fit_gp(const Eigen::MatrixXd&, const Eigen::VectorXd&, std::uint64_t);

    Eigen::MatrixXd inputs_;
    Eigen::VectorXd z_;
    Eigen::VectorXd alpha_;
    Eigen::LLT<Eigen::MatrixXd> factor_;
    KernelParams params_;
    double nugget_ = kNuggetFloor;
    double mean_ = 0.0;
    double sd_ = 1.0;
    double lml_ = 0.0;
    bool constant_ = false;
};

/// Search box in log space for the likelihood maximization.
struct GpSearchBounds {
    double log_lengthscale_lo = std::log(0.01), log_lengthscale_hi = std::log(20.0);
    double log_signal_lo = std::log(0.01), log_signal_hi = std::log(100.0);
    double log_nugget_lo = std::log(kNuggetFloor), log_nugget_hi = std::log(0.1);
};

/// Maximum-likelihood GP. Eight starts drawn by Latin hypercube over
/// log-lengthscale in [log 0.05, log 2] and log signal variance in [log 0.1, log 10],
/// nugget starting at the floor; each start is refined by cyclic golden-section
/// line searches (60 golden iterations per start).
inline GpSurrogate fit_gp(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, std::uint64_t seed)
{
    if (inputs.rows() < 3) throw std::invalid_argument("GP fitting needs at least 3 points");
    GpSurrogate gp(inputs, targets);
    if (gp.constant_) return gp;

    const auto d = static_cast<std::size_t>(inputs.cols());
    const std::size_t dims = d + 2;  // log lengthscales, log signal, log nugget
    const detail::PairwiseSquares sq(inputs);
    const GpSearchBounds b;
    std::vector<double> lo(dims), hi(dims);
    for (std::size_t k = 0; k < d; ++k) {
        lo[k] = b.log_lengthscale_lo;
        hi[k] = b.log_lengthscale_hi;
    }
    lo[d] = b.log_signal_lo;
    hi[d] = b.log_signal_hi;
    lo[d + 1] = b.log_nugget_lo;
    hi[d + 1] = b.log_nugget_hi;

    auto to_params = [&](const std::vector<double>& x) {
        KernelParams kp;
        for (std::size_t k = 0; k < d; ++k) kp.lengthscales.push_back(std::exp(x[k]));
        kp.signal_variance = std::exp(x[d]);
        kp.nugget = std::max(kNuggetFloor, std::exp(x[d + 1]));
        return kp;
    };
    auto objective = [&](const std::vector<double>& x) {
        const KernelParams kp = to_params(x);
        auto f = detail::factor_with_escalation(sq.kernel(kp), kp.nugget);
        if (!f) return -std::numeric_limits<double>::infinity();
        const double v = detail::lml_from_factor(*f, gp.z_);
        return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
    };

    constexpr int kStarts = 8;
    constexpr int kGoldenPerStart = 60;
    constexpr int kGoldenPerVisit = 5;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const auto starts = latin_hypercube_unit(kStarts, d + 1, CounterRng(seed, 0x6a));

    std::vector<double> best_x;
    double best_f = -std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        std::vector<double> x(dims);
        for (std::size_t k = 0; k < d; ++k) x[k] = std::log(0.05) + s[k] * (std::log(2.0) - std::log(0.05));
        x[d] = std::log(0.1) + s[d] * (std::log(10.0) - std::log(0.1));
        x[d + 1] = b.log_nugget_lo;
        double fx = objective(x);

        std::vector<double> width(dims);
        for (std::size_t k = 0; k < dims; ++k) width[k] = (hi[k] - lo[k]) / 4.0;
        int used = 0;
        while (used < kGoldenPerStart) {
            for (std::size_t k = 0; k < dims && used < kGoldenPerStart; ++k) {
                double a = std::max(lo[k], x[k] - width[k]);
                double c = std::min(hi[k], x[k] + width[k]);
                auto at = [&](double v) {
                    auto t = x;
                    t[k] = v;
                    return objective(t);
                };
                double x1 = c - inv_phi * (c - a), x2 = a + inv_phi * (c - a);
                double f1 = at(x1), f2 = at(x2);
                double arg = x[k], fbest = fx;
                auto consider = [&](double v, double fv) {
                    if (fv > fbest) {
                        fbest = fv;
                        arg = v;
                    }
                };
                consider(x1, f1);
                consider(x2, f2);
                const int steps = std::min(kGoldenPerVisit, kGoldenPerStart - used);
                for (int it = 0; it < steps; ++it) {
                    if (f1 >= f2) {
                        c = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = c - inv_phi * (c - a);
                        f1 = at(x1);
                        consider(x1, f1);
                    } else {
                        a = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = a + inv_phi * (c - a);
                        f2 = at(x2);
                        consider(x2, f2);
                    }
                }
                used += steps;
                x[k] = arg;
                fx = fbest;
            }
            for (auto& w : width) w *= 0.5;
        }
        if (fx > best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    if (!std::isfinite(best_f) || !gp.factor(sq, to_params(best_x)))
        throw NumericalError("GP likelihood could not be evaluated at any start");
    return gp;
}

} // namespace paretune
