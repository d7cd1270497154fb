#pragma once

namespace paretune {

/// ADMM penalty parameter with residual balancing: when one residual exceeds the
/// other by more than `ratio`, rho is scaled by `factor` toward balance.
class AdmmPenalty {
public:
    explicit AdmmPenalty(double initial = 1.0, double factor = 2.0, double ratio = 10.0, int every = 10)
        : rho_(initial), factor_(factor), ratio_(ratio), every_(every)
    {}

    double value() const noexcept { return rho_; }

    /// Returns the multiplicative change applied to rho (1 if unchanged). Scaled
    /// duals must be divided by the returned factor.
    double adapt(int iteration, double primal, double dual) noexcept
    {
        if (iteration % every_ != 0) return 1.0;
        if (primal > ratio_ * dual) {
            rho_ *= factor_;
            return factor_;
        }
        if (dual > ratio_ * primal) {
            rho_ /= factor_;
            return 1.0 / factor_;
        }
        return 1.0;
    }

private:
    double rho_;
    double factor_;
    double ratio_;
    int every_;
};

} // namespace paretune
