#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace paretune {

enum class Scale { linear, log10 };

inline const char* to_string(Scale s) { return s == Scale::linear ? "linear" : "log10"; }

struct HyperparameterSpec {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    Scale scale = Scale::linear;

    void validate() const
    {
        if (name.empty()) throw std::invalid_argument("hyperparameter name must be non-empty");
        if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper))
            throw std::invalid_argument("hyperparameter '" + name + "': need finite lower < upper");
        if (scale == Scale::log10 && !(lower > 0.0))
            throw std::invalid_argument("hyperparameter '" + name + "': log10 scale needs lower > 0");
    }
};

inline double to_natural(double u, const HyperparameterSpec& spec)
{
    if (!(u >= 0.0 && u <= 1.0))
        throw std::domain_error("unit coordinate outside [0,1] for '" + spec.name + "'");
    if (u == 0.0) return spec.lower;
    if (u == 1.0) return spec.upper;
    if (spec.scale == Scale::linear)
        return spec.lower + u * (spec.upper - spec.lower);
    const double lo = std::log10(spec.lower);
    const double hi = std::log10(spec.upper);
    return std::pow(10.0, lo + u * (hi - lo));
}

inline double to_unit(double v, const HyperparameterSpec& spec)
{
    if (!(v >= spec.lower && v <= spec.upper))
        throw std::domain_error("value outside bounds for '" + spec.name + "'");
    if (v == spec.lower) return 0.0;
    if (v == spec.upper) return 1.0;
    double u;
    if (spec.scale == Scale::linear) {
        u = (v - spec.lower) / (spec.upper - spec.lower);
    } else {
        const double lo = std::log10(spec.lower);
        const double hi = std::log10(spec.upper);
        u = (std::log10(v) - lo) / (hi - lo);
    }
    return std::min(1.0, std::max(0.0, u));
}

struct DesignPoint {
    std::vector<double> unit;
    std::vector<double> natural;
};

class DesignSpace {
public:
    explicit DesignSpace(std::vector<HyperparameterSpec> specs) : specs_(std::move(specs))
    {
        if (specs_.empty()) throw std::invalid_argument("design space needs at least one hyperparameter");
        std::set<std::string> seen;
        for (const auto& s : specs_) {
            s.validate();
            if (!seen.insert(s.name).second)
                throw std::invalid_argument("duplicate hyperparameter name '" + s.name + "'");
        }
    }

    std::size_t dimension() const noexcept { return specs_.size(); }
    const std::vector<HyperparameterSpec>& specs() const noexcept { return specs_; }
    const HyperparameterSpec& operator[](std::size_t i) const { return specs_.at(i); }

    DesignPoint from_unit(std::vector<double> unit) const
    {
        if (unit.size() != specs_.size())
            throw std::invalid_argument("unit point has wrong dimension");
        DesignPoint pt;
        pt.natural.resize(unit.size());
        for (std::size_t i = 0; i < unit.size(); ++i) pt.natural[i] = to_natural(unit[i], specs_[i]);
        pt.unit = std::move(unit);
        return pt;
    }

    DesignPoint from_natural(const std::vector<double>& natural) const
    {
        if (natural.size() != specs_.size())
            throw std::invalid_argument("natural point has wrong dimension");
        std::vector<double> unit(natural.size());
        for (std::size_t i = 0; i < natural.size(); ++i) unit[i] = to_unit(natural[i], specs_[i]);
        return from_unit(std::move(unit));
    }

private:
    std::vector<HyperparameterSpec> specs_;
};

/**
 * Latin hypercube sample of n points in [0,1)^d. Row i is point i.
 *
 * Per dimension the strata {0..n-1} are permuted by a Fisher-Yates shuffle and
 * each cell gets one independent uniform jitter; floor(n*u) is exactly the
 * assigned stratum.
 */
inline std::vector<std::vector<double>> latin_hypercube_unit(std::size_t n, std::size_t d,
                                                             const CounterRng& rng)
{
    if (n == 0) throw std::invalid_argument("latin hypercube needs n >= 1");
    std::vector<std::vector<double>> points(n, std::vector<double>(d));
    const double nd = static_cast<double>(n);
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 0; j < d; ++j) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        const CounterRng shuffle = rng.derive(2 * j);
        const CounterRng jitter = rng.derive(2 * j + 1);
        for (std::size_t i = n; i > 1; --i) {
            const auto k = static_cast<std::size_t>(shuffle.below(i, i));
            std::swap(perm[i - 1], perm[k]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto stratum = static_cast<double>(perm[i]);
            double u = (stratum + jitter.uniform(i)) / nd;
            if (std::floor(u * nd) != stratum) u = stratum / nd;
            points[i][j] = u;
        }
    }
    return points;
}

inline std::vector<DesignPoint> latin_hypercube(const DesignSpace& space, std::size_t n, std::uint64_t seed)
{
    auto unit = latin_hypercube_unit(n, space.dimension(), CounterRng(seed, 0x1a5));
    std::vector<DesignPoint> out;
    out.reserve(n);
    for (auto& u : unit) out.push_back(space.from_unit(std::move(u)));
    return out;
}

} // namespace paretune
