#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "design_space.hpp"
#include "objectives.hpp"

namespace paretune {

using Front = std::vector<std::vector<double>>;

/// a dominates b (minimization): a <= b everywhere and a < b somewhere.
inline bool dominates(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("dominance needs equal-length vectors");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b)
{
    return dominates(a.values, b.values);
}

/// Positions of the non-dominated vectors, ascending. Identical vectors are all kept.
inline std::vector<std::size_t> non_dominated_indices(const Front& pts)
{
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Lexicographic order: a vector can only be dominated by one sorted before it.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    std::vector<std::size_t> kept;
    for (std::size_t idx : order) {
        bool dominated = false;
        for (std::size_t k : kept)
            if (dominates(pts[k], pts[idx])) {
                dominated = true;
                break;
            }
        if (!dominated) kept.push_back(idx);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

enum class EvalStatus { ok, failed };

inline const char* to_string(EvalStatus s) { return s == EvalStatus::ok ? "ok" : "failed"; }

struct EvaluationRecord {
    int id = 0;
    DesignPoint point;
    ObjectiveVector objectives;  // empty when failed
    ModelSummary summary;
    EvalStatus status = EvalStatus::ok;
};

struct ParetoArchive {
    std::vector<EvaluationRecord> records;
    std::vector<double> reference_point;

    Front front() const
    {
        Front f;
        f.reserve(records.size());
        for (const auto& r : records) f.push_back(r.objectives.values);
        return f;
    }

    std::vector<int> ids() const
    {
        std::vector<int> out;
        for (const auto& r : records) out.push_back(r.id);
        return out;
    }
};

/// Componentwise max inflated by 10% of the observed range (at least 1e-9), and
/// always strictly above every observed value.
inline std::vector<double> reference_point(const Front& pts)
{
    if (pts.empty()) throw std::invalid_argument("reference point needs at least one vector");
    const std::size_t q = pts.front().size();
    std::vector<double> lo(q, std::numeric_limits<double>::infinity());
    std::vector<double> hi(q, -std::numeric_limits<double>::infinity());
    for (const auto& p : pts) {
        if (p.size() != q) throw std::invalid_argument("objective vectors differ in length");
        for (std::size_t i = 0; i < q; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    }
    std::vector<double> ref(q);
    for (std::size_t i = 0; i < q; ++i) {
        ref[i] = hi[i] + std::max(0.1 * (hi[i] - lo[i]), 1e-9);
        if (!(ref[i] > hi[i])) ref[i] = std::nextafter(hi[i], std::numeric_limits<double>::infinity());
    }
    return ref;
}

/// All ok records not dominated by another ok record, in id order, with the
/// reference point of the ok set.
inline ParetoArchive non_dominated_filter(const std::vector<EvaluationRecord>& records)
{
    std::vector<const EvaluationRecord*> ok;
    for (const auto& r : records)
        if (r.status == EvalStatus::ok) ok.push_back(&r);
    std::stable_sort(ok.begin(), ok.end(), [](auto* a, auto* b) { return a->id < b->id; });
    Front pts;
    for (auto* r : ok) pts.push_back(r->objectives.values);
    ParetoArchive archive;
    if (ok.empty()) return archive;
    for (std::size_t i : non_dominated_indices(pts)) archive.records.push_back(*ok[i]);
    archive.reference_point = reference_point(pts);
    return archive;
}

namespace detail {

/// Dominated area of a 2-D point set inside [., rx] x [., ry], updated one point
/// at a time. Keys are x ascending; stored y values are strictly decreasing.
class Staircase {
public:
    Staircase(double rx, double ry) : rx_(rx), ry_(ry) {}

    double area() const noexcept { return area_; }

    void insert(double x, double y)
    {
        if (!(x < rx_) || !(y < ry_)) return;
        auto it = steps_.lower_bound(x);
        if (it != steps_.end() && it->first == x && it->second <= y) return;
        double height = ry_;
        if (it != steps_.begin()) {
            height = std::prev(it)->second;
            if (height <= y) return;
        }
        double cur_x = x;
        while (it != steps_.end() && it->second >= y) {
            area_ += (it->first - cur_x) * (height - y);
            cur_x = it->first;
            height = it->second;
            it = steps_.erase(it);
        }
        const double end_x = it == steps_.end() ? rx_ : it->first;
        area_ += (end_x - cur_x) * (height - y);
        steps_.emplace_hint(it, x, y);
    }

private:
    double rx_, ry_;
    double area_ = 0.0;
    std::map<double, double> steps_;
};

} // namespace detail

/// Lebesgue measure of the union of boxes [p, ref]. q in {1, 2, 3}; points not
/// weakly below ref are ignored.
inline double hypervolume(const Front& front, const std::vector<double>& ref)
{
    const std::size_t q = ref.size();
    if (q < 1 || q > 3) throw std::invalid_argument("hypervolume supports 1 to 3 objectives");
    Front pts;
    for (const auto& p : front) {
        if (p.size() != q) throw std::invalid_argument("front vector length differs from reference");
        bool inside = true;
        for (std::size_t i = 0; i < q; ++i) inside = inside && p[i] <= ref[i];
        if (inside) pts.push_back(p);
    }
    if (pts.empty()) return 0.0;
    if (q == 1) {
        double best = ref[0];
        for (const auto& p : pts) best = std::min(best, p[0]);
        return ref[0] - best;
    }
    if (q == 2) {
        detail::Staircase s(ref[0], ref[1]);
        for (const auto& p : pts) s.insert(p[0], p[1]);
        return s.area();
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
    detail::Staircase s(ref[0], ref[1]);
    double volume = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        s.insert(pts[i][0], pts[i][1]);
        const double next_z = i + 1 < pts.size() ? pts[i + 1][2] : ref[2];
        volume += s.area() * (next_z - pts[i][2]);
    }
    return volume;
}

/// HV(front + {y}) - HV(front), computed as the volume of [y, ref] minus the part
/// already covered by the front clipped to that box.
inline double hypervolume_improvement(const Front& front, const std::vector<double>& y,
                                      const std::vector<double>& ref)
{
    const std::size_t q = ref.size();
    double box = 1.0;
    for (std::size_t i = 0; i < q; ++i) {
        if (!(y[i] < ref[i])) return 0.0;
        box *= ref[i] - y[i];
    }
    Front clipped;
    clipped.reserve(front.size());
    for (const auto& f : front) {
        bool covers_y = true;
        std::vector<double> c(q);
        bool inside = true;
        for (std::size_t i = 0; i < q; ++i) {
            covers_y = covers_y && f[i] <= y[i];
            c[i] = std::max(f[i], y[i]);
            inside = inside && c[i] < ref[i];
        }
        if (covers_y) return 0.0;
        if (inside) clipped.push_back(std::move(c));
    }
    return std::max(0.0, box - hypervolume(clipped, ref));
}

} // namespace paretune
