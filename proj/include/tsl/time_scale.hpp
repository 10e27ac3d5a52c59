#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "tsl/errors.hpp"

namespace tsl {

/// One maximal connected piece of a time scale: an isolated point (lo == hi)
/// or a closed interval (lo < hi).
struct Component {
    double lo;
    double hi;

    bool is_point() const { return lo == hi; }
    bool is_interval() const { return lo < hi; }

    friend bool operator==(const Component&, const Component&) = default;
};

inline Component point_component(double t) { return Component{t, t}; }
inline Component interval_component(double lo, double hi) { return Component{lo, hi}; }

/// Topological classification of a point of a time scale, derived from the
/// jump operators. isolated == left-scattered and right-scattered; dense ==
/// left-dense and right-dense.
struct PointClass {
    bool right_scattered = false;
    bool right_dense = false;
    bool left_scattered = false;
    bool left_dense = false;
    bool is_min = false;
    bool is_max = false;

    bool isolated() const { return right_scattered && left_scattered; }
    bool dense() const { return right_dense && left_dense; }

    friend bool operator==(const PointClass&, const PointClass&) = default;
};

/// A bounded time scale: a nonempty closed subset of the reals stored as a
/// sorted list of pairwise disjoint components. Touching or overlapping
/// components are merged at construction. Immutable after construction, so
/// values can be shared freely across threads.
class TimeScale {
public:
    static constexpr double default_eps_member = 1e-12;

    explicit TimeScale(std::vector<Component> components, double eps_member = default_eps_member)
        : eps_(eps_member) {
        if (components.empty()) throw error("time scale must be nonempty");
        for (const auto& c : components) {
            if (!(c.lo <= c.hi) || !std::isfinite(c.lo) || !std::isfinite(c.hi))
                throw error("invalid component [" + std::to_string(c.lo) + ", " +
                            std::to_string(c.hi) + "]");
        }
        std::sort(components.begin(), components.end(),
                  [](const Component& a, const Component& b) { return a.lo < b.lo; });
        // merge overlapping or touching pieces; closedness makes them one component
        comps_.push_back(components.front());
        for (std::size_t i = 1; i < components.size(); ++i) {
            Component& last = comps_.back();
            const Component& next = components[i];
            if (next.lo <= last.hi + eps_) {
                last.hi = std::max(last.hi, next.hi);
            } else {
                comps_.push_back(next);
            }
        }
    }

    // -- generators (grids are materialized eagerly so sums stay exact) --

    static TimeScale integers(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw error("integers: lo > hi");
        check_count(static_cast<std::size_t>(hi - lo + 1));
        std::vector<Component> cs;
        cs.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t k = lo; k <= hi; ++k) cs.push_back(point_component(static_cast<double>(k)));
        return TimeScale(std::move(cs));
    }

    static TimeScale h_step(double a, double b, double h) {
        if (!(h > 0)) throw error("h_step: h must be positive");
        if (!(a < b)) throw error("h_step: need a < b");
        const auto n = static_cast<std::int64_t>(std::llround((b - a) / h));
        if (n < 1 || std::abs(a + static_cast<double>(n) * h - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}))
            throw error("h_step: (b - a) is not an integer multiple of h");
        check_count(static_cast<std::size_t>(n + 1));
        std::vector<Component> cs;
        cs.reserve(static_cast<std::size_t>(n + 1));
        for (std::int64_t k = 0; k < n; ++k) cs.push_back(point_component(a + static_cast<double>(k) * h));
        cs.push_back(point_component(b));
        return TimeScale(std::move(cs));
    }

    static TimeScale q_scale(double q, int k_min, int k_max) {
        if (!(q > 1)) throw error("q_scale: q must exceed 1");
        if (k_min > k_max) throw error("q_scale: k_min > k_max");
        check_count(static_cast<std::size_t>(k_max - k_min + 1));
        std::vector<Component> cs;
        for (int k = k_min; k <= k_max; ++k) cs.push_back(point_component(std::pow(q, k)));
        return TimeScale(std::move(cs));
    }

    static TimeScale interval(double lo, double hi) {
        if (!(lo < hi)) throw error("interval: need lo < hi");
        return TimeScale({interval_component(lo, hi)});
    }

    // -- basic queries --

    const std::vector<Component>& components() const { return comps_; }
    double eps_member() const { return eps_; }
    double min_value() const { return comps_.front().lo; }
    double max_value() const { return comps_.back().hi; }

    bool contains(double t) const { return locate(t) >= 0; }

    /// Index into components() of the component containing t.
    std::size_t component_index(double t) const { return locate_canonical(t).first; }

    /// Snap t onto the stored grid (absorbs floating-point drift up to
    /// eps_member). Throws membership_error for non-members.
    double canonical(double t) const {
        const int i = locate(t);
        if (i < 0) throw membership_error(t);
        const Component& c = comps_[static_cast<std::size_t>(i)];
        return std::clamp(t, c.lo, c.hi);
    }

    // -- jump operators (§-style definitions; arguments must be members) --

    /// Forward jump: least member strictly above t; max_value at the maximum.
    double sigma(double t) const {
        const auto [i, tc] = locate_canonical(t);
        const Component& c = comps_[i];
        if (c.is_interval() && tc < c.hi) return tc;
        if (i + 1 < comps_.size()) return comps_[i + 1].lo;
        return tc; // t == sup T
    }

    /// Backward jump: greatest member strictly below t; min_value at the minimum.
    double rho(double t) const {
        const auto [i, tc] = locate_canonical(t);
        const Component& c = comps_[i];
        if (c.is_interval() && tc > c.lo) return tc;
        if (i > 0) return comps_[i - 1].hi;
        return tc; // t == inf T
    }

    /// Graininess mu(t) = sigma(t) - t.
    double graininess(double t) const {
        const double tc = canonical(t);
        return sigma(tc) - tc;
    }

    PointClass classify(double t) const {
        const double tc = canonical(t);
        const double s = sigma(tc);
        const double r = rho(tc);
        PointClass pc;
        pc.right_scattered = s > tc;
        pc.right_dense = s == tc;
        pc.left_scattered = r < tc;
        pc.left_dense = r == tc;
        pc.is_min = tc == min_value();
        pc.is_max = tc == max_value();
        return pc;
    }

    /// T^kappa: the scale without its maximum when that maximum is
    /// left-scattered, the scale itself otherwise.
    TimeScale kappa() const {
        if (comps_.size() >= 2 && comps_.back().is_point()) {
            std::vector<Component> cs(comps_.begin(), comps_.end() - 1);
            return TimeScale(std::move(cs), eps_);
        }
        return *this;
    }

    bool in_kappa(double t) const {
        const int i = locate(t);
        if (i < 0) return false;
        const double tc = std::clamp(t, comps_[static_cast<std::size_t>(i)].lo,
                                     comps_[static_cast<std::size_t>(i)].hi);
        return !(tc == max_value() && comps_.back().is_point() && comps_.size() >= 2);
    }

    /// Point components in increasing order (the scattered part of the
    /// integration decomposition; dense_segments carries the rest).
    std::vector<double> scattered_points() const {
        std::vector<double> pts;
        for (const auto& c : comps_)
            if (c.is_point()) pts.push_back(c.lo);
        return pts;
    }

    /// Interval components in increasing order.
    std::vector<Component> dense_segments() const {
        std::vector<Component> segs;
        for (const auto& c : comps_)
            if (c.is_interval()) segs.push_back(c);
        return segs;
    }

    /// [a, b] ∩ T as a time scale of its own. a and b must be members.
    TimeScale restrict(double a, double b) const {
        const double ac = canonical(a);
        const double bc = canonical(b);
        if (!(ac <= bc)) throw error("restrict: need a <= b");
        std::vector<Component> cs;
        for (const auto& c : comps_) {
            const double lo = std::max(c.lo, ac);
            const double hi = std::min(c.hi, bc);
            if (lo <= hi) cs.push_back(Component{lo, hi});
        }
        return TimeScale(std::move(cs), eps_);
    }

    friend bool operator==(const TimeScale& a, const TimeScale& b) { return a.comps_ == b.comps_; }

private:
    static void check_count(std::size_t n) {
        if (n > 2'000'000) throw error("generator would materialize too many points");
    }

    /// Index of the component containing t (within eps_member), or -1.
    int locate(double t) const {
        if (comps_.empty()) return -1;
        auto it = std::upper_bound(comps_.begin(), comps_.end(), t,
                                   [](double v, const Component& c) { return v < c.lo; });
        // candidate components: the one before it (lo <= t) and it itself (t may
        // sit within eps below its lo)
        if (it != comps_.begin()) {
            const auto& c = *std::prev(it);
            if (t <= c.hi + eps_) return static_cast<int>(std::distance(comps_.begin(), std::prev(it)));
        }
        if (it != comps_.end() && it->lo - t <= eps_)
            return static_cast<int>(std::distance(comps_.begin(), it));
        return -1;
    }

    std::pair<std::size_t, double> locate_canonical(double t) const {
        const int i = locate(t);
        if (i < 0) throw membership_error(t);
        const auto idx = static_cast<std::size_t>(i);
        return {idx, std::clamp(t, comps_[idx].lo, comps_[idx].hi)};
    }

    std::vector<Component> comps_;
    double eps_;
};

// -- declarative scale descriptions (mirrors the JSON/CLI wire formats) --

struct IntegersSpec {
    std::int64_t a;
    std::int64_t b;
};
struct HStepSpec {
    double a;
    double b;
    double h;
};
struct QScaleSpec {
    double q;
    int k_min;
    int k_max;
};
struct UnionSpec {
    std::vector<Component> components;
};

/// A finite description of a time scale that can be stored, parsed and
/// materialized. Generated grids satisfy every TimeScale invariant.
struct ScaleGenerator {
    std::variant<IntegersSpec, HStepSpec, QScaleSpec, UnionSpec> spec;

    TimeScale materialize() const {
        return std::visit(
            [](const auto& s) -> TimeScale {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, IntegersSpec>) {
                    return TimeScale::integers(s.a, s.b);
                } else if constexpr (std::is_same_v<T, HStepSpec>) {
                    return TimeScale::h_step(s.a, s.b, s.h);
                } else if constexpr (std::is_same_v<T, QScaleSpec>) {
                    return TimeScale::q_scale(s.q, s.k_min, s.k_max);
                } else {
                    return TimeScale(s.components);
                }
            },
            spec);
    }
};

} // namespace tsl
