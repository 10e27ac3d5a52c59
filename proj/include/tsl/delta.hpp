#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "tsl/errors.hpp"
#include "tsl/time_scale.hpp"

namespace tsl {

/// A scalar function on a time scale: an evaluable rule plus the (finite) set
/// of points where delta-differentiability may fail. Breaks split integration
/// panels; the derivative at a break is the right-limit quotient.
struct ScaleFunction {
    std::function<double(double)> rule;
    std::vector<double> piecewise_breaks = {};

    double operator()(double t) const { return rule(t); }
};

/// Numeric policy for the calculus layer.
struct DeltaOptions {
    double h_num = 1e-6;     // difference-quotient step on dense segments
    double tol_quad = 1e-10; // successive-estimate tolerance for quadrature
    int max_quad_level = 16; // interval count cap 2^max_quad_level
};

/// f composed with the forward jump: t -> f(sigma(t)).
inline ScaleFunction compose_sigma(const TimeScale& ts, ScaleFunction f) {
    auto rule = [ts, f = std::move(f.rule)](double t) { return f(ts.sigma(t)); };
    return ScaleFunction{std::move(rule), std::move(f.piecewise_breaks)};
}

namespace detail {

/// Composite-Simpson refinement with interval doubling until two successive
/// estimates agree within tol (absolute).
inline double simpson_adaptive(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_level) {
    if (a == b) return 0.0;
    double trap = 0.5 * (b - a) * (f(a) + f(b));
    double simpson_prev = trap;
    bool have_prev = false;
    std::int64_t n = 1; // current trapezoid panel count
    for (int level = 1; level <= max_level; ++level) {
        // refine the trapezoid estimate with the midpoints of the current panels
        const double h = (b - a) / static_cast<double>(n);
        double mid_sum = 0.0;
        for (std::int64_t k = 0; k < n; ++k)
            mid_sum += f(a + (static_cast<double>(k) + 0.5) * h);
        const double trap_next = 0.5 * (trap + h * mid_sum);
        const double simpson = (4.0 * trap_next - trap) / 3.0;
        if (have_prev && level >= 5 && std::abs(simpson - simpson_prev) < tol) return simpson;
        trap = trap_next;
        simpson_prev = simpson;
        have_prev = true;
        n *= 2;
    }
    // one more comparison at the cap before giving up
    const double h = (b - a) / static_cast<double>(n);
    double mid_sum = 0.0;
    for (std::int64_t k = 0; k < n; ++k)
        mid_sum += f(a + (static_cast<double>(k) + 0.5) * h);
    const double trap_next = 0.5 * (trap + h * mid_sum);
    const double simpson = (4.0 * trap_next - trap) / 3.0;
    const double achieved = std::abs(simpson - simpson_prev);
    if (achieved < tol) return simpson;
    throw quadrature_error(simpson, achieved);
}

/// n evenly spaced interior points of (lo, hi).
inline std::vector<double> interior_grid(double lo, double hi, int n) {
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        pts.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n + 1));
    return pts;
}

inline bool is_break(const std::vector<double>& breaks, double t, double eps) {
    for (double b : breaks)
        if (std::abs(t - b) <= eps) return true;
    return false;
}

} // namespace detail

/// Standard audit grid: every scattered point of the truncated scale (point
/// components and right-scattered segment ends) plus `dense_samples` evenly
/// spaced interior points per dense segment.
inline std::vector<double> sample_points(const TimeScale& ts, int dense_samples = 64) {
    std::vector<double> pts;
    for (const auto& c : ts.components()) {
        if (c.is_point()) {
            if (ts.in_kappa(c.lo)) pts.push_back(c.lo);
        } else {
            for (double t : detail::interior_grid(c.lo, c.hi, dense_samples)) pts.push_back(t);
            if (ts.sigma(c.hi) > c.hi && ts.in_kappa(c.hi)) pts.push_back(c.hi);
        }
    }
    return pts;
}

/// Delta derivative of f at t in T^kappa. Right-scattered points use the exact
/// forward quotient (f(sigma(t)) - f(t)) / mu(t); right-dense points use a
/// difference quotient with the step clipped to stay inside the dense segment
/// (central in the interior, second-order one-sided at segment ends and at
/// declared breaks, backward at a right-dense maximum).
inline double delta_derivative(const TimeScale& ts, const ScaleFunction& f, double t,
                               const DeltaOptions& opts = {}) {
    const double tc = ts.canonical(t);
    if (!ts.in_kappa(tc)) throw kappa_domain_error(t);

    const double mu = ts.graininess(tc);
    if (mu > 0) return (f(ts.sigma(tc)) - f(tc)) / mu;

    // right-dense: locate the surrounding dense panel (segment clipped by breaks)
    const Component* seg = nullptr;
    for (const auto& c : ts.components()) {
        if (c.is_interval() && tc >= c.lo && tc <= c.hi) {
            seg = &c;
            break;
        }
    }
    if (!seg) throw error("delta derivative undefined on a singleton scale");

    double left = seg->lo;
    double right = seg->hi;
    for (double b : f.piecewise_breaks) {
        if (b <= tc && b > left) left = b;
        if (b > tc && b < right) right = b;
    }

    const double eps = ts.eps_member();
    const bool at_break = detail::is_break(f.piecewise_breaks, tc, eps);
    const bool at_left = at_break || tc - left <= eps;
    const bool at_right = !at_left && right - tc <= eps;

    if (at_left) {
        const double h = std::min(opts.h_num, (right - tc) / 4.0);
        if (h < eps) throw error("dense panel too short for the derivative step");
        return (-3.0 * f(tc) + 4.0 * f(tc + h) - f(tc + 2.0 * h)) / (2.0 * h);
    }
    if (at_right) {
        const double h = std::min(opts.h_num, (tc - left) / 4.0);
        if (h < eps) throw error("dense panel too short for the derivative step");
        return (3.0 * f(tc) - 4.0 * f(tc - h) + f(tc - 2.0 * h)) / (2.0 * h);
    }
    const double h = std::min({opts.h_num, (tc - left) / 4.0, (right - tc) / 4.0});
    if (h < eps) throw error("dense panel too short for the derivative step");
    return (f(tc + h) - f(tc - h)) / (2.0 * h);
}

/// Delta integral of f over [c, d] with c, d members of the scale: the exact
/// sum mu(t) * f(t) over right-scattered t in [c, d) plus composite quadrature
/// over each dense sub-segment, split at declared breaks. Orientation flips
/// the sign when c > d.
inline double delta_integral(const TimeScale& ts, const ScaleFunction& f, double c, double d,
                             const DeltaOptions& opts = {}) {
    double cc = ts.canonical(c);
    double dc = ts.canonical(d);
    if (cc > dc) return -delta_integral(ts, f, dc, cc, opts);
    if (cc == dc) return 0.0;

    double total = 0.0;
    for (const auto& comp : ts.components()) {
        if (comp.hi < cc || comp.lo > dc) continue;
        if (comp.is_point()) {
            const double p = comp.lo;
            if (p >= cc && p < dc) total += (ts.sigma(p) - p) * f(p);
            continue;
        }
        const double lo = std::max(comp.lo, cc);
        const double hi = std::min(comp.hi, dc);
        if (lo < hi) {
            // split the panel at declared breaks
            std::vector<double> cuts{lo};
            for (double b : f.piecewise_breaks)
                if (b > lo && b < hi) cuts.push_back(b);
            cuts.push_back(hi);
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
                total += detail::simpson_adaptive(f.rule, cuts[k], cuts[k + 1], opts.tol_quad,
                                                  opts.max_quad_level);
        }
        // jump off the interval end when the scale continues past it
        if (comp.hi < dc) total += (ts.sigma(comp.hi) - comp.hi) * f(comp.hi);
    }
    return total;
}

} // namespace tsl
