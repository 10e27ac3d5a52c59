#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tsl/delta.hpp"
#include "tsl/errors.hpp"
#include "tsl/rng.hpp"
#include "tsl/time_scale.hpp"

namespace tsl {

/// Integrand L(t, y, v) with y the sigma-composed trajectory value and v the
/// delta derivative. Partials are optional; a finite-difference fallback is
/// available but nothing in the solver path depends on them.
struct Lagrangian {
    std::function<double(double, double, double)> value;
    std::function<double(double, double, double)> dy = nullptr;
    std::function<double(double, double, double)> dv = nullptr;

    double operator()(double t, double y, double v) const { return value(t, y, v); }

    double partial_y(double t, double y, double v, double h = 1e-6) const {
        if (dy) return dy(t, y, v);
        return (value(t, y + h, v) - value(t, y - h, v)) / (2.0 * h);
    }
    double partial_v(double t, double y, double v, double h = 1e-6) const {
        if (dv) return dv(t, y, v);
        return (value(t, y, v + h) - value(t, y, v - h)) / (2.0 * h);
    }
};

/// Fixed-endpoint problem: minimize the delta integral of
/// L(t, x^sigma, x^delta) over [a, b] with x(a) = alpha, x(b) = beta.
/// The scale is restricted to [a, b] at construction.
class VariationalProblem {
public:
    VariationalProblem(const TimeScale& ts, double a, double b, double alpha, double beta,
                       Lagrangian lagrangian)
        : scale_(make_restricted(ts, a, b)),
          a_(scale_.min_value()),
          b_(scale_.max_value()),
          alpha_(alpha),
          beta_(beta),
          lagrangian_(std::move(lagrangian)) {
        if (scale_.components().size() == 1 && scale_.components().front().is_point())
            throw error("variational problem: [a, b] on this scale has fewer than two points");
    }

    const TimeScale& scale() const { return scale_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    const Lagrangian& lagrangian() const { return lagrangian_; }

private:
    static TimeScale make_restricted(const TimeScale& ts, double a, double b) {
        if (!(a < b)) throw error("variational problem: need a < b");
        return ts.restrict(ts.canonical(a), ts.canonical(b));
    }

    TimeScale scale_;
    double a_, b_;
    double alpha_, beta_;
    Lagrangian lagrangian_;
};

/// An admissible-candidate function on a bounded scale: exact values at the
/// point components, one evaluable rule per dense segment, plus declared
/// corner points where the delta derivative may kink.
class Trajectory {
public:
    Trajectory(TimeScale scale, std::vector<double> scattered_values,
               std::vector<std::function<double(double)>> segment_rules,
               std::vector<double> corners = {})
        : scale_(std::move(scale)),
          scattered_values_(std::move(scattered_values)),
          segment_rules_(std::move(segment_rules)),
          corners_(std::move(corners)) {
        std::size_t points = 0, segments = 0;
        for (const auto& c : scale_.components()) (c.is_point() ? points : segments) += 1;
        if (scattered_values_.size() != points || segment_rules_.size() != segments)
            throw error("trajectory: value/rule counts do not match the scale");
    }

    static Trajectory from_rule(const TimeScale& scale, std::function<double(double)> rule,
                                std::vector<double> corners = {}) {
        std::vector<double> vals;
        std::vector<std::function<double(double)>> rules;
        for (const auto& c : scale.components()) {
            if (c.is_point())
                vals.push_back(rule(c.lo));
            else
                rules.push_back(rule);
        }
        return Trajectory(scale, std::move(vals), std::move(rules), std::move(corners));
    }

    /// The straight line through (min, alpha) and (max, beta).
    static Trajectory linear(const TimeScale& scale, double alpha, double beta) {
        const double a = scale.min_value();
        const double b = scale.max_value();
        const double slope = (beta - alpha) / (b - a);
        return from_rule(scale, [a, alpha, slope](double t) { return alpha + slope * (t - a); });
    }

    double operator()(double t) const {
        const std::size_t ci = scale_.component_index(t);
        const Component& c = scale_.components()[ci];
        if (c.is_point()) return scattered_values_[point_rank(ci)];
        return segment_rules_[segment_rank(ci)](std::clamp(t, c.lo, c.hi));
    }

    const TimeScale& scale() const { return scale_; }
    const std::vector<double>& scattered_values() const { return scattered_values_; }
    const std::vector<double>& corners() const { return corners_; }

    ScaleFunction as_scale_function() const {
        return ScaleFunction{[x = *this](double t) { return x(t); }, corners_};
    }

    /// Pointwise image under (t, x) -> fn(t, x); scattered values are mapped
    /// exactly, segment rules are composed lazily.
    Trajectory map_values(std::function<double(double, double)> fn) const {
        std::vector<double> vals;
        vals.reserve(scattered_values_.size());
        std::size_t pi = 0, si = 0;
        for (const auto& c : scale_.components())
            if (c.is_point()) vals.push_back(fn(c.lo, scattered_values_[pi++]));
        std::vector<std::function<double(double)>> rules;
        rules.reserve(segment_rules_.size());
        for (const auto& c : scale_.components()) {
            if (!c.is_interval()) continue;
            rules.push_back([fn, rule = segment_rules_[si++]](double t) { return fn(t, rule(t)); });
        }
        return Trajectory(scale_, std::move(vals), std::move(rules), corners_);
    }

private:
    std::size_t point_rank(std::size_t comp_index) const {
        std::size_t r = 0;
        for (std::size_t i = 0; i < comp_index; ++i)
            if (scale_.components()[i].is_point()) ++r;
        return r;
    }
    std::size_t segment_rank(std::size_t comp_index) const {
        std::size_t r = 0;
        for (std::size_t i = 0; i < comp_index; ++i)
            if (scale_.components()[i].is_interval()) ++r;
        return r;
    }

    TimeScale scale_;
    std::vector<double> scattered_values_;
    std::vector<std::function<double(double)>> segment_rules_;
    std::vector<double> corners_;
};

/// L[x] = integral over [a, b] of L(t, x^sigma(t), x^delta(t)) delta-t.
///
/// Scattered contributions (point components and right-scattered segment
/// ends) are exact mu-weighted sums using the forward quotient. Dense
/// segments are integrated piecewise between declared corners; within a
/// piece the derivative is taken on the piece alone, so the quadrature only
/// ever sees a smooth integrand. (Feeding the raw delta derivative to the
/// quadrature would poison it at right-scattered segment ends, where the
/// forward quotient differs from the one-sided classical derivative.)
inline double evaluate_functional(const VariationalProblem& p, const Trajectory& x,
                                  const DeltaOptions& opts = {}) {
    if (!(x.scale() == p.scale())) throw error("trajectory scale does not match the problem");
    const TimeScale& ts = p.scale();
    const double a = p.a(), b = p.b();
    const Lagrangian& L = p.lagrangian();
    const ScaleFunction xf{[&x](double t) { return x(t); }, {}};

    const auto jump_term = [&](double t) {
        const double mu = ts.sigma(t) - t;
        const double xs = x(ts.sigma(t));
        return mu * L(t, xs, (xs - x(t)) / mu);
    };

    double total = 0.0;
    for (const auto& c : ts.components()) {
        if (c.is_point()) {
            if (c.lo >= a && c.lo < b) total += jump_term(c.lo);
            continue;
        }
        const double q_lo = std::max(c.lo, a);
        const double q_hi = std::min(c.hi, b);
        if (q_lo < q_hi) {
            std::vector<double> cuts{q_lo};
            for (double corner : x.corners())
                if (corner > q_lo && corner < q_hi) cuts.push_back(corner);
            cuts.push_back(q_hi);
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                const double lo = cuts[i], hi = cuts[i + 1];
                const TimeScale piece({interval_component(lo, hi)}, ts.eps_member());
                const auto g = [&](double t) {
                    return L(t, x(t), delta_derivative(piece, xf, t, opts));
                };
                if (hi - lo < 1e-9)
                    total += (hi - lo) * g(0.5 * (lo + hi));
                else
                    total += detail::simpson_adaptive(g, lo, hi, opts.tol_quad,
                                                      opts.max_quad_level);
            }
        }
        if (c.hi < b && c.hi >= a) total += jump_term(c.hi);
    }
    return total;
}

struct AdmissibilityReport {
    bool admissible = true;
    double endpoint_error_a = 0.0;
    double endpoint_error_b = 0.0;
    std::vector<std::string> violations;
};

/// Boundary conditions within tol, plus a continuity probe at declared corners.
inline AdmissibilityReport check_admissible(const VariationalProblem& p, const Trajectory& x,
                                            double tol = 1e-9) {
    AdmissibilityReport rep;
    rep.endpoint_error_a = std::abs(x(p.a()) - p.alpha());
    rep.endpoint_error_b = std::abs(x(p.b()) - p.beta());
    if (rep.endpoint_error_a > tol) {
        rep.admissible = false;
        rep.violations.push_back("x(a) misses alpha by " + std::to_string(rep.endpoint_error_a));
    }
    if (rep.endpoint_error_b > tol) {
        rep.admissible = false;
        rep.violations.push_back("x(b) misses beta by " + std::to_string(rep.endpoint_error_b));
    }
    const double probe = 1e-7;
    for (double c : x.corners()) {
        const std::size_t ci = x.scale().component_index(c);
        const Component& comp = x.scale().components()[ci];
        if (!comp.is_interval() || c - probe < comp.lo || c + probe > comp.hi) continue;
        const double jump = std::abs(x(c + probe) - x(c - probe));
        if (jump > std::max(tol, 100.0 * probe * (1.0 + std::abs(x(c))))) {
            rep.admissible = false;
            rep.violations.push_back("value jump at corner t = " + std::to_string(c));
        }
    }
    return rep;
}

/// Deterministic admissible sample: the linear interpolant plus a seeded
/// perturbation that vanishes at both endpoints. Scattered points get
/// hat-weighted uniform noise in [-magnitude, magnitude]; every dense segment
/// gets a low-order polynomial bump vanishing at the segment ends.
inline Trajectory random_admissible(const VariationalProblem& p, std::uint64_t seed,
                                    double magnitude) {
    if (magnitude < 0) throw error("random_admissible: magnitude must be nonnegative");
    const TimeScale& ts = p.scale();
    const double a = p.a(), b = p.b();
    const double slope = (p.beta() - p.alpha()) / (b - a);
    const auto base = [a, alpha = p.alpha(), slope](double t) { return alpha + slope * (t - a); };
    const auto hat = [a, b](double t) { return std::min(t - a, b - t) / ((b - a) / 2.0); };

    detail::Rng rng(seed);
    std::vector<double> vals;
    std::vector<std::function<double(double)>> rules;
    for (const auto& c : ts.components()) {
        if (c.is_point()) {
            vals.push_back(base(c.lo) + magnitude * rng.symmetric() * hat(c.lo));
        } else {
            const double c0 = rng.symmetric(), c1 = rng.symmetric(), c2 = rng.symmetric();
            const double lo = c.lo, hi = c.hi;
            rules.push_back([=](double t) {
                const double u = (t - lo) / (hi - lo);
                const double bump = 4.0 * u * (1.0 - u) * (c0 + c1 * u + c2 * u * u);
                return base(t) + magnitude * bump;
            });
        }
    }
    return Trajectory(ts, std::move(vals), std::move(rules));
}

} // namespace tsl
