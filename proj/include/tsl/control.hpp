#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tsl/delta.hpp"
#include "tsl/errors.hpp"
#include "tsl/rng.hpp"
#include "tsl/time_scale.hpp"
#include "tsl/variational.hpp"

namespace tsl {

/// Two-control, two-state problem on [0, 1]: minimize the delta integral of
/// running_cost(u1, u2) subject to x1^delta = f1(u1, u2), x2^delta =
/// f2(u1, u2), x(0) = (0, 0), endpoint targets x1(1), x2(1), and a box
/// constraint per control. The dynamics depend on the controls only, never
/// on the state.
struct ControlProblem {
    TimeScale ts;
    std::function<double(double, double)> running_cost;
    std::function<double(double, double)> f1;
    std::function<double(double, double)> f2;
    double x1_end = 2.0;
    double x2_end = 1.0;
    double box_lo = -1.0;
    double box_hi = 1.0;
};

/// The shipped problem family: cost u1^2 + u2^2, dynamics
/// x1^delta = exp(u1) + u1 + u2 and x2^delta = u2.
inline ControlProblem make_control_problem(const TimeScale& ts, double x1_end = 2.0,
                                           double x2_end = 1.0, double box_lo = -1.0,
                                           double box_hi = 1.0) {
    if (ts.min_value() != 0.0 || ts.max_value() != 1.0)
        throw error("control problem: the time scale must span exactly [0, 1]");
    if (!(box_lo < box_hi)) throw error("control problem: control box bounds out of order");
    return {ts,
            [](double u1, double u2) { return u1 * u1 + u2 * u2; },
            [](double u1, double u2) { return std::exp(u1) + u1 + u2; },
            [](double, double u2) { return u2; },
            x1_end,
            x2_end,
            box_lo,
            box_hi};
}

struct ControlPair {
    ScaleFunction u1;
    ScaleFunction u2;
};

struct ControlTrajectories {
    Trajectory x1;
    Trajectory x2;
};

namespace detail {

/// Cumulative integral of a control-driven rate over one dense segment:
/// per-panel Simpson values at uniform knots, cubic Hermite in between with
/// the exact rate as knot slope. The representation is C^1, cheap to
/// evaluate, and its derivative tracks the rate to O(h^3), which is what
/// pointwise dynamics checks differentiate.
struct HermiteFlow {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> xs;
    std::vector<double> fs;

    double operator()(double t) const {
        const std::size_t n = xs.size() - 1;
        const double h = (hi - lo) / static_cast<double>(n);
        const double pos = (t - lo) / h;
        std::size_t k = 0;
        if (pos > 0)
            k = std::min(static_cast<std::size_t>(pos), n - 1);
        const double s = std::clamp((t - (lo + static_cast<double>(k) * h)) / h, 0.0, 1.0);
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        return h00 * xs[k] + h * h10 * fs[k] + h01 * xs[k + 1] + h * h11 * fs[k + 1];
    }
};

inline constexpr std::size_t flow_panels = 2048;

inline HermiteFlow build_flow(const std::function<double(double)>& rate, double lo, double hi,
                              double x_lo) {
    HermiteFlow flow;
    flow.lo = lo;
    flow.hi = hi;
    const std::size_t n = flow_panels;
    const double h = (hi - lo) / static_cast<double>(n);
    flow.fs.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        flow.fs[k] = rate(k == n ? hi : lo + static_cast<double>(k) * h);
    flow.xs.resize(n + 1);
    flow.xs[0] = x_lo;
    for (std::size_t k = 0; k < n; ++k) {
        const double mid = lo + (static_cast<double>(k) + 0.5) * h;
        flow.xs[k + 1] = flow.xs[k] + h / 6.0 * (flow.fs[k] + 4.0 * rate(mid) + flow.fs[k + 1]);
    }
    return flow;
}

/// x(min) = 0, exact recurrence x(sigma(t)) = x(t) + mu(t) * rate(t) across
/// scattered points, Hermite flow across dense segments.
inline Trajectory integrate_flow(const TimeScale& ts, const std::function<double(double)>& rate) {
    std::vector<double> vals;
    std::vector<std::function<double(double)>> rules;
    double acc = 0.0;
    for (const auto& c : ts.components()) {
        if (c.is_point()) {
            vals.push_back(acc);
            const double mu = ts.sigma(c.lo) - c.lo;
            if (mu > 0) acc += mu * rate(c.lo);
        } else {
            auto seg = std::make_shared<HermiteFlow>(build_flow(rate, c.lo, c.hi, acc));
            acc = seg->xs.back();
            rules.push_back([seg = std::move(seg)](double t) { return (*seg)(t); });
            const double mu = ts.sigma(c.hi) - c.hi;
            if (mu > 0) acc += mu * rate(c.hi);
        }
    }
    return Trajectory(ts, std::move(vals), std::move(rules));
}

} // namespace detail

/// Forward state propagation; exact at scattered points, quadrature-backed
/// on dense segments (the dynamics are state-independent, so this is
/// integration, not ODE solving).
inline ControlTrajectories simulate(const ControlProblem& p, const ControlPair& u) {
    const auto rate1 = [&p, &u](double t) { return p.f1(u.u1(t), u.u2(t)); };
    const auto rate2 = [&p, &u](double t) { return p.f2(u.u1(t), u.u2(t)); };
    return {detail::integrate_flow(p.ts, rate1), detail::integrate_flow(p.ts, rate2)};
}

/// Delta integral of the running cost over [0, 1].
inline double cost(const ControlProblem& p, const ControlPair& u, const DeltaOptions& opts = {}) {
    std::vector<double> breaks = u.u1.piecewise_breaks;
    breaks.insert(breaks.end(), u.u2.piecewise_breaks.begin(), u.u2.piecewise_breaks.end());
    const ScaleFunction integrand{
        [&p, &u](double t) { return p.running_cost(u.u1(t), u.u2(t)); }, std::move(breaks)};
    return delta_integral(p.ts, integrand, p.ts.min_value(), p.ts.max_value(), opts);
}

/// Box-check grid: the audit grid plus dense-segment endpoints (controls are
/// constrained there too even where the integral never looks).
inline std::vector<double> control_check_points(const TimeScale& ts, int dense_samples = 64) {
    std::vector<double> pts = sample_points(ts, dense_samples);
    for (const auto& c : ts.components()) {
        if (c.is_interval()) {
            pts.push_back(c.lo);
            pts.push_back(c.hi);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

struct FeasibilityReport {
    bool feasible = true;
    double max_box_violation = 0.0;
    double x1_end_error = 0.0;
    double x2_end_error = 0.0;
    std::vector<std::string> violations;
};

/// Controls inside the box at every checked point, simulated endpoints on
/// target within tol.
inline FeasibilityReport feasible(const ControlProblem& p, const ControlPair& u, double tol = 1e-9) {
    FeasibilityReport rep;
    for (double t : control_check_points(p.ts)) {
        for (double v : {u.u1(t), u.u2(t)}) {
            const double over = std::max(p.box_lo - v, v - p.box_hi);
            rep.max_box_violation = std::max(rep.max_box_violation, over);
        }
    }
    if (rep.max_box_violation > 1e-12) {
        rep.feasible = false;
        rep.violations.push_back("control leaves the box by " +
                                 std::to_string(rep.max_box_violation));
    }
    const ControlTrajectories x = simulate(p, u);
    rep.x1_end_error = std::abs(x.x1(1.0) - p.x1_end);
    rep.x2_end_error = std::abs(x.x2(1.0) - p.x2_end);
    if (rep.x1_end_error > tol) {
        rep.feasible = false;
        rep.violations.push_back("x1(1) misses target by " + std::to_string(rep.x1_end_error));
    }
    if (rep.x2_end_error > tol) {
        rep.feasible = false;
        rep.violations.push_back("x2(1) misses target by " + std::to_string(rep.x2_end_error));
    }
    return rep;
}

/// The s-parameter family: endpoint data and the u2 box shift by s, u1 is
/// untouched. s = 0 reproduces the original problem.
struct SParamFamily {
    double s = 0.0;
    double x1_end = 0.0;
    double x2_end = 0.0;
    double u1_box_lo = 0.0;
    double u1_box_hi = 0.0;
    double u2_box_lo = 0.0;
    double u2_box_hi = 0.0;
};

inline SParamFamily s_family(const ControlProblem& p, double s) {
    return {s,        p.x1_end + s, p.x2_end + s, p.box_lo,
            p.box_hi, p.box_lo + s, p.box_hi + s};
}

struct TransformedControlSystem {
    ControlPair u;
    ControlTrajectories x;
};

/// x1^s = x1 + s*t, x2^s = x2 + s*t, u2^s = u2 + s, u1^s = u1.
inline TransformedControlSystem s_transform(double s, const ControlPair& u,
                                            const ControlTrajectories& x) {
    ControlPair us;
    us.u1 = u.u1;
    us.u2 = ScaleFunction{[rule = u.u2.rule, s](double t) { return rule(t) + s; },
                          u.u2.piecewise_breaks};
    const auto shift = [s](double t, double v) { return v + s * t; };
    return {std::move(us), {x.x1.map_values(shift), x.x2.map_values(shift)}};
}

struct InvarianceReport {
    double s = 0.0;
    double cost_gap = 0.0;
    double expected_gap = 0.0;
    double max_dynamics_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Checks the invariance computation along a concrete control: the cost of
/// the s-transformed control exceeds the original by s^2 + 2*s*x2(1) (a
/// telescoping delta derivative, so the gap depends only on endpoint data),
/// and the transformed trajectories satisfy the transformed dynamics
/// pointwise. The caller's u must be feasible for the original endpoint
/// data, which is what pins x2(1).
inline InvarianceReport check_invariance(const ControlProblem& p, double s, const ControlPair& u,
                                         double tol = 1e-8, const DeltaOptions& opts = {}) {
    InvarianceReport rep;
    rep.s = s;
    rep.tol = tol;
    rep.expected_gap = s * s * (p.ts.max_value() - p.ts.min_value()) + 2.0 * s * p.x2_end;

    const ControlTrajectories x = simulate(p, u);
    const TransformedControlSystem ts_sys = s_transform(s, u, x);
    rep.cost_gap = cost(p, ts_sys.u, opts) - cost(p, u, opts);

    const ScaleFunction x1f = ts_sys.x.x1.as_scale_function();
    const ScaleFunction x2f = ts_sys.x.x2.as_scale_function();
    for (double t : sample_points(p.ts)) {
        const double u1v = ts_sys.u.u1(t), u2v = ts_sys.u.u2(t);
        const double r1 = delta_derivative(p.ts, x1f, t, opts) - p.f1(u1v, u2v);
        const double r2 = delta_derivative(p.ts, x2f, t, opts) - p.f2(u1v, u2v);
        rep.max_dynamics_residual =
            std::max({rep.max_dynamics_residual, std::abs(r1), std::abs(r2)});
    }
    rep.pass = std::abs(rep.cost_gap - rep.expected_gap) <= tol &&
               rep.max_dynamics_residual <= tol;
    return rep;
}

struct InvarianceSolution {
    double s_star = 0.0;
    ControlPair minimizer;
    double min_cost = 0.0;
};

/// Finds the s for which zero controls are admissible for the s-problem by
/// solving the endpoint equations of the zero-control flow, then pulls the
/// zero controls back. The x2 equation fixes s exactly (the zero-control x2
/// flow is identically zero); the x1 equation must agree within 1e-9 or the
/// family has no invariant solution. min_cost = 0 - (s^2 + 2*s*x2(1)) comes
/// from the invariance identity, not from quadrature.
inline InvarianceSolution solve_by_invariance(const ControlProblem& p) {
    const ControlPair zero{ScaleFunction{[](double) { return 0.0; }, {}},
                           ScaleFunction{[](double) { return 0.0; }, {}}};
    const ControlTrajectories flow = simulate(p, zero);
    const double s_from_x1 = flow.x1(1.0) - p.x1_end;
    const double s_from_x2 = flow.x2(1.0) - p.x2_end;
    if (std::abs(s_from_x1 - s_from_x2) > 1e-9)
        throw no_invariant_solution_error(
            "endpoint equations disagree: x1 gives s = " + std::to_string(s_from_x1) +
            ", x2 gives s = " + std::to_string(s_from_x2));
    const double s = s_from_x2;

    const double u2_value = -s; // pull-back u2 = u2^s - s with u2^s = 0
    const auto outside = [&p](double v) {
        return v < p.box_lo - 1e-12 || v > p.box_hi + 1e-12;
    };
    if (outside(u2_value) || outside(0.0))
        throw no_invariant_solution_error("pulled-back minimizer leaves the control box");

    InvarianceSolution sol;
    sol.s_star = s;
    sol.minimizer = ControlPair{ScaleFunction{[](double) { return 0.0; }, {}},
                                ScaleFunction{[u2_value](double) { return u2_value; }, {}}};
    sol.min_cost = -(s * s * (p.ts.max_value() - p.ts.min_value()) + 2.0 * s * p.x2_end);
    return sol;
}

/// Deterministic feasible sample around the known minimizer: perturb u2
/// about 1 and u1 about 0, repair the x2 endpoint with the uniform u2 shift
/// the s-family dictates, repair the x1 endpoint by bisection on a uniform
/// u1 offset, and discard attempts that leave the box. The box-plus-endpoint
/// geometry of the shipped problem pins u2 (u2 <= 1 with integral 1 over a
/// measure-1 domain forces u2 = 1 at every audited point), so surviving
/// samples vary in u1 only; u2 attempts shrink to the pinned value.
inline ControlPair random_feasible(const ControlProblem& p, std::uint64_t seed,
                                   const DeltaOptions& opts = {}) {
    const TimeScale& ts = p.ts;
    detail::Rng rng(seed);
    const double measure =
        delta_integral(ts, ScaleFunction{[](double) { return 1.0; }, {}}, 0.0, 1.0, opts);

    const double blo = p.box_lo, bhi = p.box_hi;
    const auto random_bumps = [&](double magnitude, double center) {
        std::vector<double> vals;
        std::vector<std::function<double(double)>> rules;
        for (const auto& c : ts.components()) {
            if (c.is_point()) {
                vals.push_back(std::clamp(center + magnitude * rng.symmetric(), blo, bhi));
            } else {
                const double c0 = rng.symmetric(), c1 = rng.symmetric(), c2 = rng.symmetric();
                const double lo = c.lo, hi = c.hi;
                rules.push_back([=](double t) {
                    const double w = (t - lo) / (hi - lo);
                    return std::clamp(center + magnitude * (c0 + c1 * w + c2 * w * w), blo, bhi);
                });
            }
        }
        return Trajectory(ts, std::move(vals), std::move(rules));
    };

    const std::vector<double> check = control_check_points(ts);
    const auto in_box = [&](const std::function<double(double)>& f) {
        for (double t : check)
            if (f(t) < p.box_lo - 1e-12 || f(t) > p.box_hi + 1e-12) return false;
        return true;
    };

    for (int attempt = 0; attempt < 40; ++attempt) {
        // u2: perturb, then shift so the x2 endpoint lands on target.
        const double mag2 = attempt < 6 ? 0.15 * std::pow(0.5, attempt) : 0.0;
        const Trajectory u2_raw = random_bumps(mag2, p.x2_end / measure);
        const ScaleFunction u2_raw_f = u2_raw.as_scale_function();
        const double shift2 = (p.x2_end - delta_integral(ts, u2_raw_f, 0.0, 1.0, opts)) / measure;
        const std::function<double(double)> u2_rule = [u2_raw, shift2](double t) {
            return u2_raw(t) + shift2;
        };
        if (!in_box(u2_rule)) continue;

        // u1: perturb, then bisect a uniform offset until the x1 endpoint
        // lands on target (the flow is strictly increasing in the offset).
        const Trajectory u1_raw = random_bumps(0.25, 0.0);
        const auto x1_end_at = [&](double offset) {
            const ScaleFunction rate{
                [&u1_raw, &u2_rule, offset, &p](double t) {
                    return p.f1(u1_raw(t) + offset, u2_rule(t));
                },
                {}};
            return delta_integral(ts, rate, 0.0, 1.0, opts);
        };
        double lo = -3.0, hi = 3.0;
        double glo = x1_end_at(lo) - p.x1_end, ghi = x1_end_at(hi) - p.x1_end;
        if (glo > 0.0 || ghi < 0.0) continue;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double gm = x1_end_at(mid) - p.x1_end;
            (gm <= 0.0 ? lo : hi) = mid;
        }
        const double offset = 0.5 * (lo + hi);
        const std::function<double(double)> u1_rule = [u1_raw, offset](double t) {
            return u1_raw(t) + offset;
        };
        if (!in_box(u1_rule)) continue;

        return ControlPair{ScaleFunction{u1_rule, {}}, ScaleFunction{u2_rule, {}}};
    }
    throw error("random_feasible: no feasible control pair after 40 attempts");
}

} // namespace tsl
