#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tsl/delta.hpp"
#include "tsl/errors.hpp"
#include "tsl/time_scale.hpp"
#include "tsl/variational.hpp"

namespace tsl {

/// Coordinate transformation x = z(t, x_tilde) with inverse x_tilde =
/// z_inv(t, x) and gauge G whose delta derivative along a trajectory absorbs
/// the integrand difference L - L_tilde.
struct Transformation {
    std::function<double(double, double)> z;
    std::function<double(double, double)> z_inv;
    std::function<double(double, double)> gauge;
};

/// Residual tolerance appropriate to the scale: exact algebra on purely
/// scattered scales, finite-difference noise on dense segments.
inline double default_tol_res(const TimeScale& ts) {
    for (const auto& c : ts.components())
        if (c.is_interval()) return 1e-8;
    return 1e-12;
}

/// An original problem, its transformed companion, and the transformation
/// connecting them. Construction validates that both problems share a scale,
/// that the transformed boundary values are the z_inv images of the original
/// ones, and that z and z_inv invert each other on a sample of (t, value)
/// pairs (all within 1e-9).
class LeitmannPair {
public:
    LeitmannPair(VariationalProblem original, VariationalProblem transformed,
                 Transformation transform)
        : original_(std::move(original)),
          transformed_(std::move(transformed)),
          transform_(std::move(transform)) {
        validate();
    }

    const VariationalProblem& original() const { return original_; }
    const VariationalProblem& transformed() const { return transformed_; }
    const Transformation& transform() const { return transform_; }

private:
    void validate() const {
        if (!(original_.scale() == transformed_.scale()))
            throw inconsistent_transformation_error(
                "original and transformed problems live on different scales");
        const double a = original_.a(), b = original_.b();
        if (std::abs(transform_.z_inv(a, original_.alpha()) - transformed_.alpha()) > 1e-9)
            throw inconsistent_transformation_error(
                "transformed alpha is not z_inv(a, alpha)");
        if (std::abs(transform_.z_inv(b, original_.beta()) - transformed_.beta()) > 1e-9)
            throw inconsistent_transformation_error(
                "transformed beta is not z_inv(b, beta)");

        std::vector<double> ts_samples{a, b, 0.5 * (a + b)};
        for (const auto& c : original_.scale().components())
            if (c.is_interval()) ts_samples.push_back(0.5 * (c.lo + c.hi));
        const double values[] = {original_.alpha(), original_.beta(), 0.0, 1.0, -1.0, 2.5};
        for (double t : ts_samples) {
            for (double x : values) {
                if (std::abs(transform_.z(t, transform_.z_inv(t, x)) - x) > 1e-9)
                    throw inconsistent_transformation_error(
                        "z(t, z_inv(t, x)) != x at sampled point");
                if (std::abs(transform_.z_inv(t, transform_.z(t, x)) - x) > 1e-9)
                    throw inconsistent_transformation_error(
                        "z_inv(t, z(t, x)) != x at sampled point");
            }
        }
    }

    VariationalProblem original_;
    VariationalProblem transformed_;
    Transformation transform_;
};

/// Pointwise identity residual at t: L(t, x^sigma, x^delta) -
/// L_tilde(t, x_tilde^sigma, x_tilde^delta) - g^delta(t), where
/// x = z(., x_tilde(.)) and g(t) = G(t, x_tilde(t)) is delta-differentiated
/// as one composed scale function (the time-scale chain rule is not
/// classical, so no expansion is attempted).
inline double identity_residual(const LeitmannPair& pair, const Trajectory& x_tilde, double t,
                                const DeltaOptions& opts = {}) {
    const TimeScale& ts = pair.transformed().scale();
    const double tc = ts.canonical(t);
    if (!ts.in_kappa(tc)) throw kappa_domain_error(tc);

    const Transformation& tr = pair.transform();
    const Trajectory x = x_tilde.map_values([&tr](double s, double v) { return tr.z(s, v); });
    const ScaleFunction xf = x.as_scale_function();
    const ScaleFunction xtf = x_tilde.as_scale_function();
    const ScaleFunction g{[&tr, &x_tilde](double s) { return tr.gauge(s, x_tilde(s)); },
                          x_tilde.corners()};

    const double sig = ts.sigma(tc);
    const double lhs = pair.original().lagrangian()(tc, x(sig),
                                                    delta_derivative(ts, xf, tc, opts));
    const double rhs = pair.transformed().lagrangian()(tc, x_tilde(sig),
                                                       delta_derivative(ts, xtf, tc, opts));
    return lhs - rhs - delta_derivative(ts, g, tc, opts);
}

struct VerificationReport {
    double max_abs_residual = 0.0;
    std::int64_t points_checked = 0;
    double functional_gap = 0.0;
    double gap_constant_spread = 0.0;
    bool pass = false;
    double tol_res = 0.0;
    double tol_gap = 0.0;
};

/// Monte-Carlo check of the fundamental lemma: over `trials` random
/// admissible x_tilde, (i) the pointwise identity residual stays below
/// tol_res everywhere sampled, and (ii) L[x] - L_tilde[x_tilde] is one
/// constant across trials, equal to G(b, x_tilde(b)) - G(a, x_tilde(a)),
/// within tol_gap. Violations fail the report; this function does not throw
/// on them. Pass tol_res < 0 to pick the scale-appropriate default.
inline VerificationReport verify_lemma(const LeitmannPair& pair, int trials, std::uint64_t seed,
                                       double tol_res = -1.0, double tol_gap = 1e-8,
                                       const DeltaOptions& opts = {}) {
    if (trials < 1) throw error("verify_lemma: need at least one trial");
    const VariationalProblem& pt = pair.transformed();
    if (tol_res < 0) tol_res = default_tol_res(pt.scale());

    VerificationReport rep;
    rep.tol_res = tol_res;
    rep.tol_gap = tol_gap;
    try {
        const std::vector<double> pts = sample_points(pt.scale());
        const Transformation& tr = pair.transform();
        const double gap_ref =
            tr.gauge(pt.b(), pt.beta()) - tr.gauge(pt.a(), pt.alpha());

        double gap_min = std::numeric_limits<double>::infinity();
        double gap_max = -std::numeric_limits<double>::infinity();
        double gap_sum = 0.0;
        for (int k = 0; k < trials; ++k) {
            const Trajectory xt = random_admissible(pt, seed + static_cast<std::uint64_t>(k), 0.5);
            for (double t : pts) {
                rep.max_abs_residual =
                    std::max(rep.max_abs_residual, std::abs(identity_residual(pair, xt, t, opts)));
                ++rep.points_checked;
            }
            const Trajectory x =
                xt.map_values([&tr](double s, double v) { return tr.z(s, v); });
            const double gap =
                evaluate_functional(pair.original(), x, opts) - evaluate_functional(pt, xt, opts);
            gap_min = std::min(gap_min, gap);
            gap_max = std::max(gap_max, gap);
            gap_sum += gap;
        }
        rep.functional_gap = gap_sum / trials;
        rep.gap_constant_spread = gap_max - gap_min;
        rep.pass = rep.max_abs_residual <= tol_res && rep.gap_constant_spread <= tol_gap &&
                   std::abs(rep.functional_gap - gap_ref) <= tol_gap;
    } catch (const std::exception&) {
        rep.max_abs_residual = std::numeric_limits<double>::infinity();
        rep.pass = false;
    }
    return rep;
}

/// Carry the transformed problem's minimizer back through z. The image must
/// be admissible for the original problem; anything else means the pair's
/// data are inconsistent.
inline Trajectory transport_minimizer(const LeitmannPair& pair, const Trajectory& x_tilde_star) {
    const Transformation& tr = pair.transform();
    Trajectory x =
        x_tilde_star.map_values([&tr](double s, double v) { return tr.z(s, v); });
    const AdmissibilityReport rep = check_admissible(pair.original(), x);
    if (!rep.admissible) {
        std::string msg = "transported minimizer is not admissible:";
        for (const auto& v : rep.violations) msg += " " + v;
        throw inconsistent_transformation_error(msg);
    }
    return x;
}

/// The built-in integrand family (x^delta)^2 + x^sigma + t*x^delta that the
/// linear-shift transformation handles in closed form.
inline VariationalProblem make_linear_shift_problem(const TimeScale& ts, double a, double b,
                                                    double alpha, double beta) {
    Lagrangian L{[](double t, double y, double v) { return v * v + y + t * v; },
                 [](double, double, double) { return 1.0; },
                 [](double t, double, double v) { return 2.0 * v + t; }};
    return VariationalProblem(ts, a, b, alpha, beta, std::move(L));
}

namespace detail {
inline bool is_linear_shift_lagrangian(const Lagrangian& L) {
    const double probes[][3] = {{0.0, 0.0, 0.0}, {1.0, 2.0, -1.0}, {2.0, -3.0, 0.5},
                                {0.5, 1.5, 2.0}, {-1.0, 4.0, -2.5}};
    for (const auto& p : probes) {
        const double expect = p[2] * p[2] + p[1] + p[0] * p[2];
        if (std::abs(L(p[0], p[1], p[2]) - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            return false;
    }
    return true;
}
} // namespace detail

/// Closed-form construction for the linear-shift family: the transformation
/// x = x_tilde + c*t + d with c = (alpha-beta)/(a-b), d = (beta*a -
/// b*alpha)/(a-b) maps the problem to minimizing the integral of
/// (x_tilde^delta)^2 with zero boundary values; the gauge
/// G(t, x_tilde) = 2c*x_tilde + t*x_tilde + c*t^2 + (c^2+d)*t absorbs the
/// integrand difference exactly.
inline LeitmannPair linear_shift_case(const VariationalProblem& p) {
    if (p.a() == p.b())
        throw degeneracy_error("linear_shift_case: degenerate interval a = b");
    if (!detail::is_linear_shift_lagrangian(p.lagrangian()))
        throw error("linear_shift_case: Lagrangian is not of the form "
                    "(x^delta)^2 + x^sigma + t*x^delta");

    const double a = p.a(), b = p.b(), alpha = p.alpha(), beta = p.beta();
    const double c = (alpha - beta) / (a - b);
    const double d = (beta * a - b * alpha) / (a - b);

    Transformation tr{
        [c, d](double t, double xt) { return xt + c * t + d; },
        [c, d](double t, double x) { return x - c * t - d; },
        [c, d](double t, double xt) { return 2.0 * c * xt + t * xt + c * t * t + (c * c + d) * t; }};

    Lagrangian Lt{[](double, double, double v) { return v * v; },
                  [](double, double, double) { return 0.0; },
                  [](double, double, double v) { return 2.0 * v; }};
    VariationalProblem transformed(p.scale(), a, b, 0.0, 0.0, std::move(Lt));
    return LeitmannPair(p, std::move(transformed), std::move(tr));
}

} // namespace tsl
