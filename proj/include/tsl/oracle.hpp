#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tsl/errors.hpp"
#include "tsl/rng.hpp"
#include "tsl/variational.hpp"

namespace tsl {

/// A variational problem collapsed onto a finite grid t_0 = a, ..., t_N = b.
/// The objective is the exact scattered-scale functional
///   sum_k mu_k * L(t_k, x_{k+1}, (x_{k+1} - x_k) / mu_k),  mu_k = t_{k+1} - t_k,
/// with x_0 and x_N fixed to the boundary values — on purely scattered scales
/// this IS the functional, not an approximation of it.
struct DiscretizedProblem {
    std::vector<double> grid;
    double alpha = 0.0;
    double beta = 0.0;
    Lagrangian lagrangian;

    std::size_t free_count() const { return grid.size() > 2 ? grid.size() - 2 : 0; }

    double term(std::size_t k, double xk, double xk1) const {
        const double mu = grid[k + 1] - grid[k];
        return mu * lagrangian(grid[k], xk1, (xk1 - xk) / mu);
    }

    std::vector<double> full_values(const std::vector<double>& free_values) const {
        std::vector<double> x;
        x.reserve(grid.size());
        x.push_back(alpha);
        x.insert(x.end(), free_values.begin(), free_values.end());
        x.push_back(beta);
        return x;
    }

    double objective(const std::vector<double>& free_values) const {
        if (free_values.size() != free_count())
            throw error("discretized objective: wrong number of free values");
        const std::vector<double> x = full_values(free_values);
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < x.size(); ++k) sum += term(k, x[k], x[k + 1]);
        return sum;
    }
};

/// Purely scattered scales pass through unchanged; each dense segment is
/// replaced by a uniform grid of 2^refine * 64 steps.
inline DiscretizedProblem discretize(const VariationalProblem& p, int refine = 0) {
    if (refine < 0 || refine > 20) throw error("discretize: refine must be in [0, 20]");
    DiscretizedProblem dp;
    dp.alpha = p.alpha();
    dp.beta = p.beta();
    dp.lagrangian = p.lagrangian();
    for (const auto& c : p.scale().components()) {
        if (c.is_point()) {
            dp.grid.push_back(c.lo);
            continue;
        }
        const std::size_t steps = std::size_t{64} << refine;
        for (std::size_t j = 0; j < steps; ++j)
            dp.grid.push_back(c.lo + static_cast<double>(j) * (c.hi - c.lo) / steps);
        dp.grid.push_back(c.hi);
    }
    return dp;
}

struct OracleSolution {
    std::vector<double> values; // full grid values, endpoints included
    double value = 0.0;
    bool converged = false;
    std::string method;
};

namespace detail {

inline std::vector<double> linear_interior(const DiscretizedProblem& dp) {
    const double a = dp.grid.front(), b = dp.grid.back();
    const double slope = (dp.beta - dp.alpha) / (b - a);
    std::vector<double> x(dp.free_count());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = dp.alpha + slope * (dp.grid[i + 1] - a);
    return x;
}

/// Second differences of the objective along random directions must be
/// shift-independent for a quadratic; cubic and higher terms move them.
inline bool is_quadratic_objective(const DiscretizedProblem& dp) {
    const std::size_t n = dp.free_count();
    if (n == 0) return true;
    const std::vector<double> base = linear_interior(dp);
    Rng rng(0x7c3aa8f219e5d04bULL);
    const double h = 2.0;
    std::vector<double> x(n);
    for (int dir = 0; dir < 4; ++dir) {
        const std::vector<double> u = rng.symmetric_vec(n);
        const auto f = [&](double s) {
            for (std::size_t i = 0; i < n; ++i) x[i] = base[i] + s * u[i];
            return dp.objective(x);
        };
        const double f_m2 = f(-2 * h), f_m1 = f(-h), f_0 = f(0.0), f_p1 = f(h), f_p2 = f(2 * h);
        const double d2_lo = f_m2 - 2 * f_m1 + f_0;
        const double d2_mid = f_m1 - 2 * f_0 + f_p1;
        const double d2_hi = f_0 - 2 * f_p1 + f_p2;
        const double tol = 1e-10 * std::max({1.0, std::abs(d2_mid), std::abs(f_0)});
        if (std::abs(d2_lo - d2_mid) > tol || std::abs(d2_hi - d2_mid) > tol) return false;
    }
    return true;
}

/// Symmetric tridiagonal solve (Thomas). Pivots must stay positive: the
/// stationary point is only a minimum for a positive definite system.
inline std::vector<double> solve_tridiag_spd(std::vector<double> diag, std::vector<double> off,
                                             std::vector<double> rhs) {
    const std::size_t n = diag.size();
    double scale = 1.0;
    for (double v : diag) scale = std::max(scale, std::abs(v));
    for (double v : off) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double w = off[i - 1] / diag[i - 1];
            diag[i] -= w * off[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        if (!(diag[i] > 1e-12 * scale))
            throw degeneracy_error(
                "stationarity system is singular or not positive definite");
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - off[i] * x[i + 1]) / diag[i];
    return x;
}

} // namespace detail

/// Direct solve for quadratic objectives. Each summand couples only
/// (x_k, x_{k+1}), so the Hessian is symmetric tridiagonal; entries and the
/// gradient are assembled per term by exact-for-quadratics central
/// differences (step 2 around the linear interpolant), then one Newton step
/// from the interpolant lands on the minimizer.
inline OracleSolution solve_quadratic(const DiscretizedProblem& dp) {
    if (!detail::is_quadratic_objective(dp))
        throw wrong_oracle_error("objective is not quadratic in the free values; "
                                 "use solve_generic");
    const std::size_t n = dp.free_count();
    if (n == 0) return {dp.full_values({}), dp.objective({}), true, "quadratic"};

    const std::vector<double> z = dp.full_values(detail::linear_interior(dp));
    const std::size_t terms = dp.grid.size() - 1;
    std::vector<double> hd(n, 0.0), he(n > 1 ? n - 1 : 0, 0.0), g(n, 0.0);
    const double h = 2.0;
    for (std::size_t k = 0; k < terms; ++k) {
        const double a0 = z[k], b0 = z[k + 1];
        const bool left_free = k >= 1;
        const bool right_free = k + 1 <= n; // full index k+1 is free while <= n
        const double f00 = dp.term(k, a0, b0);
        if (left_free) {
            const double fp = dp.term(k, a0 + h, b0), fm = dp.term(k, a0 - h, b0);
            g[k - 1] += (fp - fm) / (2 * h);
            hd[k - 1] += (fp - 2 * f00 + fm) / (h * h);
        }
        if (right_free) {
            const double fp = dp.term(k, a0, b0 + h), fm = dp.term(k, a0, b0 - h);
            g[k] += (fp - fm) / (2 * h);
            hd[k] += (fp - 2 * f00 + fm) / (h * h);
        }
        if (left_free && right_free) {
            const double fpp = dp.term(k, a0 + h, b0 + h), fpm = dp.term(k, a0 + h, b0 - h);
            const double fmp = dp.term(k, a0 - h, b0 + h), fmm = dp.term(k, a0 - h, b0 - h);
            he[k - 1] += (fpp - fpm - fmp + fmm) / (4 * h * h);
        }
    }
    for (double& v : g) v = -v;
    const std::vector<double> step = detail::solve_tridiag_spd(hd, he, g);
    std::vector<double> xfree(n);
    for (std::size_t i = 0; i < n; ++i) xfree[i] = z[i + 1] + step[i];
    return {dp.full_values(xfree), dp.objective(xfree), true, "quadratic"};
}

namespace detail {

template <typename F>
double golden_min(F&& psi, double x0) {
    constexpr double gr = 0.6180339887498949;
    double radius = 1.0;
    for (int expand = 0; expand < 60; ++expand) {
        double lo = x0 - radius, hi = x0 + radius;
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = psi(c), fd = psi(d);
        for (int it = 0; it < 72; ++it) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = psi(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = psi(d);
            }
        }
        const double xm = 0.5 * (lo + hi);
        if (xm > x0 - 0.98 * radius && xm < x0 + 0.98 * radius) return xm;
        x0 = xm;       // minimum hugs the bracket edge: recenter and widen
        radius *= 4.0;
    }
    return x0;
}

} // namespace detail

/// Derivative-free fallback: cyclic coordinate descent, each coordinate
/// minimized by golden-section over the two objective terms it touches.
/// Restart 0 starts from the linear interpolant, the rest from seeded
/// perturbations of it; restarts run concurrently and the best wins.
inline OracleSolution solve_generic(const DiscretizedProblem& dp, int restarts,
                                    std::uint64_t seed) {
    if (restarts < 1) throw error("solve_generic: need at least one restart");
    const std::size_t n = dp.free_count();
    if (n == 0) return {dp.full_values({}), dp.objective({}), true, "generic"};

    const auto run_one = [&dp, n](std::vector<double> x) {
        double fcur = dp.objective(x);
        bool converged = false;
        for (int sweep = 0; sweep < 200 && !converged; ++sweep) {
            for (std::size_t i = 0; i < n; ++i) {
                const double left = i == 0 ? dp.alpha : x[i - 1];
                const double right = i == n - 1 ? dp.beta : x[i + 1];
                const auto psi = [&](double v) {
                    return dp.term(i, left, v) + dp.term(i + 1, v, right);
                };
                const double cand = detail::golden_min(psi, x[i]);
                if (psi(cand) < psi(x[i])) x[i] = cand;
            }
            const double fnew = dp.objective(x);
            converged = fcur - fnew < 1e-10 * std::max(1.0, std::abs(fnew));
            fcur = fnew;
        }
        return std::pair<std::vector<double>, std::pair<double, bool>>{
            std::move(x), {fcur, converged}};
    };

    std::vector<std::future<std::pair<std::vector<double>, std::pair<double, bool>>>> runs;
    runs.reserve(static_cast<std::size_t>(restarts));
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> start = detail::linear_interior(dp);
        if (r > 0) {
            detail::Rng rng(seed + static_cast<std::uint64_t>(r));
            for (double& v : start) v += rng.symmetric();
        }
        runs.push_back(std::async(std::launch::async, run_one, std::move(start)));
    }

    OracleSolution best;
    best.method = "generic";
    best.value = std::numeric_limits<double>::infinity();
    for (auto& fut : runs) {
        auto [x, vc] = fut.get();
        if (vc.first < best.value) {
            best.value = vc.first;
            best.converged = vc.second;
            best.values = dp.full_values(x);
        }
    }
    return best;
}

} // namespace tsl
