#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tsl/delta.hpp"

using namespace tsl;

namespace {
const auto cubic = [](double t) { return t * t * t - 2.0 * t; };
}

TEST_CASE("delta derivative on the integers is the forward difference, bit for bit") {
    const TimeScale z = TimeScale::integers(0, 10);
    const ScaleFunction f{cubic, {}};
    for (int k = 0; k < 10; ++k) {
        const double t = k;
        REQUIRE(delta_derivative(z, f, t) == cubic(t + 1.0) - cubic(t));
    }
    REQUIRE_THROWS_AS(delta_derivative(z, f, 10.0), kappa_domain_error);
}

TEST_CASE("delta derivative on hZ with dyadic h matches the scaled difference exactly") {
    const double h = 0.25;
    const TimeScale hz = TimeScale::h_step(0.0, 2.0, h);
    const ScaleFunction f{cubic, {}};
    for (int k = 0; k < 8; ++k) {
        const double t = k * h;
        REQUIRE(delta_derivative(hz, f, t) == (cubic(t + h) - cubic(t)) / h);
    }
}

TEST_CASE("delta derivative on a continuous interval approximates the classical one") {
    const TimeScale c = TimeScale::interval(0.0, 1.0);
    const ScaleFunction f{[](double t) { return std::exp(t); }, {}};
    for (double t : {0.2, 0.5, 0.8})
        REQUIRE(std::abs(delta_derivative(c, f, t) - std::exp(t)) < 1e-8);
    // one-sided stencils at the segment boundary
    REQUIRE(std::abs(delta_derivative(c, f, 0.0) - 1.0) < 1e-7);
    REQUIRE(std::abs(delta_derivative(c, f, 1.0) - std::exp(1.0)) < 1e-7);
}

TEST_CASE("delta derivative respects declared corners of a piecewise rule") {
    const TimeScale c = TimeScale::interval(0.0, 1.0);
    const ScaleFunction f{[](double t) { return std::abs(t - 0.5); }, {0.5}};
    REQUIRE(std::abs(delta_derivative(c, f, 0.3) - (-1.0)) < 1e-7);
    REQUIRE(std::abs(delta_derivative(c, f, 0.7) - 1.0) < 1e-7);
    REQUIRE(std::abs(delta_derivative(c, f, 0.499) - (-1.0)) < 1e-6);
}

TEST_CASE("mixed scale: quotient at the gap, classical derivative inside the segment") {
    const TimeScale m({point_component(0.0), interval_component(1.0, 2.0)});
    const ScaleFunction f{[](double t) { return t * t; }, {}};
    REQUIRE(delta_derivative(m, f, 0.0) == 1.0); // (1^2 - 0^2) / 1
    REQUIRE(std::abs(delta_derivative(m, f, 1.0) - 2.0) < 1e-7);
    REQUIRE(std::abs(delta_derivative(m, f, 1.5) - 3.0) < 1e-8);
    REQUIRE(std::abs(delta_derivative(m, f, 2.0) - 4.0) < 1e-7);
}

TEST_CASE("forward quotient converges to the classical derivative as h shrinks") {
    const ScaleFunction f{[](double t) { return std::exp(t); }, {}};
    double prev = -1.0;
    for (double h : {0.1, 0.05, 0.025}) {
        const TimeScale hz = TimeScale::h_step(0.0, 1.0, h);
        const double err = std::abs(delta_derivative(hz, f, 0.5) - std::exp(0.5));
        if (prev >= 0.0) REQUIRE(err < 0.65 * prev); // first-order decay
        prev = err;
    }
}

TEST_CASE("delta integral on scattered scales is the exact weighted sum") {
    const TimeScale z = TimeScale::integers(0, 3);
    const ScaleFunction f{cubic, {}};
    REQUIRE(delta_integral(z, f, 0.0, 3.0) == cubic(0.0) + cubic(1.0) + cubic(2.0));

    const double h = 0.25;
    const TimeScale hz = TimeScale::h_step(0.0, 2.0, h);
    double hand = 0.0;
    for (int k = 0; k < 8; ++k) hand += h * cubic(k * h);
    REQUIRE(delta_integral(hz, f, 0.0, 2.0) == hand);
}

TEST_CASE("delta integral over dense segments uses quadrature") {
    const TimeScale c = TimeScale::interval(0.0, 1.0);
    REQUIRE(std::abs(delta_integral(c, ScaleFunction{[](double t) { return t * t; }, {}}, 0.0,
                                    1.0) -
                     1.0 / 3.0) < 1e-10);
    REQUIRE(std::abs(delta_integral(c, ScaleFunction{[](double t) { return std::exp(t); }, {}},
                                    0.0, 1.0) -
                     (std::exp(1.0) - 1.0)) < 1e-10);
}

TEST_CASE("delta integral on the mixed scale adds the gap weight to the segment") {
    const TimeScale m({point_component(0.0), interval_component(1.0, 2.0)});
    const ScaleFunction one{[](double) { return 1.0; }, {}};
    REQUIRE(std::abs(delta_integral(m, one, 0.0, 2.0) - 2.0) < 1e-13);
    const ScaleFunction t_id{[](double t) { return t; }, {}};
    // mu(0)*0 + integral of t over [1,2] = 1.5
    REQUIRE(std::abs(delta_integral(m, t_id, 0.0, 2.0) - 1.5) < 1e-12);
}

TEST_CASE("delta integral bookkeeping: orientation, empty range, membership") {
    const TimeScale z = TimeScale::integers(0, 5);
    const ScaleFunction f{cubic, {}};
    REQUIRE(delta_integral(z, f, 5.0, 1.0) == -delta_integral(z, f, 1.0, 5.0));
    REQUIRE(delta_integral(z, f, 2.0, 2.0) == 0.0);
    REQUIRE_THROWS_AS(delta_integral(z, f, 0.5, 2.0), membership_error);
}

TEST_CASE("integral additivity across a member midpoint") {
    const TimeScale m({point_component(0.0), interval_component(1.0, 2.0)});
    const ScaleFunction f{[](double t) { return std::cos(t); }, {}};
    const double whole = delta_integral(m, f, 0.0, 2.0);
    const double split = delta_integral(m, f, 0.0, 1.5) + delta_integral(m, f, 1.5, 2.0);
    REQUIRE(std::abs(whole - split) < 1e-10);
}

TEST_CASE("left Riemann sums over hZ converge to the continuous integral") {
    const ScaleFunction f{[](double t) { return std::exp(t); }, {}};
    const double exact = std::exp(1.0) - 1.0;
    double prev = -1.0;
    for (double h : {0.1, 0.05, 0.025}) {
        const TimeScale hz = TimeScale::h_step(0.0, 1.0, h);
        const double err = std::abs(delta_integral(hz, f, 0.0, 1.0) - exact);
        if (prev >= 0.0) REQUIRE(err < 0.65 * prev);
        prev = err;
    }
}

TEST_CASE("a genuinely discontinuous integrand raises quadrature_error") {
    const TimeScale c = TimeScale::interval(0.0, 1.0);
    const ScaleFunction step{[](double t) { return t < 0.437 ? 0.0 : 1.0; }, {}};
    REQUIRE_THROWS_AS(delta_integral(c, step, 0.0, 1.0), quadrature_error);
}

TEST_CASE("sample_points covers scattered points and dense interiors inside T^kappa") {
    const TimeScale m({point_component(0.0), interval_component(1.0, 2.0)});
    const auto pts = sample_points(m);
    REQUIRE(pts.size() == 65); // the isolated point + 64 interior samples
    for (double t : pts) REQUIRE(m.in_kappa(t));

    const TimeScale tail({interval_component(0.0, 1.0), point_component(2.0)});
    const auto pts2 = sample_points(tail);
    REQUIRE(pts2.size() == 65); // 64 interior + the right-scattered segment end
    REQUIRE(pts2.back() == 1.0);
    for (double t : pts2) REQUIRE(tail.in_kappa(t));
}
