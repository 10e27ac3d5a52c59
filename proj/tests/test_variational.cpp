#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tsl/variational.hpp"

using namespace tsl;

namespace {

Lagrangian shift_lagrangian() {
    return {[](double t, double y, double v) { return v * v + y + t * v; },
            [](double, double, double) { return 1.0; },
            [](double t, double, double v) { return 2.0 * v + t; }};
}

} // namespace

TEST_CASE("functional of the identity trajectory is scale independent") {
    // With L = v^2 + y + t*v and x(t) = t the value collapses to
    // (b - a) + (b^2 - a^2) = 6 on every scale spanning [0, 2].
    const std::vector<TimeScale> scales = {
        TimeScale::integers(0, 2), TimeScale::h_step(0.0, 2.0, 0.25),
        TimeScale::interval(0.0, 2.0),
        TimeScale({point_component(0.0), interval_component(1.0, 2.0)})};
    for (const auto& ts : scales) {
        const VariationalProblem p(ts, 0.0, 2.0, 0.0, 2.0, shift_lagrangian());
        const Trajectory x = Trajectory::from_rule(ts, [](double t) { return t; });
        REQUIRE(std::abs(evaluate_functional(p, x) - 6.0) < 1e-9);
    }
}

TEST_CASE("functional on the integers is the exact finite sum") {
    const TimeScale z = TimeScale::integers(0, 2);
    const VariationalProblem p(z, 0.0, 2.0, 0.0, 2.0, shift_lagrangian());
    const Trajectory x = Trajectory::from_rule(z, [](double t) { return t; });
    // terms by hand: t=0 gives 1+1+0, t=1 gives 1+2+1
    REQUIRE(evaluate_functional(p, x) == 6.0);
}

TEST_CASE("trajectory evaluation, corners and mapping") {
    const TimeScale m({point_component(0.0), interval_component(1.0, 2.0)});
    const Trajectory x = Trajectory::from_rule(m, [](double t) { return t * t; });
    REQUIRE(x(0.0) == 0.0);
    REQUIRE(x(1.5) == 2.25);
    REQUIRE(x(2.0) == 4.0);

    const Trajectory y = x.map_values([](double t, double v) { return v + t; });
    REQUIRE(y(0.0) == 0.0);
    REQUIRE(y(1.5) == 2.25 + 1.5);

    const Trajectory lin = Trajectory::linear(m, 1.0, 3.0);
    REQUIRE(lin(0.0) == 1.0);
    REQUIRE(lin(2.0) == 3.0);
    REQUIRE(std::abs(lin(1.5) - 2.5) < 1e-15);
}

TEST_CASE("problem construction validates the window") {
    const TimeScale z = TimeScale::integers(0, 5);
    REQUIRE_THROWS_AS(VariationalProblem(z, 3.0, 1.0, 0.0, 1.0, shift_lagrangian()), error);
    REQUIRE_THROWS_AS(VariationalProblem(z, 0.5, 2.0, 0.0, 1.0, shift_lagrangian()),
                      membership_error);
    // restriction keeps only the window
    const VariationalProblem p(z, 1.0, 3.0, 0.0, 1.0, shift_lagrangian());
    REQUIRE(p.scale().min_value() == 1.0);
    REQUIRE(p.scale().max_value() == 3.0);
}

TEST_CASE("admissibility check reports endpoint errors") {
    const TimeScale z = TimeScale::integers(0, 2);
    const VariationalProblem p(z, 0.0, 2.0, 0.0, 2.0, shift_lagrangian());
    REQUIRE(check_admissible(p, Trajectory::linear(z, 0.0, 2.0)).admissible);

    const AdmissibilityReport bad =
        check_admissible(p, Trajectory::from_rule(z, [](double t) { return t + 0.5; }));
    REQUIRE_FALSE(bad.admissible);
    REQUIRE(bad.endpoint_error_a == 0.5);
    REQUIRE_FALSE(bad.violations.empty());
}

TEST_CASE("random admissible trajectories pin the endpoints and are deterministic") {
    const TimeScale m({point_component(0.0), interval_component(1.0, 2.0)});
    const VariationalProblem p(m, 0.0, 2.0, -1.0, 3.0, shift_lagrangian());
    for (std::uint64_t seed : {1ull, 7ull, 99ull}) {
        const Trajectory x = random_admissible(p, seed, 1.0);
        REQUIRE(std::abs(x(0.0) - (-1.0)) < 1e-12);
        REQUIRE(std::abs(x(2.0) - 3.0) < 1e-12);
        REQUIRE(check_admissible(p, x).admissible);
    }
    const Trajectory a = random_admissible(p, 42, 1.0);
    const Trajectory b = random_admissible(p, 42, 1.0);
    const Trajectory c = random_admissible(p, 43, 1.0);
    bool differs = false;
    for (double t : {0.0, 1.2, 1.5, 1.9}) {
        REQUIRE(a(t) == b(t));
        differs = differs || a(t) != c(t);
    }
    REQUIRE(differs);
}

TEST_CASE("zero-magnitude noise degenerates to the linear interpolant") {
    const TimeScale z = TimeScale::integers(0, 4);
    const VariationalProblem p(z, 0.0, 4.0, 1.0, 2.0, shift_lagrangian());
    const Trajectory x = random_admissible(p, 5, 0.0);
    const Trajectory lin = Trajectory::linear(z, 1.0, 2.0);
    for (double t : {0.0, 1.0, 2.0, 3.0, 4.0}) REQUIRE(std::abs(x(t) - lin(t)) < 1e-14);
}

TEST_CASE("functional of random trajectories matches the hand-assembled sum") {
    const TimeScale z = TimeScale::integers(0, 4);
    const VariationalProblem p(z, 0.0, 4.0, 0.0, 1.0, shift_lagrangian());
    const Trajectory x = random_admissible(p, 11, 2.0);
    double hand = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double t = k;
        const double v = x(t + 1.0) - x(t);
        hand += v * v + x(t + 1.0) + t * v;
    }
    REQUIRE(std::abs(evaluate_functional(p, x) - hand) < 1e-12);
}

TEST_CASE("lagrangian partials fall back to finite differences") {
    Lagrangian L{[](double t, double y, double v) { return v * v + y * y * t + v * y; }};
    REQUIRE(std::abs(L.partial_y(2.0, 1.5, 0.5) - (2.0 * 1.5 * 2.0 + 0.5)) < 1e-8);
    REQUIRE(std::abs(L.partial_v(2.0, 1.5, 0.5) - (2.0 * 0.5 + 1.5)) < 1e-8);
    const Lagrangian S = shift_lagrangian();
    REQUIRE(S.partial_y(1.0, 2.0, 3.0) == 1.0); // exact partial wins when provided
}
