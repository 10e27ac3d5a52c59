// Acceptance gate: one line per criterion, binary exit status for the lot.
// Each criterion is self-contained and states its tolerance next to the
// measured number, so a failure is diagnosable from the output alone.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "tsl/cli.hpp"

using namespace tsl;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<TimeScale> closed_form_scales() {
    return {TimeScale::integers(0, 2),
            TimeScale::integers(0, 10),
            TimeScale::integers(0, 100),
            TimeScale::h_step(0.0, 2.0, 0.25),
            TimeScale::q_scale(2.0, 0, 6),
            TimeScale({point_component(0.0), interval_component(1.0, 2.0)})};
}

// Criterion 1: the transported closed-form minimizer agrees with the
// discretized quadratic oracle pointwise and in value, within 1e-9, on all
// bundled scales, in under 5 seconds.
Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_pw = 0.0, worst_val = 0.0;
    for (const TimeScale& ts : closed_form_scales()) {
        const VariationalProblem p =
            make_linear_shift_problem(ts, ts.min_value(), ts.max_value(), 0.0, 1.0);
        const LeitmannPair pair = linear_shift_case(p);
        const Trajectory xstar = transport_minimizer(
            pair, Trajectory::from_rule(p.scale(), [](double) { return 0.0; }));
        const DiscretizedProblem dp = discretize(p);
        const OracleSolution sol = solve_quadratic(dp);
        for (std::size_t i = 0; i < dp.grid.size(); ++i)
            worst_pw = std::max(worst_pw, std::abs(xstar(dp.grid[i]) - sol.values[i]));
        worst_val =
            std::max(worst_val, std::abs(evaluate_functional(p, xstar) - sol.value));
    }
    const double dt = seconds_since(t0);
    return {worst_pw <= 1e-9 && worst_val <= 1e-9 && dt < 5.0,
            fmt("pointwise %.3g (tol 1e-9), value %.3g (tol 1e-9), %.2f s (limit 5 s)",
                worst_pw, worst_val, dt)};
}

struct LemmaRun {
    bool dense = false;
    VerificationReport rep;
    double gap_ref = 0.0;
};

// One hundred random admissible trajectories per bundled scale, shared by
// criteria 2 and 3 (the residual claim and the constant-gap claim audit the
// same experiments).
const std::vector<LemmaRun>& lemma_runs() {
    static const std::vector<LemmaRun> runs = [] {
        std::vector<LemmaRun> out;
        for (const TimeScale& ts :
             {TimeScale::integers(0, 10), TimeScale::h_step(0.0, 2.0, 0.25),
              TimeScale::q_scale(2.0, 0, 6), TimeScale::interval(0.0, 1.0),
              TimeScale({point_component(0.0), interval_component(1.0, 2.0)})}) {
            const VariationalProblem p =
                make_linear_shift_problem(ts, ts.min_value(), ts.max_value(), 0.0, 1.0);
            const LeitmannPair pair = linear_shift_case(p);
            LemmaRun run;
            run.dense = !ts.dense_segments().empty();
            run.rep = verify_lemma(pair, 100, 20250815);
            const Transformation& tr = pair.transform();
            run.gap_ref = tr.gauge(p.b(), pair.transformed().beta()) -
                          tr.gauge(p.a(), pair.transformed().alpha());
            out.push_back(std::move(run));
        }
        return out;
    }();
    return runs;
}

// Criterion 2: identity residual over all scattered points and 64-point
// dense samples, 100 random trajectories: <= 1e-12 scattered, <= 1e-8 dense.
Outcome criterion2() {
    double worst_scattered = 0.0, worst_dense = 0.0;
    for (const LemmaRun& r : lemma_runs())
        (r.dense ? worst_dense : worst_scattered) =
            std::max(r.dense ? worst_dense : worst_scattered, r.rep.max_abs_residual);
    return {worst_scattered <= 1e-12 && worst_dense <= 1e-8,
            fmt("residual %.3g scattered (tol 1e-12), %.3g dense (tol 1e-8)",
                worst_scattered, worst_dense)};
}

// Criterion 3: the functional gap is one constant, equal to the gauge
// difference at the fixed endpoints, within 1e-8.
Outcome criterion3() {
    double worst_spread = 0.0, worst_ref = 0.0;
    for (const LemmaRun& r : lemma_runs()) {
        worst_spread = std::max(worst_spread, r.rep.gap_constant_spread);
        worst_ref = std::max(worst_ref, std::abs(r.rep.functional_gap - r.gap_ref));
    }
    return {worst_spread <= 1e-8 && worst_ref <= 1e-8,
            fmt("gap spread %.3g, |gap - G(b)-G(a)| %.3g (tol 1e-8)", worst_spread,
                worst_ref)};
}

// Criterion 4: s* = -1 exactly, minimizer (u1=0, u2=1), cost and simulated
// endpoints on target within 1e-12 (scattered) / 1e-6 (dense).
Outcome criterion4() {
    double worst = 0.0;
    bool exact_ok = true;
    for (const TimeScale& ts :
         {TimeScale::h_step(0.0, 1.0, 0.1), TimeScale::h_step(0.0, 1.0, 0.5),
          TimeScale::integers(0, 1), TimeScale::interval(0.0, 1.0),
          TimeScale({point_component(0.0), interval_component(0.5, 1.0)})}) {
        const ControlProblem p = make_control_problem(ts);
        const bool dense = !ts.dense_segments().empty();
        const double tol = dense ? 1e-6 : 1e-12;
        const InvarianceSolution sol = solve_by_invariance(p);
        exact_ok = exact_ok && sol.s_star == -1.0;
        for (double t : control_check_points(ts))
            exact_ok =
                exact_ok && sol.minimizer.u1(t) == 0.0 && sol.minimizer.u2(t) == 1.0;
        const ControlTrajectories x = simulate(p, sol.minimizer);
        const double err = std::max({std::abs(cost(p, sol.minimizer) - 1.0),
                                     std::abs(x.x1(1.0) - p.x1_end),
                                     std::abs(x.x2(1.0) - p.x2_end)});
        if (err > tol) exact_ok = false;
        worst = std::max(worst, err);
    }
    return {exact_ok,
            fmt("s* = -1 and (u1,u2) = (0,1) %s; worst cost/endpoint error %.3g",
                exact_ok ? "exact" : "VIOLATED", worst)};
}

// Criterion 5: for s in {-1,-0.5,0.5,1} and 100 random feasible controls per
// s, the cost gap equals s^2 + 2s within 1e-8 (1e-12 scattered-only).
Outcome criterion5() {
    double worst_scattered = 0.0, worst_dense = 0.0;
    const double s_grid[4] = {-1.0, -0.5, 0.5, 1.0};
    for (const TimeScale& ts :
         {TimeScale::h_step(0.0, 1.0, 0.1), TimeScale::interval(0.0, 1.0)}) {
        const ControlProblem p = make_control_problem(ts);
        const bool dense = !ts.dense_segments().empty();
        double& worst = dense ? worst_dense : worst_scattered;
        for (int si = 0; si < 4; ++si)
            for (int k = 0; k < 100; ++k) {
                const ControlPair u = random_feasible(
                    p, 31000u + static_cast<std::uint64_t>(si) * 100u +
                           static_cast<std::uint64_t>(k));
                const InvarianceReport rep = check_invariance(p, s_grid[si], u);
                worst = std::max(worst, std::abs(rep.cost_gap - rep.expected_gap));
            }
    }
    return {worst_scattered <= 1e-12 && worst_dense <= 1e-8,
            fmt("gap error %.3g scattered (tol 1e-12), %.3g dense (tol 1e-8)",
                worst_scattered, worst_dense)};
}

// Criterion 6: 1000 random admissible trajectories never beat the
// transported minimizer, 1000 repaired controls never beat cost 1; under 30 s.
Outcome criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    int violations = 0;
    double closest = std::numeric_limits<double>::infinity();
    const double mags[3] = {0.1, 1.0, 10.0};
    int seed = 0;
    for (const TimeScale& ts :
         {TimeScale({point_component(0.0), interval_component(1.0, 2.0)}),
          TimeScale::integers(0, 10)}) {
        const VariationalProblem p =
            make_linear_shift_problem(ts, ts.min_value(), ts.max_value(), 0.0, 1.0);
        const Trajectory xstar = transport_minimizer(
            linear_shift_case(p),
            Trajectory::from_rule(p.scale(), [](double) { return 0.0; }));
        const double vstar = evaluate_functional(p, xstar);
        for (int k = 0; k < 500; ++k, ++seed) {
            const double v = evaluate_functional(
                p, random_admissible(p, 40000u + static_cast<std::uint64_t>(seed),
                                     mags[k % 3]));
            closest = std::min(closest, v - vstar);
            if (v < vstar - 1e-9) ++violations;
        }
    }
    double closest_cost = std::numeric_limits<double>::infinity();
    int cseed = 0;
    for (const auto& [ts, trials] :
         std::vector<std::pair<TimeScale, int>>{{TimeScale::h_step(0.0, 1.0, 0.1), 800},
                                                {TimeScale::interval(0.0, 1.0), 200}}) {
        const ControlProblem p = make_control_problem(ts);
        for (int k = 0; k < trials; ++k, ++cseed) {
            const double c =
                cost(p, random_feasible(p, 50000u + static_cast<std::uint64_t>(cseed)));
            closest_cost = std::min(closest_cost, c - 1.0);
            if (c < 1.0 - 1e-9) ++violations;
        }
    }
    const double dt = seconds_since(t0);
    return {violations == 0 && dt < 30.0,
            fmt("%d violations; closest margins %.3g (functional), %.3g (cost); %.2f s "
                "(limit 30 s)",
                violations, closest, closest_cost, dt)};
}

// Criterion 7: calculus-law and closed-form-specialization suites on the
// five bundled scales (the specializations must hold bit for bit).
Outcome criterion7() {
    const detail::SuiteResult ops = detail::suite_operator_axioms();
    const detail::SuiteResult laws = detail::suite_calculus();
    const detail::SuiteResult special = detail::suite_specializations();
    return {ops.rep.pass && laws.rep.pass && special.rep.pass,
            fmt("operators %s, laws residual %.3g (pass %s), specializations residual %.17g",
                ops.rep.pass ? "pass" : "FAIL", laws.rep.max_abs_residual,
                laws.rep.pass ? "yes" : "NO", special.rep.max_abs_residual)};
}

// Criterion 8: dropping the c*t^2 gauge term must flip verify_lemma to fail
// and `verify --fault drop-gauge-term` to exit 2; the clean runs must pass.
Outcome criterion8() {
    const TimeScale ts = TimeScale::integers(0, 2);
    const VariationalProblem p = make_linear_shift_problem(ts, 0.0, 2.0, 0.0, 1.0);
    const VerificationReport clean = verify_lemma(make_shift_pair(p, ""), 20, 7);
    const VerificationReport bad =
        verify_lemma(make_shift_pair(p, "drop-gauge-term"), 20, 7);

    std::ostringstream sink;
    const int fault_exit =
        run_cli({"verify", "--trials", "2", "--fault", "drop-gauge-term"}, sink, sink);
    const int clean_exit = run_cli({"verify", "--trials", "2"}, sink, sink);
    return {clean.pass && !bad.pass && fault_exit == 2 && clean_exit == 0,
            fmt("clean verify_lemma %s, corrupted %s (residual %.3g); verify exits %d/%d "
                "(want 0/2)",
                clean.pass ? "passes" : "FAILS", bad.pass ? "PASSES" : "fails",
                bad.max_abs_residual, clean_exit, fault_exit)};
}

} // namespace

int main() {
    const struct {
        const char* name;
        Outcome (*run)();
    } table[] = {
        {"closed-form minimizer vs oracle", criterion1},
        {"identity residual", criterion2},
        {"constant functional gap", criterion3},
        {"control minimum", criterion4},
        {"invariance cost gap", criterion5},
        {"dominance sampling", criterion6},
        {"calculus layer", criterion7},
        {"fault injection", criterion8},
    };
    int failures = 0;
    int index = 1;
    for (const auto& entry : table) {
        Outcome out;
        try {
            out = entry.run();
        } catch (const std::exception& e) {
            out = {false, std::string("unexpected exception: ") + e.what()};
        }
        std::printf("criterion %d (%s): %s — %s\n", index, entry.name,
                    out.pass ? "PASS" : "FAIL", out.detail.c_str());
        if (!out.pass) ++failures;
        ++index;
    }
    if (failures == 0) {
        std::printf("acceptance: all %d criteria pass\n",
                    static_cast<int>(std::size(table)));
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
