#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsl/control.hpp"
#include "tsl/io.hpp"
#include "tsl/leitmann.hpp"
#include "tsl/oracle.hpp"

namespace tsl {

struct RunConfig {
    std::string subcommand;
    std::string scale; // shorthand; empty picks the subcommand default
    std::optional<double> a;
    std::optional<double> b;
    double alpha = 0.0;
    double beta = 1.0;
    std::optional<double> tol_res;
    double tol_gap = 1e-8;
    int trials = 100;
    std::uint64_t seed = 42;
    std::string out;
    bool json = false;
    std::string fault;

    nlohmann::json to_json() const {
        nlohmann::json j{{"subcommand", subcommand}, {"scale", scale},
                         {"alpha", alpha},           {"beta", beta},
                         {"tol_gap", tol_gap},       {"trials", trials},
                         {"seed", seed},             {"out", out},
                         {"json", json},             {"fault", fault}};
        j["a"] = a ? nlohmann::json(*a) : nlohmann::json(nullptr);
        j["b"] = b ? nlohmann::json(*b) : nlohmann::json(nullptr);
        j["tol_res"] = tol_res ? nlohmann::json(*tol_res) : nlohmann::json(nullptr);
        return j;
    }

    static RunConfig from_json(const nlohmann::json& j) {
        if (!j.is_object()) throw parse_error("config: expected a JSON object");
        detail::reject_unknown(j,
                               {"subcommand", "scale", "a", "b", "alpha", "beta", "tol_res",
                                "tol_gap", "trials", "seed", "out", "json", "fault"},
                               "config");
        RunConfig c;
        try {
            if (j.contains("subcommand")) c.subcommand = j.at("subcommand").get<std::string>();
            if (j.contains("scale")) c.scale = j.at("scale").get<std::string>();
            if (j.contains("a") && !j.at("a").is_null()) c.a = j.at("a").get<double>();
            if (j.contains("b") && !j.at("b").is_null()) c.b = j.at("b").get<double>();
            if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
            if (j.contains("beta")) c.beta = j.at("beta").get<double>();
            if (j.contains("tol_res") && !j.at("tol_res").is_null())
                c.tol_res = j.at("tol_res").get<double>();
            if (j.contains("tol_gap")) c.tol_gap = j.at("tol_gap").get<double>();
            if (j.contains("trials")) c.trials = j.at("trials").get<int>();
            if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
            if (j.contains("out")) c.out = j.at("out").get<std::string>();
            if (j.contains("json")) c.json = j.at("json").get<bool>();
            if (j.contains("fault")) c.fault = j.at("fault").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw parse_error(std::string("config: ") + e.what());
        }
        return c;
    }
};

/// The built-in pair, optionally sabotaged for fail-path verification.
/// "drop-gauge-term" removes c*t^2 from the gauge, which breaks the identity
/// by exactly (c*t^2)^delta at every point where c != 0.
inline LeitmannPair make_shift_pair(const VariationalProblem& p, const std::string& fault) {
    LeitmannPair pair = linear_shift_case(p);
    if (fault.empty()) return pair;
    if (fault == "drop-gauge-term") {
        const double a = p.a(), b = p.b();
        const double c = (p.alpha() - p.beta()) / (a - b);
        const double d = (p.beta() * a - b * p.alpha()) / (a - b);
        Transformation tr = pair.transform();
        tr.gauge = [c, d](double t, double xt) {
            return 2.0 * c * xt + t * xt + (c * c + d) * t;
        };
        return LeitmannPair(pair.original(), pair.transformed(), std::move(tr));
    }
    throw parse_error("unknown fault \"" + fault + "\" (supported: drop-gauge-term)");
}

namespace detail {

inline std::filesystem::path resolve_out_dir(const RunConfig& cfg) {
    std::string dir = cfg.out;
    if (dir.empty()) {
        if (const char* env = std::getenv("TSL_DEFAULT_OUT")) dir = env;
        if (dir.empty()) dir = ".";
    }
    std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw error("cannot create output directory " + p.string() + ": " + ec.message());
    return p;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw error("cannot write " + path.string());
    f << text;
}

inline bool has_dense(const TimeScale& ts) {
    for (const auto& c : ts.components())
        if (c.is_interval()) return true;
    return false;
}

} // namespace detail

inline int cmd_example4(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::optional<VariationalProblem> problem;
    std::optional<LeitmannPair> pair;
    try {
        const TimeScale ts = cfg.scale.empty() ? TimeScale::integers(0, 2)
                                               : parse_scale_shorthand(cfg.scale);
        const double a = cfg.a.value_or(ts.min_value());
        const double b = cfg.b.value_or(ts.max_value());
        problem.emplace(make_linear_shift_problem(ts, a, b, cfg.alpha, cfg.beta));
        pair.emplace(make_shift_pair(*problem, cfg.fault));
    } catch (const error& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }

    nlohmann::json report;
    bool pass = true;
    try {
        const double tol_res = cfg.tol_res.value_or(default_tol_res(problem->scale()));
        const VerificationReport rep =
            verify_lemma(*pair, cfg.trials, cfg.seed, tol_res, cfg.tol_gap);
        pass = pass && rep.pass;

        const Trajectory trivial =
            Trajectory::from_rule(pair->transformed().scale(), [](double) { return 0.0; });
        const Trajectory minimizer = transport_minimizer(*pair, trivial);
        const double value = evaluate_functional(*problem, minimizer);

        const DiscretizedProblem dp = discretize(*problem, 0);
        OracleSolution oracle;
        try {
            oracle = solve_quadratic(dp);
        } catch (const wrong_oracle_error&) {
            oracle = solve_generic(dp, 4, cfg.seed);
        }
        double pointwise_gap = 0.0;
        for (std::size_t i = 0; i < dp.grid.size(); ++i)
            pointwise_gap = std::max(pointwise_gap,
                                     std::abs(minimizer(dp.grid[i]) - oracle.values[i]));
        const double value_gap = std::abs(value - oracle.value);
        const bool oracle_ok = pointwise_gap <= 1e-9 && value_gap <= 1e-9;
        pass = pass && oracle_ok;

        report = {{"problem",
                   {{"scale", scale_to_json(problem->scale())},
                    {"a", problem->a()},
                    {"b", problem->b()},
                    {"alpha", problem->alpha()},
                    {"beta", problem->beta()}}},
                  {"verification", verification_report_to_json(rep)},
                  {"oracle", oracle_to_json(oracle)},
                  {"minimizer",
                   {{"value", value},
                    {"oracle_value_gap", value_gap},
                    {"oracle_pointwise_gap", pointwise_gap}}},
                  {"pass", pass}};

        const auto dir = detail::resolve_out_dir(cfg);
        detail::write_text_file(dir / "report.json", report.dump(2) + "\n");
        std::ostringstream csv;
        write_trajectory_csv(csv, problem->scale(), minimizer);
        detail::write_text_file(dir / "minimizer.csv", csv.str());

        if (cfg.json) {
            out << report.dump(2) << "\n";
        } else {
            out << "lemma verification: " << (rep.pass ? "pass" : "FAIL")
                << " (max residual " << rep.max_abs_residual << " vs " << rep.tol_res
                << ", gap spread " << rep.gap_constant_spread << " vs " << rep.tol_gap << ")\n";
            out << "minimizer value: " << detail::format_g17(value) << "\n";
            out << "oracle agreement: " << (oracle_ok ? "pass" : "FAIL") << " (value gap "
                << value_gap << ", pointwise gap " << pointwise_gap << ")\n";
        }
    } catch (const error& e) {
        err << "verification error: " << e.what() << "\n";
        return 2;
    }
    return pass ? 0 : 2;
}

inline int cmd_control(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::optional<ControlProblem> problem;
    try {
        TimeScale ts = cfg.scale.empty() ? TimeScale::h_step(0.0, 1.0, 0.1)
                                         : parse_scale_shorthand(cfg.scale);
        problem.emplace(make_control_problem(ts));
    } catch (const error& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }
    const ControlProblem& p = *problem;
    const bool dense = detail::has_dense(p.ts);
    const double tol_value = cfg.tol_res.value_or(dense ? 1e-6 : 1e-12);
    const double tol_inv = dense ? 1e-8 : 1e-12;

    bool pass = true;
    try {
        const InvarianceSolution sol = solve_by_invariance(p);
        const ControlTrajectories sim = simulate(p, sol.minimizer);
        const FeasibilityReport feas = feasible(p, sol.minimizer, tol_value);
        const double evaluated_cost = cost(p, sol.minimizer);
        const bool cost_ok = std::abs(evaluated_cost - sol.min_cost) <= tol_value;
        pass = pass && feas.feasible && cost_ok;

        nlohmann::json invariance = nlohmann::json::array();
        for (double s : {-1.0, -0.5, 0.5, 1.0}) {
            InvarianceReport worst;
            bool grid_pass = true;
            for (int k = -1; k < 3; ++k) {
                const ControlPair u = k < 0
                                          ? sol.minimizer
                                          : random_feasible(p, cfg.seed + static_cast<std::uint64_t>(k));
                const InvarianceReport rep = check_invariance(p, s, u, tol_inv);
                grid_pass = grid_pass && rep.pass;
                if (std::abs(rep.cost_gap - rep.expected_gap) >=
                    std::abs(worst.cost_gap - worst.expected_gap))
                    worst = rep;
            }
            pass = pass && grid_pass;
            invariance.push_back({{"s", s},
                                  {"cost_gap", worst.cost_gap},
                                  {"expected_gap", worst.expected_gap},
                                  {"max_dynamics_residual", worst.max_dynamics_residual},
                                  {"pass", grid_pass}});
        }

        const nlohmann::json report = {
            {"problem",
             {{"scale", scale_to_json(p.ts)},
              {"x1_end", p.x1_end},
              {"x2_end", p.x2_end},
              {"box", {p.box_lo, p.box_hi}}}},
            {"s_star", sol.s_star},
            {"min_cost", sol.min_cost},
            {"evaluated_cost", evaluated_cost},
            {"endpoints",
             {{"x1", sim.x1(1.0)}, {"x2", sim.x2(1.0)},
              {"x1_error", feas.x1_end_error}, {"x2_error", feas.x2_end_error}}},
            {"feasible", feas.feasible},
            {"invariance", invariance},
            {"pass", pass}};

        const auto dir = detail::resolve_out_dir(cfg);
        detail::write_text_file(dir / "control_report.json", report.dump(2) + "\n");
        std::ostringstream csv;
        write_control_csv(csv, p.ts, sol.minimizer, sim);
        detail::write_text_file(dir / "control.csv", csv.str());

        if (cfg.json) {
            out << report.dump(2) << "\n";
        } else {
            out << "s* = " << detail::format_g17(sol.s_star)
                << ", minimal cost = " << detail::format_g17(sol.min_cost)
                << " (evaluated " << detail::format_g17(evaluated_cost) << ")\n";
            out << "endpoints: x1(1) = " << detail::format_g17(sim.x1(1.0))
                << ", x2(1) = " << detail::format_g17(sim.x2(1.0)) << "\n";
            out << "feasible: " << (feas.feasible ? "yes" : "NO")
                << ", invariance grid: " << (pass ? "pass" : "FAIL") << "\n";
        }
    } catch (const error& e) {
        err << "verification error: " << e.what() << "\n";
        return 2;
    }
    return pass ? 0 : 2;
}

namespace detail {

struct SuiteResult {
    std::string name;
    VerificationReport rep;
};

struct BundledScale {
    std::string name;
    TimeScale ts;
    double mid; // a member strictly between min and max, for additivity splits
};

inline std::vector<BundledScale> bundled_scales() {
    return {{"integers", TimeScale::integers(0, 10), 5.0},
            {"hstep", TimeScale::h_step(0.0, 2.0, 0.25), 1.0},
            {"interval", TimeScale::interval(0.0, 1.0), 0.5},
            {"mixed", TimeScale({point_component(0.0), interval_component(1.0, 2.0)}), 1.5},
            {"qscale", TimeScale::q_scale(2.0, 0, 6), 8.0}};
}

inline SuiteResult suite_operator_axioms() {
    SuiteResult res{"operator-axioms", {}};
    res.rep.tol_res = 0.0;
    res.rep.tol_gap = 0.0;
    double worst = 0.0;
    for (const auto& bs : bundled_scales()) {
        const TimeScale& ts = bs.ts;
        std::vector<double> pts = sample_points(ts, 16);
        pts.push_back(ts.min_value());
        pts.push_back(ts.max_value());
        for (double t : pts) {
            const double sig = ts.sigma(t), rho = ts.rho(t), mu = ts.graininess(t);
            worst = std::max({worst, t - sig, rho - t, -mu, std::abs(mu - (sig - t))});
            if (sig > t) worst = std::max(worst, std::abs(ts.rho(sig) - t));
            if (rho < t) worst = std::max(worst, std::abs(ts.sigma(rho) - t));
            const PointClass pc = ts.classify(t);
            if (pc.right_scattered != (sig > t) || pc.right_dense == pc.right_scattered)
                worst = std::max(worst, 1.0);
            if (!ts.contains(t)) worst = std::max(worst, 1.0);
            res.rep.points_checked += 6;
        }
        const auto& comps = ts.components();
        for (std::size_t i = 0; i + 1 < comps.size(); ++i) {
            if (ts.contains(0.5 * (comps[i].hi + comps[i + 1].lo)))
                worst = std::max(worst, 1.0);
            ++res.rep.points_checked;
        }
    }
    res.rep.max_abs_residual = worst;
    res.rep.pass = worst <= 0.0;
    return res;
}

inline SuiteResult suite_calculus() {
    SuiteResult res{"calculus-laws", {}};
    res.rep.tol_gap = 0.0;
    double worst_rel = 0.0; // residual scaled by the scale-kind tolerance
    double shown_tol = 0.0;
    for (const auto& bs : bundled_scales()) {
        const TimeScale& ts = bs.ts;
        const double tol = has_dense(ts) ? 1e-8 : 1e-12;
        shown_tol = std::max(shown_tol, tol);
        const double a = ts.min_value(), b = ts.max_value(), m = bs.mid;
        const ScaleFunction f{[](double t) { return t * t; }, {}};
        const ScaleFunction g{[](double t) { return t * t * t - 2.0 * t; }, {}};
        for (const ScaleFunction* fn : {&f, &g}) {
            const ScaleFunction deriv{
                [&ts, fn](double t) { return delta_derivative(ts, *fn, t); }, {}};
            const double ft = delta_integral(ts, deriv, a, b);
            worst_rel = std::max(worst_rel,
                                 std::abs(ft - ((*fn)(b) - (*fn)(a))) / tol);
            ++res.rep.points_checked;
        }
        const double whole = delta_integral(ts, f, a, b);
        const double split = delta_integral(ts, f, a, m) + delta_integral(ts, f, m, b);
        worst_rel = std::max(worst_rel, std::abs(whole - split) / tol);
        const ScaleFunction combo{[&f, &g](double t) { return 2.0 * f(t) - 3.0 * g(t); }, {}};
        const double lin = delta_integral(ts, combo, a, b);
        const double parts = 2.0 * delta_integral(ts, f, a, b) - 3.0 * delta_integral(ts, g, a, b);
        worst_rel = std::max(worst_rel, std::abs(lin - parts) / tol);
        res.rep.points_checked += 2;
    }
    res.rep.max_abs_residual = worst_rel * shown_tol;
    res.rep.tol_res = shown_tol;
    res.rep.pass = worst_rel <= 1.0;
    return res;
}

inline SuiteResult suite_specializations() {
    SuiteResult res{"closed-form-specializations", {}};
    res.rep.tol_res = 0.0; // these identities must hold bit for bit
    res.rep.tol_gap = 0.0;
    double worst = 0.0;
    const auto fv = [](double t) { return t * t * t - 2.0 * t; };
    {
        const TimeScale z = TimeScale::integers(0, 10);
        const ScaleFunction f{fv, {}};
        double hand = 0.0;
        for (int k = 0; k < 10; ++k) {
            const double t = static_cast<double>(k);
            worst = std::max(worst,
                             std::abs(delta_derivative(z, f, t) - (fv(t + 1.0) - fv(t))));
            hand += fv(t);
            ++res.rep.points_checked;
        }
        worst = std::max(worst, std::abs(delta_integral(z, f, 0.0, 10.0) - hand));
        ++res.rep.points_checked;
    }
    {
        const double h = 0.25;
        const TimeScale hz = TimeScale::h_step(0.0, 2.0, h);
        const ScaleFunction f{fv, {}};
        double hand = 0.0;
        for (int k = 0; k < 8; ++k) {
            const double t = static_cast<double>(k) * h;
            worst = std::max(worst, std::abs(delta_derivative(hz, f, t) -
                                             (fv(t + h) - fv(t)) / h));
            hand += h * fv(t);
            ++res.rep.points_checked;
        }
        worst = std::max(worst, std::abs(delta_integral(hz, f, 0.0, 2.0) - hand));
        ++res.rep.points_checked;
    }
    res.rep.max_abs_residual = worst;
    res.rep.pass = worst == 0.0;
    return res;
}

inline SuiteResult suite_lemma(const RunConfig& cfg) {
    SuiteResult res{"fundamental-lemma", {}};
    res.rep.pass = true;
    const int trials = std::max(1, std::min(cfg.trials, 100));
    for (const auto& bs : bundled_scales()) {
        const VariationalProblem p = make_linear_shift_problem(
            bs.ts, bs.ts.min_value(), bs.ts.max_value(), 0.0, 1.0);
        const LeitmannPair pair = make_shift_pair(p, cfg.fault);
        const double tol_res = cfg.tol_res.value_or(default_tol_res(p.scale()));
        const VerificationReport rep = verify_lemma(pair, trials, cfg.seed, tol_res, cfg.tol_gap);
        res.rep.pass = res.rep.pass && rep.pass;
        res.rep.points_checked += rep.points_checked;
        res.rep.max_abs_residual = std::max(res.rep.max_abs_residual, rep.max_abs_residual);
        res.rep.gap_constant_spread = std::max(res.rep.gap_constant_spread,
                                               rep.gap_constant_spread);
        res.rep.functional_gap = rep.functional_gap;
        res.rep.tol_res = std::max(res.rep.tol_res, rep.tol_res);
        res.rep.tol_gap = rep.tol_gap;
    }
    return res;
}

inline SuiteResult suite_control(const RunConfig& cfg) {
    SuiteResult res{"control-invariance", {}};
    res.rep.pass = true;
    const std::vector<std::pair<std::string, TimeScale>> scales = {
        {"hstep", TimeScale::h_step(0.0, 1.0, 0.1)},
        {"half", TimeScale::h_step(0.0, 1.0, 0.5)},
        {"interval", TimeScale::interval(0.0, 1.0)},
        {"mixed", TimeScale({point_component(0.0), interval_component(0.5, 1.0)})}};
    for (const auto& [name, ts] : scales) {
        const ControlProblem p = make_control_problem(ts);
        const bool dense = has_dense(ts);
        const double tol_value = dense ? 1e-6 : 1e-12;
        const double tol_inv = dense ? 1e-8 : 1e-12;
        res.rep.tol_res = std::max(res.rep.tol_res, tol_inv);
        const InvarianceSolution sol = solve_by_invariance(p);
        const FeasibilityReport feas = feasible(p, sol.minimizer, tol_value);
        const double evaluated = cost(p, sol.minimizer);
        res.rep.pass = res.rep.pass && feas.feasible &&
                       std::abs(evaluated - sol.min_cost) <= tol_value &&
                       sol.s_star == -1.0;
        res.rep.points_checked += 3;
        for (double s : {-1.0, -0.5, 0.5, 1.0}) {
            for (int k = -1; k < 2; ++k) {
                const ControlPair u =
                    k < 0 ? sol.minimizer
                          : random_feasible(p, cfg.seed + static_cast<std::uint64_t>(k));
                const InvarianceReport rep = check_invariance(p, s, u, tol_inv);
                res.rep.pass = res.rep.pass && rep.pass;
                res.rep.max_abs_residual =
                    std::max({res.rep.max_abs_residual, rep.max_dynamics_residual,
                              std::abs(rep.cost_gap - rep.expected_gap)});
                ++res.rep.points_checked;
            }
        }
    }
    return res;
}

inline SuiteResult suite_dominance(const RunConfig& cfg) {
    SuiteResult res{"dominance-sampling", {}};
    res.rep.pass = true;
    res.rep.tol_res = 1e-9;
    const int trials = std::max(1, std::min(cfg.trials, 100));
    const double mags[3] = {0.1, 1.0, 10.0};
    for (const auto& ts :
         {TimeScale::integers(0, 10),
          TimeScale({point_component(0.0), interval_component(1.0, 2.0)})}) {
        const VariationalProblem p =
            make_linear_shift_problem(ts, ts.min_value(), ts.max_value(), 0.0, 1.0);
        const LeitmannPair pair = linear_shift_case(p);
        const Trajectory xstar = transport_minimizer(
            pair, Trajectory::from_rule(p.scale(), [](double) { return 0.0; }));
        const double vstar = evaluate_functional(p, xstar);
        for (int k = 0; k < trials; ++k) {
            const double v = evaluate_functional(
                p, random_admissible(p, cfg.seed + static_cast<std::uint64_t>(k),
                                     mags[k % 3]));
            res.rep.max_abs_residual = std::max(res.rep.max_abs_residual, vstar - v);
            ++res.rep.points_checked;
        }
    }
    for (const auto& ts : {TimeScale::h_step(0.0, 1.0, 0.1), TimeScale::interval(0.0, 1.0)}) {
        const ControlProblem p = make_control_problem(ts);
        const InvarianceSolution sol = solve_by_invariance(p);
        for (int k = 0; k < trials; ++k) {
            const ControlPair u = random_feasible(p, cfg.seed + 1000 + static_cast<std::uint64_t>(k));
            res.rep.max_abs_residual =
                std::max(res.rep.max_abs_residual, sol.min_cost - cost(p, u));
            ++res.rep.points_checked;
        }
    }
    res.rep.pass = res.rep.max_abs_residual <= res.rep.tol_res;
    return res;
}

} // namespace detail

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.fault.empty() && cfg.fault != "drop-gauge-term") {
        err << "config error: unknown fault \"" << cfg.fault << "\"\n";
        return 1;
    }
    std::vector<detail::SuiteResult> suites;
    try {
        suites.push_back(detail::suite_operator_axioms());
        suites.push_back(detail::suite_calculus());
        suites.push_back(detail::suite_specializations());
        suites.push_back(detail::suite_lemma(cfg));
        suites.push_back(detail::suite_control(cfg));
        suites.push_back(detail::suite_dominance(cfg));
    } catch (const error& e) {
        err << "verification error: " << e.what() << "\n";
        return 2;
    }
    bool pass = true;
    for (const auto& s : suites) pass = pass && s.rep.pass;

    if (cfg.json) {
        nlohmann::json js = nlohmann::json::array();
        for (const auto& s : suites)
            js.push_back({{"name", s.name}, {"report", verification_report_to_json(s.rep)}});
        out << nlohmann::json{{"suites", js}, {"verdict", pass ? "pass" : "fail"}}.dump(2)
            << "\n";
    } else {
        for (const auto& s : suites)
            out << s.name << ": " << (s.rep.pass ? "pass" : "FAIL") << " (max residual "
                << s.rep.max_abs_residual << ", " << s.rep.points_checked
                << " points checked)\n";
        out << "verdict: " << (pass ? "pass" : "fail") << "\n";
    }
    return pass ? 0 : 2;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"Leitmann's direct method on time scales"};
    app.require_subcommand(1);

    RunConfig cfg;
    const auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--scale", cfg.scale,
                        "time scale: integers:a..b | hstep:a..b:h | qscale:q:kmin..kmax | "
                        "interval:a..b | file:<json>");
        sub->add_option("--a", cfg.a, "left endpoint (default: scale minimum)");
        sub->add_option("--b", cfg.b, "right endpoint (default: scale maximum)");
        sub->add_option("--alpha", cfg.alpha, "boundary value at a");
        sub->add_option("--beta", cfg.beta, "boundary value at b");
        sub->add_option("--trials", cfg.trials, "random trials per check");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--tol-res", cfg.tol_res, "residual/value tolerance override");
        sub->add_option("--tol-gap", cfg.tol_gap, "functional-gap tolerance");
        sub->add_option("--out", cfg.out, "output directory (default: $TSL_DEFAULT_OUT or .)");
        sub->add_flag("--json", cfg.json, "emit the report as JSON on stdout");
        sub->add_option("--fault", cfg.fault, "inject a known fault (drop-gauge-term)");
    };
    CLI::App* ex4 = app.add_subcommand("example4", "built-in variational problem run");
    CLI::App* ctl = app.add_subcommand("control", "built-in optimal-control run");
    CLI::App* ver = app.add_subcommand("verify", "run the full verification suites");
    add_common(ex4);
    add_common(ctl);
    add_common(ver);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("tsl");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    if (app.got_subcommand(ex4)) {
        cfg.subcommand = "example4";
        return cmd_example4(cfg, out, err);
    }
    if (app.got_subcommand(ctl)) {
        cfg.subcommand = "control";
        return cmd_control(cfg, out, err);
    }
    cfg.subcommand = "verify";
    return cmd_verify(cfg, out, err);
}

} // namespace tsl
