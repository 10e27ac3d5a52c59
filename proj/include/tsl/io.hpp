#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tsl/control.hpp"
#include "tsl/delta.hpp"
#include "tsl/errors.hpp"
#include "tsl/leitmann.hpp"
#include "tsl/oracle.hpp"
#include "tsl/time_scale.hpp"
#include "tsl/variational.hpp"

namespace tsl {

namespace detail {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double require_number(const nlohmann::json& j, const std::string& what) {
    if (!j.is_number()) throw parse_error("scale spec: " + what + " must be a number");
    return j.get<double>();
}

inline std::int64_t require_integer(const nlohmann::json& j, const std::string& what) {
    if (!j.is_number_integer()) throw parse_error("scale spec: " + what + " must be an integer");
    return j.get<std::int64_t>();
}

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> known,
                           const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw parse_error("unknown field \"" + it.key() + "\" in " + where);
    }
}

} // namespace detail

namespace detail {

inline ScaleGenerator scale_from_json_impl(const nlohmann::json& j) {
    if (!j.is_object()) throw parse_error("scale spec: expected a JSON object");
    detail::reject_unknown(j, {"components", "generator"}, "scale spec");
    const bool has_components = j.contains("components");
    const bool has_generator = j.contains("generator");
    if (has_components == has_generator)
        throw parse_error("scale spec: need exactly one of \"components\" or \"generator\"");

    if (has_components) {
        const auto& arr = j.at("components");
        if (!arr.is_array() || arr.empty())
            throw parse_error("scale spec: \"components\" must be a nonempty array");
        UnionSpec u;
        for (const auto& e : arr) {
            if (!e.is_object() || e.size() != 1)
                throw parse_error("scale spec: each component must be a one-field object");
            if (e.contains("point")) {
                u.components.push_back(
                    point_component(detail::require_number(e.at("point"), "point")));
            } else if (e.contains("interval")) {
                const auto& iv = e.at("interval");
                if (!iv.is_array() || iv.size() != 2)
                    throw parse_error("scale spec: \"interval\" must be [lo, hi]");
                u.components.push_back(
                    interval_component(detail::require_number(iv.at(0), "interval lo"),
                                       detail::require_number(iv.at(1), "interval hi")));
            } else {
                throw parse_error("scale spec: component must have \"point\" or \"interval\"");
            }
        }
        return ScaleGenerator{std::move(u)};
    }

    const auto& g = j.at("generator");
    if (!g.is_object() || g.size() != 1)
        throw parse_error("scale spec: \"generator\" must hold exactly one generator");
    if (g.contains("integers")) {
        const auto& spec = g.at("integers");
        detail::reject_unknown(spec, {"a", "b"}, "integers generator");
        return ScaleGenerator{IntegersSpec{detail::require_integer(spec.at("a"), "a"),
                                           detail::require_integer(spec.at("b"), "b")}};
    }
    if (g.contains("hstep")) {
        const auto& spec = g.at("hstep");
        detail::reject_unknown(spec, {"a", "b", "h"}, "hstep generator");
        return ScaleGenerator{HStepSpec{detail::require_number(spec.at("a"), "a"),
                                        detail::require_number(spec.at("b"), "b"),
                                        detail::require_number(spec.at("h"), "h")}};
    }
    if (g.contains("qscale")) {
        const auto& spec = g.at("qscale");
        detail::reject_unknown(spec, {"q", "k_min", "k_max"}, "qscale generator");
        return ScaleGenerator{
            QScaleSpec{detail::require_number(spec.at("q"), "q"),
                       static_cast<int>(detail::require_integer(spec.at("k_min"), "k_min")),
                       static_cast<int>(detail::require_integer(spec.at("k_max"), "k_max"))}};
    }
    throw parse_error("scale spec: unknown generator kind");
}

} // namespace detail

/// Parses `{"components":[{"point":...},{"interval":[lo,hi]},...]}` or
/// `{"generator":{"integers"|"hstep"|"qscale":{...}}}`. Field names are a
/// fixed contract; anything unrecognized or missing is a parse_error, not a
/// warning.
inline ScaleGenerator scale_from_json(const nlohmann::json& j) {
    try {
        return detail::scale_from_json_impl(j);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("scale spec: ") + e.what());
    }
}

inline nlohmann::json generator_to_json(const ScaleGenerator& gen) {
    nlohmann::json j;
    std::visit(
        [&j](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, IntegersSpec>) {
                j = {{"generator", {{"integers", {{"a", spec.a}, {"b", spec.b}}}}}};
            } else if constexpr (std::is_same_v<T, HStepSpec>) {
                j = {{"generator", {{"hstep", {{"a", spec.a}, {"b", spec.b}, {"h", spec.h}}}}}};
            } else if constexpr (std::is_same_v<T, QScaleSpec>) {
                j = {{"generator",
                      {{"qscale", {{"q", spec.q}, {"k_min", spec.k_min}, {"k_max", spec.k_max}}}}}};
            } else {
                nlohmann::json comps = nlohmann::json::array();
                for (const auto& c : spec.components) {
                    if (c.is_point())
                        comps.push_back({{"point", c.lo}});
                    else
                        comps.push_back({{"interval", {c.lo, c.hi}}});
                }
                j = {{"components", std::move(comps)}};
            }
        },
        gen.spec);
    return j;
}

inline nlohmann::json scale_to_json(const TimeScale& ts) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : ts.components()) {
        if (c.is_point())
            comps.push_back({{"point", c.lo}});
        else
            comps.push_back({{"interval", {c.lo, c.hi}}});
    }
    return {{"components", std::move(comps)}};
}

namespace detail {

inline double parse_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw parse_error("scale shorthand: bad " + what + " \"" + s + "\"");
    }
    if (used != s.size()) throw parse_error("scale shorthand: bad " + what + " \"" + s + "\"");
    return v;
}

inline std::int64_t parse_int(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw parse_error("scale shorthand: bad " + what + " \"" + s + "\"");
    }
    if (used != s.size()) throw parse_error("scale shorthand: bad " + what + " \"" + s + "\"");
    return v;
}

/// Splits "lo..hi" at the first ".." that leaves both sides nonempty.
inline std::pair<std::string, std::string> split_range(const std::string& s,
                                                       const std::string& what) {
    const auto pos = s.find("..", 1); // a leading '-' or digit must precede
    if (pos == std::string::npos || pos + 2 >= s.size())
        throw parse_error("scale shorthand: expected lo..hi in " + what);
    return {s.substr(0, pos), s.substr(pos + 2)};
}

} // namespace detail

/// Shorthand grammar: `integers:a..b`, `hstep:a..b:h`, `qscale:q:kmin..kmax`,
/// `interval:a..b`, `file:<path to JSON spec>`. Unions are JSON-file only.
inline TimeScale parse_scale_shorthand(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw parse_error("scale shorthand: expected kind:..., got \"" + spec + "\"");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);

    if (kind == "integers") {
        const auto [lo, hi] = detail::split_range(rest, "integers");
        return TimeScale::integers(detail::parse_int(lo, "integer bound"),
                                   detail::parse_int(hi, "integer bound"));
    }
    if (kind == "hstep") {
        const auto second = rest.rfind(':');
        if (second == std::string::npos)
            throw parse_error("scale shorthand: hstep needs a..b:h");
        const auto [lo, hi] = detail::split_range(rest.substr(0, second), "hstep");
        return TimeScale::h_step(detail::parse_double(lo, "hstep bound"),
                                 detail::parse_double(hi, "hstep bound"),
                                 detail::parse_double(rest.substr(second + 1), "hstep step"));
    }
    if (kind == "qscale") {
        const auto second = rest.find(':');
        if (second == std::string::npos)
            throw parse_error("scale shorthand: qscale needs q:kmin..kmax");
        const auto [klo, khi] = detail::split_range(rest.substr(second + 1), "qscale");
        return TimeScale::q_scale(detail::parse_double(rest.substr(0, second), "qscale base"),
                                  static_cast<int>(detail::parse_int(klo, "qscale exponent")),
                                  static_cast<int>(detail::parse_int(khi, "qscale exponent")));
    }
    if (kind == "interval") {
        const auto [lo, hi] = detail::split_range(rest, "interval");
        return TimeScale::interval(detail::parse_double(lo, "interval bound"),
                                   detail::parse_double(hi, "interval bound"));
    }
    if (kind == "file") {
        std::ifstream in(rest);
        if (!in) throw parse_error("scale shorthand: cannot open \"" + rest + "\"");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw parse_error("scale file \"" + rest + "\": " + e.what());
        }
        return scale_from_json(j).materialize();
    }
    throw parse_error("scale shorthand: unknown kind \"" + kind + "\"");
}

/// One row per scattered point, n_dense rows per dense segment (endpoints
/// included). x^delta is written as nan where the scale leaves it undefined
/// (a left-scattered maximum).
inline void write_trajectory_csv(std::ostream& out, const TimeScale& ts, const Trajectory& x,
                                 int n_dense = 101, const DeltaOptions& opts = {}) {
    out << "t,x,xdelta,xsigma\n";
    const ScaleFunction xf = x.as_scale_function();
    const auto row = [&](double t) {
        const double xd = ts.in_kappa(t)
                              ? delta_derivative(ts, xf, t, opts)
                              : std::numeric_limits<double>::quiet_NaN();
        out << detail::format_g17(t) << ',' << detail::format_g17(x(t)) << ','
            << detail::format_g17(xd) << ',' << detail::format_g17(x(ts.sigma(t))) << '\n';
    };
    for (const auto& c : ts.components()) {
        if (c.is_point()) {
            row(c.lo);
        } else {
            for (int k = 0; k < n_dense; ++k)
                row(c.lo + (c.hi - c.lo) * static_cast<double>(k) /
                               static_cast<double>(n_dense - 1));
        }
    }
}

inline void write_control_csv(std::ostream& out, const TimeScale& ts, const ControlPair& u,
                              const ControlTrajectories& x, int n_dense = 101) {
    out << "t,u1,u2,x1,x2\n";
    const auto row = [&](double t) {
        out << detail::format_g17(t) << ',' << detail::format_g17(u.u1(t)) << ','
            << detail::format_g17(u.u2(t)) << ',' << detail::format_g17(x.x1(t)) << ','
            << detail::format_g17(x.x2(t)) << '\n';
    };
    for (const auto& c : ts.components()) {
        if (c.is_point()) {
            row(c.lo);
        } else {
            for (int k = 0; k < n_dense; ++k)
                row(c.lo + (c.hi - c.lo) * static_cast<double>(k) /
                               static_cast<double>(n_dense - 1));
        }
    }
}

inline nlohmann::json verification_report_to_json(const VerificationReport& rep) {
    return {{"max_abs_residual", rep.max_abs_residual},
            {"points_checked", rep.points_checked},
            {"functional_gap", rep.functional_gap},
            {"gap_constant_spread", rep.gap_constant_spread},
            {"verdict", rep.pass ? "pass" : "fail"},
            {"tolerances", {{"tol_res", rep.tol_res}, {"tol_gap", rep.tol_gap}}}};
}

inline nlohmann::json oracle_to_json(const OracleSolution& sol) {
    return {{"method", sol.method},
            {"value", sol.value},
            {"argmin", sol.values},
            {"converged", sol.converged}};
}

} // namespace tsl
