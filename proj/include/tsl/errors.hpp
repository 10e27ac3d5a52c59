#pragma once

#include <stdexcept>
#include <string>

namespace tsl {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Queried point is not a member of the time scale.
class membership_error : public error {
public:
    explicit membership_error(double t)
        : error("point " + std::to_string(t) + " is not a member of the time scale"), point(t) {}
    double point;
};

/// Queried point lies outside the delta-derivative domain (the scale minus a
/// left-scattered maximum).
class kappa_domain_error : public error {
public:
    explicit kappa_domain_error(double t)
        : error("point " + std::to_string(t) + " is outside the derivative domain"), point(t) {}
    double point;
};

/// Quadrature failed to reach the requested tolerance; carries the best estimate.
class quadrature_error : public error {
public:
    quadrature_error(double estimate_, double achieved_tol_)
        : error("quadrature did not converge (achieved " + std::to_string(achieved_tol_) + ")"),
          estimate(estimate_),
          achieved_tol(achieved_tol_) {}
    double estimate;
    double achieved_tol;
};

/// A transformation produced an inadmissible image trajectory.
class inconsistent_transformation_error : public error {
public:
    explicit inconsistent_transformation_error(const std::string& what) : error(what) {}
};

/// The invariance-parameter endpoint equations have no common solution.
class no_invariant_solution_error : public error {
public:
    explicit no_invariant_solution_error(const std::string& what) : error(what) {}
};

/// solve_quadratic was handed a non-quadratic objective.
class wrong_oracle_error : public error {
public:
    explicit wrong_oracle_error(const std::string& what) : error(what) {}
};

/// The stationarity system is singular or not positive definite.
class degeneracy_error : public error {
public:
    explicit degeneracy_error(const std::string& what) : error(what) {}
};

/// Malformed scale spec, config file, or CLI input.
class parse_error : public error {
public:
    explicit parse_error(const std::string& what) : error(what) {}
};

} // namespace tsl
