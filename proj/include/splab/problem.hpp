#pragma once

#include "splab/polynomial.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace splab {

/// Invalid model data (bounds, dimensions, missing constraints).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Relation { GreaterEqual, Equal };

struct Bounds {
    double lower = 0.0;
    double upper = 0.0;

    double range() const { return upper - lower; }
    friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct Constraint {
    std::string name;
    Polynomial body; // never carries a constant; it is folded into rhs
    Relation relation = Relation::GreaterEqual;
    double rhs = 0.0;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Boxed polynomial program: minimize objective subject to body_r (>= | =) rhs_r
/// over 0 <= l_j <= x_j <= u_j < inf. Immutable after construction.
class Problem {
public:
    Problem(std::vector<std::string> var_names, std::vector<Bounds> bounds, Polynomial objective,
            std::vector<Constraint> constraints, std::string family = {});

    std::size_t num_vars() const { return bounds_.size(); }
    std::size_t num_constraints() const { return constraints_.size(); }
    unsigned degree() const { return degree_; }

    std::span<const Bounds> bounds() const { return bounds_; }
    const Polynomial& objective() const { return objective_; }
    std::span<const Constraint> constraints() const { return constraints_; }
    std::span<const std::string> var_names() const { return var_names_; }
    const std::string& family() const { return family_; }

    double evaluate_objective(std::span<const double> point) const;

    friend bool operator==(const Problem&, const Problem&) = default;

private:
    std::vector<std::string> var_names_;
    std::vector<Bounds> bounds_;
    Polynomial objective_;
    std::vector<Constraint> constraints_;
    std::string family_;
    unsigned degree_ = 0;
};

/// Evaluates poly at point; point length must be n.
inline double evaluate(const Polynomial& poly, std::span<const double> point, std::size_t n)
{
    return poly.evaluate(point, n);
}

struct FeasibilityReport {
    bool feasible = false;
    bool in_box = false;
    double max_violation = 0.0;           // over box and constraints
    std::vector<std::size_t> violated;    // constraint indices
};

/// Box membership (within tol) plus constraint satisfaction within tol.
FeasibilityReport check_feasible(const Problem& problem, std::span<const double> point, double tol);

} // namespace splab
