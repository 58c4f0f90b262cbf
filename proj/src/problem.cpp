#include "splab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace splab {

Problem::Problem(std::vector<std::string> var_names, std::vector<Bounds> bounds, Polynomial objective,
                 std::vector<Constraint> constraints, std::string family)
    : var_names_(std::move(var_names)), bounds_(std::move(bounds)), objective_(std::move(objective)),
      constraints_(std::move(constraints)), family_(std::move(family))
{
    const std::size_t n = bounds_.size();
    if (n == 0)
        throw ModelError("problem has no variables");
    if (var_names_.empty()) {
        for (std::size_t j = 0; j < n; ++j)
            var_names_.push_back("x" + std::to_string(j + 1));
    }
    if (var_names_.size() != n)
        throw ModelError("variable name count does not match bound count");
    if (std::set<std::string>(var_names_.begin(), var_names_.end()).size() != n)
        throw ModelError("duplicate variable name");
    for (std::size_t j = 0; j < n; ++j) {
        const auto& b = bounds_[j];
        if (!std::isfinite(b.lower) || !std::isfinite(b.upper))
            throw ModelError("variable " + var_names_[j] + " has an infinite bound");
        if (b.lower < 0.0)
            throw ModelError("variable " + var_names_[j] + " has a negative lower bound");
        if (b.lower > b.upper)
            throw ModelError("variable " + var_names_[j] + " has lower bound above upper bound");
    }
    if (constraints_.empty())
        throw ModelError("problem has no constraints");

    auto check_vars = [n](const Polynomial& p, const std::string& where) {
        for (const auto& t : p.terms()) {
            if (t.support.span_end() > n)
                throw ModelError(where + " references an undeclared variable index");
            if (!std::isfinite(t.coefficient))
                throw ModelError(where + " has a non-finite coefficient");
        }
    };
    check_vars(objective_, "objective");
    degree_ = objective_.degree();
    std::set<std::string> names;
    for (std::size_t r = 0; r < constraints_.size(); ++r) {
        auto& c = constraints_[r];
        if (c.name.empty())
            c.name = "c" + std::to_string(r + 1);
        if (!names.insert(c.name).second)
            throw ModelError("duplicate constraint name " + c.name);
        check_vars(c.body, "constraint " + c.name);
        if (c.body.constant() != 0.0) {
            c.rhs -= c.body.constant();
            c.body = c.body.with_constant(0.0);
        }
        if (!std::isfinite(c.rhs))
            throw ModelError("constraint " + c.name + " has a non-finite right-hand side");
        degree_ = std::max(degree_, c.body.degree());
    }
}

double Problem::evaluate_objective(std::span<const double> point) const
{
    return objective_.evaluate(point, num_vars());
}

FeasibilityReport check_feasible(const Problem& problem, std::span<const double> point, double tol)
{
    FeasibilityReport report;
    const std::size_t n = problem.num_vars();
    if (point.size() != n)
        throw std::invalid_argument("check_feasible: point length mismatch");

    double box_violation = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& b = problem.bounds()[j];
        box_violation = std::max({box_violation, b.lower - point[j], point[j] - b.upper});
    }
    report.in_box = box_violation <= tol;
    report.max_violation = std::max(0.0, box_violation);

    const auto constraints = problem.constraints();
    for (std::size_t r = 0; r < constraints.size(); ++r) {
        const auto& c = constraints[r];
        const double lhs = c.body.evaluate(point, n);
        const double violation = c.relation == Relation::Equal ? std::abs(lhs - c.rhs) : c.rhs - lhs;
        if (violation > tol)
            report.violated.push_back(r);
        report.max_violation = std::max(report.max_violation, violation);
    }
    report.feasible = report.in_box && report.violated.empty();
    return report;
}

} // namespace splab
