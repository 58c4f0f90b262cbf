#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace splab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { GreaterEqual, Equal };

struct LpRow {
    std::vector<std::pair<std::size_t, double>> coeffs; // (column, value), columns distinct
    RowSense sense = RowSense::GreaterEqual;
    double rhs = 0.0;
};

/// min cost.x + offset  s.t.  row.x (>= | =) rhs,  lower <= x <= upper.
struct LpModel {
    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<LpRow> rows;
    double objective_offset = 0.0;

    std::size_t num_cols() const { return cost.size(); }
    std::size_t num_rows() const { return rows.size(); }

    std::size_t add_column(double c, double lo, double hi)
    {
        cost.push_back(c);
        lower.push_back(lo);
        upper.push_back(hi);
        return cost.size() - 1;
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Duals are shadow prices d(objective)/d(rhs) of the >= / = rows of the
/// minimization: nonnegative on >= rows at optimality.
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> primal;
    std::vector<double> duals;
    std::size_t iterations = 0;
};

struct LpTolerances {
    double feasibility = 1e-7;
    double optimality = 1e-9;
    std::size_t iteration_limit = 50000;
    std::size_t refactor_interval = 100;
};

class LpIterationLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solver interface point; an external engine can stand in for the kernel.
class LpSolver {
public:
    virtual ~LpSolver() = default;
    virtual LpSolution solve(const LpModel& model, const LpTolerances& tol) const = 0;
};

/// Two-phase bounded-variable revised simplex with a dense basis inverse.
/// Dantzig pricing; switches to Bland's rule after a run of degenerate pivots.
class DenseSimplex final : public LpSolver {
public:
    LpSolution solve(const LpModel& model, const LpTolerances& tol) const override;
};

LpSolution solve_lp(const LpModel& model, const LpTolerances& tol = {});

/// Largest row or bound violation of x.
double primal_residual(const LpModel& model, const std::vector<double>& x);

/// Writes the model in CPLEX-LP-like text. Column names default to c<j>.
std::string lp_text(const LpModel& model, const std::vector<std::string>& column_names = {},
                    const std::vector<std::string>& row_names = {});

} // namespace splab
