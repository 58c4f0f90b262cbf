#pragma once

#include "splab/branching.hpp"
#include "splab/problem.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace splab {

enum class SolveStatus { Solved, TimeLimit, NodeLimit, Infeasible };

std::string_view status_name(SolveStatus s);
std::optional<SolveStatus> parse_status(std::string_view name);

/// Wall: seconds since the solve started. Nodes: number of node LPs solved
/// after the root, a machine-independent clock.
enum class TimeMode { Wall, Nodes };

std::string_view time_mode_name(TimeMode m);
std::optional<TimeMode> parse_time_mode(std::string_view name);

struct SolveLimits {
    double time = 60.0; // in the units of time_mode
    std::size_t max_nodes = 1000000;
    double gap_tol = 1e-4;
    TimeMode time_mode = TimeMode::Wall;
};

struct TracePoint {
    double time;
    double lb;
    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct SolveTrace {
    RuleId rule = RuleId::Max;
    SolveStatus status = SolveStatus::Infeasible;
    TimeMode time_mode = TimeMode::Wall;
    double lb_init = 0.0;
    double lb_fin = 0.0;
    std::optional<double> ub_init; // incumbent after the root node
    std::optional<double> ub_fin;
    std::vector<double> incumbent;
    std::vector<TracePoint> lb_history;
    std::size_t nodes_processed = 0;
    std::size_t fallback_branches = 0; // rule had no candidate; the sum rule decided
    double time = 0.0;                 // KPI clock at termination (units of time_mode)
    double wall_seconds = 0.0;
};

/// Closed by the root node alone; such runs carry no rule information.
inline bool solved_at_root(const SolveTrace& t)
{
    return t.status == SolveStatus::Solved && t.nodes_processed <= 1;
}

/// Relative gap (UB - LB) / max(|UB|, 1e-3); infinite without an incumbent.
double relative_gap(double lb, std::optional<double> ub);

class SolverFailure : public std::runtime_error {
public:
    SolverFailure(std::size_t node, const std::string& what);
    std::size_t node() const { return node_; }

private:
    std::size_t node_;
};

struct RootInfo {
    bool feasible = false;
    double lb_init = 0.0;
    RelaxationSolution lp;
};

RootInfo root_info(const Problem& problem);

SolveTrace solve(const Problem& problem, RuleId rule, const SolveLimits& limits = {});

} // namespace splab
