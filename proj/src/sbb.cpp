#include "splab/sbb.hpp"

#include "splab/graph.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace splab {

std::string_view status_name(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::NodeLimit: return "node_limit";
    case SolveStatus::Infeasible: return "infeasible";
    }
    return "?";
}

std::optional<SolveStatus> parse_status(std::string_view name)
{
    for (auto s : {SolveStatus::Solved, SolveStatus::TimeLimit, SolveStatus::NodeLimit, SolveStatus::Infeasible})
        if (status_name(s) == name)
            return s;
    return std::nullopt;
}

std::string_view time_mode_name(TimeMode m)
{
    return m == TimeMode::Wall ? "wall" : "nodes";
}

std::optional<TimeMode> parse_time_mode(std::string_view name)
{
    if (name == "wall")
        return TimeMode::Wall;
    if (name == "nodes")
        return TimeMode::Nodes;
    return std::nullopt;
}

double relative_gap(double lb, std::optional<double> ub)
{
    if (!ub)
        return kInf;
    return (*ub - lb) / std::max(std::abs(*ub), 1e-3);
}

SolverFailure::SolverFailure(std::size_t node, const std::string& what)
    : std::runtime_error("node " + std::to_string(node) + ": " + what), node_(node)
{
}

RootInfo root_info(const Problem& problem)
{
    const auto dictionary = std::make_shared<const RltDictionary>(collect_dictionary(problem));
    RootInfo info;
    info.lp = solve_relaxation(problem, Box::of(problem), dictionary);
    info.feasible = info.lp.status == LpStatus::Optimal;
    info.lb_init = info.feasible ? info.lp.objective : kInf;
    return info;
}

namespace {

constexpr double kFeasTol = 1e-6;
// A variable is not branched once its interval is below this fraction of
// the root width; otherwise rules that ignore some variables keep cutting
// the others into slivers.
constexpr double kMinRelWidth = 1e-4;
constexpr double kMinWidth = 1e-9;

struct Node {
    Box box;
    double bound;
    std::size_t depth;
    std::size_t seq;
    std::size_t branch_var;
    double branch_at;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const
    {
        if (a.bound != b.bound)
            return a.bound > b.bound;
        return a.seq > b.seq;
    }
};

class Search {
public:
    Search(const Problem& problem, RuleId rule, const SolveLimits& limits)
        : problem_(problem), rule_(rule), limits_(limits), root_box_(Box::of(problem)),
          dictionary_(std::make_shared<const RltDictionary>(collect_dictionary(problem))),
          membership_(build_membership(problem, *dictionary_)), start_(std::chrono::steady_clock::now())
    {
        if (rule == RuleId::EigVi)
            eig_vig_ = vig_weights(problem);
        if (rule == RuleId::EigCmi)
            eig_cmig_ = cmig_weights(problem);
        eig_vig_.resize(problem.num_vars(), 0.0);
        eig_cmig_.resize(problem.num_vars(), 0.0);
        trace_.rule = rule;
        trace_.time_mode = limits.time_mode;
    }

    SolveTrace run()
    {
        auto root = evaluate(root_box_, -kInf, 0);
        if (root_lb_ == -kInf) {
            trace_.status = SolveStatus::Infeasible;
            trace_.lb_init = trace_.lb_fin = kInf;
            return finish();
        }
        trace_.ub_init = ub_;
        if (root)
            queue_.push(std::move(*root));
        record_lb();
        // The root incumbent can undercut the LP bound by roundoff.
        trace_.lb_init = trace_.lb_history.empty() ? root_lb_ : trace_.lb_history.front().lb;

        while (true) {
            if (relative_gap(global_lb(), ub_) <= limits_.gap_tol) {
                trace_.status = SolveStatus::Solved;
                break;
            }
            if (queue_.empty()) {
                // Leftover slivers with an open gap: the search cannot refine further.
                if (std::isfinite(unresolved_lb_))
                    trace_.status = SolveStatus::NodeLimit;
                else
                    trace_.status = ub_ ? SolveStatus::Solved : SolveStatus::Infeasible;
                break;
            }
            if (clock() >= limits_.time) {
                trace_.status = SolveStatus::TimeLimit;
                break;
            }
            if (trace_.nodes_processed >= limits_.max_nodes) {
                trace_.status = SolveStatus::NodeLimit;
                break;
            }
            Node node = queue_.top();
            queue_.pop();
            if (fathomed(node.bound)) {
                record_lb();
                continue;
            }
            Box left = node.box, right = node.box;
            left.upper[node.branch_var] = node.branch_at;
            right.lower[node.branch_var] = node.branch_at;
            for (Box* child : {&left, &right}) {
                if (auto c = evaluate(*child, node.bound, node.depth + 1))
                    queue_.push(std::move(*c));
            }
            record_lb();
        }
        record_lb();
        return finish();
    }

private:
    double clock() const
    {
        if (limits_.time_mode == TimeMode::Nodes)
            return trace_.nodes_processed == 0 ? 0.0 : static_cast<double>(trace_.nodes_processed - 1);
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    bool fathomed(double bound) const
    {
        return ub_ && bound >= *ub_ - limits_.gap_tol * std::max(std::abs(*ub_), 1e-3);
    }

    double global_lb() const
    {
        double lb = queue_.empty() ? (ub_ ? *ub_ : kInf) : queue_.top().bound;
        lb = std::min(lb, unresolved_lb_);
        if (ub_)
            lb = std::min(lb, *ub_);
        return lb;
    }

    void record_lb()
    {
        const double lb = global_lb();
        if (!std::isfinite(lb))
            return;
        if (trace_.lb_history.empty() || lb > trace_.lb_history.back().lb)
            trace_.lb_history.push_back({clock(), lb});
    }

    void offer_incumbent(std::span<const double> x, double value)
    {
        if (!ub_ || value < *ub_) {
            ub_ = value;
            trace_.incumbent.assign(x.begin(), x.end());
        }
    }

    // Solves the node LP, updates the incumbent and decides the branching
    // variable. Returns nothing when the node is pruned.
    std::optional<Node> evaluate(const Box& box, double parent_bound, std::size_t depth)
    {
        const std::size_t id = trace_.nodes_processed++;
        const std::size_t n = problem_.num_vars();
        RelaxationSolution lp;
        try {
            lp = solve_relaxation(problem_, box, dictionary_);
        } catch (const std::exception& e) {
            throw SolverFailure(id, e.what());
        }
        if (lp.status == LpStatus::Unbounded)
            throw SolverFailure(id, "relaxation is unbounded");
        if (lp.status != LpStatus::Optimal)
            return std::nullopt;
        const double bound = std::max(lp.objective, parent_bound);
        if (id == 0)
            root_lb_ = bound;

        const std::span<const double> x(lp.primal.data(), n);
        if (check_feasible(problem_, x, kFeasTol).feasible)
            offer_incumbent(x, problem_.evaluate_objective(x));

        const auto terms = violation_terms(*dictionary_, lp.primal);
        NodeContext ctx{n, terms, lp.primal, lp.constraint_duals, &box, &root_box_, eig_vig_, eig_cmig_, &membership_};
        auto pick = [&](RuleId r) {
            auto theta = score(r, ctx);
            for (std::size_t j = 0; j < n; ++j)
                if (box.width(j) < std::max(kMinWidth, kMinRelWidth * root_box_.width(j)))
                    theta[j] = 0.0;
            return select_variable(theta);
        };
        auto var = pick(rule_);
        if (!var && rule_ != RuleId::Sum && rule_ != RuleId::Max) {
            var = pick(RuleId::Sum);
            if (var)
                ++trace_.fallback_branches;
        }
        if (!var) {
            // Every lifted identity holds at the LP point, so it solves the
            // original problem over this box. A box that only ran out of
            // width keeps its bound in the global lower bound.
            const bool exact = std::all_of(terms.begin(), terms.end(),
                                           [](const ViolationTerm& t) { return t.value <= kSelectTolerance; });
            if (exact)
                offer_incumbent(x, problem_.evaluate_objective(x));
            else
                unresolved_lb_ = std::min(unresolved_lb_, bound);
            return std::nullopt;
        }
        if (fathomed(bound))
            return std::nullopt;
        return Node{box, bound, depth, seq_++, *var, branch_point(ctx, *var)};
    }

    SolveTrace finish()
    {
        trace_.ub_fin = ub_;
        if (!trace_.lb_history.empty())
            trace_.lb_fin = trace_.lb_history.back().lb;
        trace_.time = clock();
        trace_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        return std::move(trace_);
    }

    const Problem& problem_;
    RuleId rule_;
    SolveLimits limits_;
    Box root_box_;
    std::shared_ptr<const RltDictionary> dictionary_;
    MembershipIndex membership_;
    std::vector<double> eig_vig_, eig_cmig_;
    std::chrono::steady_clock::time_point start_;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> queue_;
    std::optional<double> ub_;
    double root_lb_ = -kInf;
    double unresolved_lb_ = kInf;
    std::size_t seq_ = 0;
    SolveTrace trace_;
};

} // namespace

SolveTrace solve(const Problem& problem, RuleId rule, const SolveLimits& limits)
{
    if (!(limits.time > 0.0) || limits.max_nodes == 0 || !(limits.gap_tol > 0.0))
        throw std::invalid_argument("solve: limits must be positive");
    return Search(problem, rule, limits).run();
}

} // namespace splab
