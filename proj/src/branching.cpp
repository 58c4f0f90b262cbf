#include "splab/branching.hpp"

#include <algorithm>
#include <stdexcept>

namespace splab {

std::string_view rule_name(RuleId rule)
{
    switch (rule) {
    case RuleId::Max: return "max";
    case RuleId::Sum: return "sum";
    case RuleId::Dual: return "dual";
    case RuleId::Range: return "range";
    case RuleId::EigVi: return "eig-vi";
    case RuleId::EigCmi: return "eig-cmi";
    }
    return "?";
}

std::optional<RuleId> parse_rule(std::string_view name)
{
    for (RuleId r : kAllRules)
        if (rule_name(r) == name)
            return r;
    if (name == "eig_vi")
        return RuleId::EigVi;
    if (name == "eig_cmi")
        return RuleId::EigCmi;
    return std::nullopt;
}

MembershipIndex build_membership(const Problem& problem, const RltDictionary& dictionary)
{
    MembershipIndex index(dictionary.size());
    const auto constraints = problem.constraints();
    for (std::size_t r = 0; r < constraints.size(); ++r)
        for (const auto& t : constraints[r].body.terms())
            index[dictionary.at(t.support)].push_back(r);
    return index;
}

std::vector<double> constraint_duals(const Relaxation& relaxation, const LpSolution& solution)
{
    std::size_t count = 0;
    for (const auto& tag : relaxation.row_origin)
        if (tag.origin == RowOrigin::Original)
            count = std::max(count, tag.index + 1);
    std::vector<double> out(count, 0.0);
    for (std::size_t i = 0; i < relaxation.row_origin.size(); ++i)
        if (relaxation.row_origin[i].origin == RowOrigin::Original)
            out[relaxation.row_origin[i].index] = solution.duals[i];
    return out;
}

namespace {

double term_weight(RuleId rule, const NodeContext& ctx, const ViolationTerm& t)
{
    const std::size_t j = t.var;
    switch (rule) {
    case RuleId::Max:
    case RuleId::Sum:
        return 1.0;
    case RuleId::Dual: {
        double w = 0.0;
        for (std::size_t r : (*ctx.membership)[t.column])
            w += std::abs(ctx.constraint_duals[r]);
        return w;
    }
    case RuleId::Range: {
        const double root_range = ctx.root->width(j);
        if (root_range <= 0.0)
            return 0.0;
        const double x = ctx.primal[j];
        // LP points can sit a hair outside the box; keep the weight nonnegative.
        return std::max(0.0, std::min(ctx.box->upper[j] - x, x - ctx.box->lower[j]) / root_range);
    }
    case RuleId::EigVi:
        return ctx.eig_vig[j];
    case RuleId::EigCmi:
        return ctx.eig_cmig[j];
    }
    return 0.0;
}

} // namespace

std::vector<double> score(RuleId rule, const NodeContext& ctx)
{
    std::vector<double> theta(ctx.num_vars, 0.0);
    for (const auto& t : ctx.terms) {
        if (rule == RuleId::Max)
            theta[t.var] = std::max(theta[t.var], t.value);
        else
            theta[t.var] += term_weight(rule, ctx, t) * t.value;
    }
    return theta;
}

std::optional<std::size_t> select_variable(std::span<const double> theta, double tol)
{
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < theta.size(); ++j)
        if (theta[j] > tol && (!best || theta[j] > theta[*best]))
            best = j;
    return best;
}

double branch_point(const NodeContext& ctx, std::size_t j, double mu)
{
    const double lo = ctx.box->lower[j], hi = ctx.box->upper[j];
    const double w = hi - lo;
    if (!(w > 0.0))
        throw std::invalid_argument("branch_point: zero-width interval");
    return std::clamp(ctx.primal[j], lo + mu * w, hi - mu * w);
}

} // namespace splab
