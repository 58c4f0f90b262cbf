#pragma once

#include "splab/lp.hpp"
#include "splab/rlt.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace splab {

/// Portfolio order doubles as the tie-break order everywhere.
enum class RuleId { Max, Sum, Dual, Range, EigVi, EigCmi };

inline constexpr std::array<RuleId, 6> kAllRules{RuleId::Max,   RuleId::Sum,   RuleId::Dual,
                                                 RuleId::Range, RuleId::EigVi, RuleId::EigCmi};

std::string_view rule_name(RuleId rule);
std::optional<RuleId> parse_rule(std::string_view name);

/// For each dictionary column, the original constraints whose body contains it.
using MembershipIndex = std::vector<std::vector<std::size_t>>;

MembershipIndex build_membership(const Problem& problem, const RltDictionary& dictionary);

struct NodeContext {
    std::size_t num_vars = 0;
    std::span<const ViolationTerm> terms;
    std::span<const double> primal;           // LP point; x_j is primal[j]
    std::span<const double> constraint_duals; // one per original constraint
    const Box* box = nullptr;                 // current node
    const Box* root = nullptr;                // root box
    std::span<const double> eig_vig;
    std::span<const double> eig_cmig;
    const MembershipIndex* membership = nullptr;
};

/// Shadow prices of the rows tagged as original constraints.
std::vector<double> constraint_duals(const Relaxation& relaxation, const LpSolution& solution);

/// theta_j per rule; variables without violation terms score 0.
std::vector<double> score(RuleId rule, const NodeContext& ctx);

inline constexpr double kSelectTolerance = 1e-6;

/// argmax over theta_j > tol, smallest index on ties.
std::optional<std::size_t> select_variable(std::span<const double> theta, double tol = kSelectTolerance);

inline constexpr double kBranchClamp = 0.1;

/// clamp(x_j, l_j + mu w, u_j - mu w) with w the node width of x_j.
double branch_point(const NodeContext& ctx, std::size_t j, double mu = kBranchClamp);

} // namespace splab
