#pragma once

#include "splab/lp.hpp"
#include "splab/problem.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace splab {

class InstanceTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultColumnCap = 200000;

/// Multiset -> LP column. Columns 0..n-1 are the singletons {j}; the rest
/// follow in canonical multiset order.
class RltDictionary {
public:
    RltDictionary(std::size_t num_vars, std::vector<Multiset> columns);

    std::size_t size() const { return columns_.size(); }
    std::size_t num_vars() const { return num_vars_; }
    const Multiset& column(std::size_t k) const { return columns_[k]; }
    std::span<const Multiset> columns() const { return columns_; }
    std::optional<std::size_t> find(const Multiset& m) const;
    /// Column of m; throws std::out_of_range when absent.
    std::size_t at(const Multiset& m) const;

    /// Debug name: X_ followed by underscore-joined 1-based index:multiplicity pairs.
    std::string column_name(std::size_t k) const;

private:
    std::size_t num_vars_;
    std::vector<Multiset> columns_;
    std::unordered_map<Multiset, std::size_t, MultisetHash> index_;
};

/// All multisets of degree 1..delta. Bound-factor products of cardinality
/// delta already generate every one of them, which also makes the set closed
/// under removal of a single element.
RltDictionary collect_dictionary(const Problem& problem, std::size_t column_cap = kDefaultColumnCap);

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    static Box of(const Problem& problem);
    std::size_t size() const { return lower.size(); }
    double width(std::size_t j) const { return upper[j] - lower[j]; }
    friend bool operator==(const Box&, const Box&) = default;
};

/// Linearized products of delta factors (x_j - l_j) or (u_j - x_j), one row per
/// multiset F of cardinality delta and per split of each multiplicity between
/// lower and upper factors. Duplicate and vacuous rows are dropped.
std::vector<LpRow> bound_factor_rows(const Box& box, unsigned delta, const RltDictionary& dictionary);

enum class RowOrigin { Original, BoundFactor };

struct RowTag {
    RowOrigin origin = RowOrigin::BoundFactor;
    std::size_t index = 0; // constraint index for Original rows
};

struct Relaxation {
    std::shared_ptr<const RltDictionary> dictionary;
    LpModel lp;
    std::vector<RowTag> row_origin;
    Box box;

    std::vector<std::string> row_names(const Problem& problem) const;
    std::string dump(const Problem& problem) const;
};

Relaxation linearize(const Problem& problem, const Box& box, std::shared_ptr<const RltDictionary> dictionary);
Relaxation linearize(const Problem& problem, const Box& box);

struct RelaxationSolution {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> primal;           // lifted x-space point, one entry per dictionary column
    std::vector<double> constraint_duals; // one per original constraint
    std::size_t iterations = 0;
};

/// Same LP as linearize(problem, box, dictionary), solved in box-local
/// coordinates y_j = (x_j - l_j) / (u_j - l_j) where the bound-factor rows stay
/// well scaled on small boxes. The solution is mapped back to x-space.
RelaxationSolution solve_relaxation(const Problem& problem, const Box& box,
                                    std::shared_ptr<const RltDictionary> dictionary, const LpTolerances& tol = {});

/// Lifted point X_K = prod_{j in K} x_j over all dictionary columns.
std::vector<double> lift(const RltDictionary& dictionary, std::span<const double> x);

struct ViolationTerm {
    VarIndex var;             // j
    std::size_t rest_column;  // column of J
    std::size_t column;       // column of J + {j}
    double value;             // |X(J+{j}) - x_j * X(J)|
};

/// One term per dictionary column K with |K| >= 2 and per distinct j in K.
std::vector<ViolationTerm> violation_terms(const RltDictionary& dictionary, std::span<const double> primal);
std::vector<ViolationTerm> violation_terms(const Relaxation& relaxation, std::span<const double> primal);

} // namespace splab
