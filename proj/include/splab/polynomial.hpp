#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace splab {

using VarIndex = std::uint32_t;

struct MultisetEntry {
    VarIndex var = 0;
    std::uint32_t mult = 0;

    friend bool operator==(const MultisetEntry&, const MultisetEntry&) = default;
    friend auto operator<=>(const MultisetEntry&, const MultisetEntry&) = default;
};

/// A multiset of variable indices, e.g. {1,1,2} for x1^2 x2.
///
/// Entries are kept sorted by variable index with positive multiplicities,
/// so two equal multisets are equal member-wise. Ordering is by total degree
/// first and lexicographic on entries second, which puts all singletons ahead
/// of any product.
class Multiset {
public:
    Multiset() = default;

    static Multiset singleton(VarIndex var);
    /// Builds from an unsorted list of indices with repeats.
    static Multiset from_vars(std::span<const VarIndex> vars);
    /// Builds from (var, mult) pairs; duplicates are merged, zero multiplicities dropped.
    static Multiset from_entries(std::vector<MultisetEntry> entries);

    std::span<const MultisetEntry> entries() const { return entries_; }
    std::size_t distinct() const { return entries_.size(); }
    unsigned degree() const { return degree_; }
    bool empty() const { return entries_.empty(); }

    std::uint32_t multiplicity(VarIndex var) const;
    bool contains(VarIndex var) const { return multiplicity(var) > 0; }

    /// This multiset with one more copy of var.
    Multiset with(VarIndex var) const;
    /// This multiset with one copy of var removed; var must be present.
    Multiset without(VarIndex var) const;
    /// Multiset sum (monomial product).
    Multiset operator*(const Multiset& other) const;

    /// Largest variable index plus one; 0 when empty.
    VarIndex span_end() const { return entries_.empty() ? 0 : entries_.back().var + 1; }

    std::size_t hash() const;

    friend bool operator==(const Multiset& a, const Multiset& b) { return a.entries_ == b.entries_; }
    friend std::strong_ordering operator<=>(const Multiset& a, const Multiset& b);

private:
    std::vector<MultisetEntry> entries_;
    unsigned degree_ = 0;
};

struct MultisetHash {
    std::size_t operator()(const Multiset& m) const { return m.hash(); }
};

struct Monomial {
    double coefficient = 0.0;
    Multiset support;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Sparse polynomial with canonical (sorted, merged, nonzero) terms.
class Polynomial {
public:
    Polynomial() = default;
    /// Merges duplicate supports by coefficient addition and drops zeros.
    explicit Polynomial(std::vector<Monomial> terms, double constant = 0.0);

    std::span<const Monomial> terms() const { return terms_; }
    double constant() const { return constant_; }
    unsigned degree() const;
    bool empty() const { return terms_.empty(); }

    /// Evaluates at a point of length n; throws if the length differs or a
    /// term references a variable outside [0, n).
    double evaluate(std::span<const double> point, std::size_t n) const;

    Polynomial scaled(double factor) const;
    Polynomial with_constant(double constant) const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<Monomial> terms_;
    double constant_ = 0.0;
};

/// Accumulates terms; build() yields the canonical polynomial.
class PolynomialBuilder {
public:
    void add(const Multiset& support, double coefficient);
    void add_constant(double value) { constant_ += value; }
    Polynomial build() const;

private:
    std::map<Multiset, double> terms_;
    double constant_ = 0.0;
};

/// Product of x_j^mult over the multiset.
double monomial_value(const Multiset& support, std::span<const double> point);

/// All multisets over n variables with total degree in [1, max_degree], in
/// canonical order. Size is C(n + max_degree, max_degree) - 1.
std::vector<Multiset> enumerate_monomials(std::size_t n, unsigned max_degree);

/// C(n + d, d) - 1 without enumeration; saturates at SIZE_MAX.
std::size_t count_monomials(std::size_t n, unsigned max_degree);

/// Binomial coefficient, saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k);

} // namespace splab

template <>
struct std::hash<splab::Multiset> {
    std::size_t operator()(const splab::Multiset& m) const { return m.hash(); }
};
