#include "splab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace splab {

Multiset Multiset::singleton(VarIndex var)
{
    Multiset m;
    m.entries_.push_back({var, 1});
    m.degree_ = 1;
    return m;
}

Multiset Multiset::from_vars(std::span<const VarIndex> vars)
{
    std::vector<MultisetEntry> entries;
    entries.reserve(vars.size());
    for (VarIndex v : vars)
        entries.push_back({v, 1});
    return from_entries(std::move(entries));
}

Multiset Multiset::from_entries(std::vector<MultisetEntry> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const MultisetEntry& a, const MultisetEntry& b) { return a.var < b.var; });
    Multiset m;
    for (const auto& e : entries) {
        if (e.mult == 0)
            continue;
        if (!m.entries_.empty() && m.entries_.back().var == e.var)
            m.entries_.back().mult += e.mult;
        else
            m.entries_.push_back(e);
        m.degree_ += e.mult;
    }
    return m;
}

std::uint32_t Multiset::multiplicity(VarIndex var) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), var,
                               [](const MultisetEntry& e, VarIndex v) { return e.var < v; });
    return (it != entries_.end() && it->var == var) ? it->mult : 0;
}

Multiset Multiset::with(VarIndex var) const
{
    Multiset m = *this;
    auto it = std::lower_bound(m.entries_.begin(), m.entries_.end(), var,
                               [](const MultisetEntry& e, VarIndex v) { return e.var < v; });
    if (it != m.entries_.end() && it->var == var)
        ++it->mult;
    else
        m.entries_.insert(it, {var, 1});
    ++m.degree_;
    return m;
}

Multiset Multiset::without(VarIndex var) const
{
    Multiset m = *this;
    auto it = std::lower_bound(m.entries_.begin(), m.entries_.end(), var,
                               [](const MultisetEntry& e, VarIndex v) { return e.var < v; });
    if (it == m.entries_.end() || it->var != var)
        throw std::invalid_argument("Multiset::without: variable not present");
    if (--it->mult == 0)
        m.entries_.erase(it);
    --m.degree_;
    return m;
}

Multiset Multiset::operator*(const Multiset& other) const
{
    std::vector<MultisetEntry> merged;
    merged.reserve(entries_.size() + other.entries_.size());
    merged.insert(merged.end(), entries_.begin(), entries_.end());
    merged.insert(merged.end(), other.entries_.begin(), other.entries_.end());
    return from_entries(std::move(merged));
}

std::size_t Multiset::hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& e : entries_) {
        h = (h ^ e.var) * 0x100000001b3ULL;
        h = (h ^ e.mult) * 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const Multiset& a, const Multiset& b)
{
    if (auto c = a.degree_ <=> b.degree_; c != 0)
        return c;
    // Lexicographic on the expanded sorted index sequences, so {1,1} < {1,2}.
    const std::size_t common = std::min(a.entries_.size(), b.entries_.size());
    for (std::size_t i = 0; i < common; ++i) {
        const auto& x = a.entries_[i];
        const auto& y = b.entries_[i];
        if (x.var != y.var)
            return x.var <=> y.var;
        if (x.mult != y.mult)
            return y.mult <=> x.mult;
    }
    return a.entries_.size() <=> b.entries_.size();
}

Polynomial::Polynomial(std::vector<Monomial> terms, double constant) : constant_(constant)
{
    std::sort(terms.begin(), terms.end(),
              [](const Monomial& a, const Monomial& b) { return a.support < b.support; });
    for (auto& t : terms) {
        if (t.support.empty()) {
            constant_ += t.coefficient;
            continue;
        }
        if (!terms_.empty() && terms_.back().support == t.support)
            terms_.back().coefficient += t.coefficient;
        else
            terms_.push_back(std::move(t));
    }
    std::erase_if(terms_, [](const Monomial& m) { return m.coefficient == 0.0; });
}

unsigned Polynomial::degree() const
{
    unsigned d = 0;
    for (const auto& t : terms_)
        d = std::max(d, t.support.degree());
    return d;
}

double Polynomial::evaluate(std::span<const double> point, std::size_t n) const
{
    if (point.size() != n)
        throw std::invalid_argument("evaluate: point has length " + std::to_string(point.size()) +
                                    ", expected " + std::to_string(n));
    double sum = constant_;
    for (const auto& t : terms_) {
        if (t.support.span_end() > n)
            throw std::invalid_argument("evaluate: term references a variable outside the point");
        sum += t.coefficient * monomial_value(t.support, point);
    }
    return sum;
}

Polynomial Polynomial::scaled(double factor) const
{
    std::vector<Monomial> terms(terms_.begin(), terms_.end());
    for (auto& t : terms)
        t.coefficient *= factor;
    return Polynomial(std::move(terms), constant_ * factor);
}

Polynomial Polynomial::with_constant(double constant) const
{
    Polynomial p = *this;
    p.constant_ = constant;
    return p;
}

void PolynomialBuilder::add(const Multiset& support, double coefficient)
{
    if (support.empty())
        constant_ += coefficient;
    else
        terms_[support] += coefficient;
}

Polynomial PolynomialBuilder::build() const
{
    std::vector<Monomial> terms;
    terms.reserve(terms_.size());
    for (const auto& [support, coef] : terms_)
        terms.push_back({coef, support});
    return Polynomial(std::move(terms), constant_);
}

double monomial_value(const Multiset& support, std::span<const double> point)
{
    double v = 1.0;
    for (const auto& e : support.entries()) {
        const double x = point[e.var];
        for (std::uint32_t k = 0; k < e.mult; ++k)
            v *= x;
    }
    return v;
}

namespace {

void enumerate_rec(std::size_t n, unsigned remaining, VarIndex start, std::vector<VarIndex>& current,
                   std::vector<Multiset>& out)
{
    if (remaining == 0) {
        out.push_back(Multiset::from_vars(current));
        return;
    }
    for (VarIndex v = start; v < n; ++v) {
        current.push_back(v);
        enumerate_rec(n, remaining - 1, v, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<Multiset> enumerate_monomials(std::size_t n, unsigned max_degree)
{
    std::vector<Multiset> out;
    std::vector<VarIndex> current;
    for (unsigned d = 1; d <= max_degree; ++d)
        enumerate_rec(n, d, 0, current, out);
    // Within a degree the recursion already yields lexicographic order of the
    // sorted index lists, which matches the entry-wise ordering; sort anyway to
    // pin the invariant.
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    constexpr auto kMax = std::numeric_limits<std::size_t>::max();
    unsigned __int128 r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > kMax)
            return kMax;
    }
    return static_cast<std::size_t>(r);
}

std::size_t count_monomials(std::size_t n, unsigned max_degree)
{
    const std::size_t c = binomial(n + max_degree, max_degree);
    return c == std::numeric_limits<std::size_t>::max() ? c : c - 1;
}

} // namespace splab
