#include "splab/rlt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace splab {

RltDictionary::RltDictionary(std::size_t num_vars, std::vector<Multiset> columns)
    : num_vars_(num_vars), columns_(std::move(columns))
{
    index_.reserve(columns_.size());
    for (std::size_t k = 0; k < columns_.size(); ++k)
        index_.emplace(columns_[k], k);
    for (std::size_t j = 0; j < num_vars_; ++j) {
        if (j >= columns_.size() || columns_[j] != Multiset::singleton(static_cast<VarIndex>(j)))
            throw std::invalid_argument("RltDictionary: first columns must be the singletons");
    }
}

std::optional<std::size_t> RltDictionary::find(const Multiset& m) const
{
    const auto it = index_.find(m);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::size_t RltDictionary::at(const Multiset& m) const
{
    const auto it = index_.find(m);
    if (it == index_.end())
        throw std::out_of_range("RltDictionary: multiset has no column");
    return it->second;
}

std::string RltDictionary::column_name(std::size_t k) const
{
    std::string name = "X";
    for (const auto& e : columns_[k].entries())
        name += "_" + std::to_string(e.var + 1) + ":" + std::to_string(e.mult);
    return name;
}

RltDictionary collect_dictionary(const Problem& problem, std::size_t column_cap)
{
    const std::size_t n = problem.num_vars();
    const unsigned delta = problem.degree();
    const std::size_t count = count_monomials(n, delta);
    if (count > column_cap)
        throw InstanceTooLarge("RLT dictionary needs " + std::to_string(count) + " columns (cap " +
                               std::to_string(column_cap) + ")");
    // Canonical order sorts by degree first, so the singletons lead.
    return RltDictionary(n, enumerate_monomials(n, delta));
}

Box Box::of(const Problem& problem)
{
    Box box;
    for (const auto& b : problem.bounds()) {
        box.lower.push_back(b.lower);
        box.upper.push_back(b.upper);
    }
    return box;
}

namespace {

using Expansion = std::map<Multiset, double>; // empty multiset = constant

// Multiplies in place by (offset + slope * x_var).
void multiply_linear(Expansion& poly, VarIndex var, double offset, double slope)
{
    Expansion out;
    for (const auto& [support, coef] : poly) {
        if (offset != 0.0)
            out[support] += coef * offset;
        out[support.with(var)] += coef * slope;
    }
    poly = std::move(out);
}

} // namespace

std::vector<LpRow> bound_factor_rows(const Box& box, unsigned delta, const RltDictionary& dictionary)
{
    std::vector<LpRow> rows;
    std::set<std::pair<std::vector<std::pair<std::size_t, double>>, double>> seen;
    for (const auto& f : dictionary.columns()) {
        if (f.degree() != delta)
            continue;
        const auto entries = f.entries();
        // Mixed-radix counter over the number of lower factors per variable.
        std::vector<std::uint32_t> lows(entries.size(), 0);
        while (true) {
            Expansion poly{{Multiset{}, 1.0}};
            for (std::size_t e = 0; e < entries.size(); ++e) {
                const VarIndex j = entries[e].var;
                for (std::uint32_t k = 0; k < entries[e].mult; ++k) {
                    if (k < lows[e])
                        multiply_linear(poly, j, -box.lower[j], 1.0);
                    else
                        multiply_linear(poly, j, box.upper[j], -1.0);
                }
            }
            LpRow row;
            for (const auto& [support, coef] : poly) {
                if (support.empty())
                    row.rhs = -coef;
                else if (coef != 0.0)
                    row.coeffs.push_back({dictionary.at(support), coef});
            }
            std::sort(row.coeffs.begin(), row.coeffs.end());
            if (!row.coeffs.empty() && seen.emplace(row.coeffs, row.rhs).second)
                rows.push_back(std::move(row));

            std::size_t e = 0;
            while (e < entries.size() && lows[e] == entries[e].mult)
                lows[e++] = 0;
            if (e == entries.size())
                break;
            ++lows[e];
        }
    }
    return rows;
}

Relaxation linearize(const Problem& problem, const Box& box, std::shared_ptr<const RltDictionary> dictionary)
{
    const std::size_t n = problem.num_vars();
    if (box.size() != n)
        throw std::invalid_argument("linearize: box dimension mismatch");
    for (std::size_t j = 0; j < n; ++j)
        if (!(box.lower[j] <= box.upper[j]))
            throw std::invalid_argument("linearize: empty box interval");

    Relaxation rel;
    rel.box = box;
    const auto& dict = *dictionary;
    auto& lp = rel.lp;
    for (std::size_t k = 0; k < dict.size(); ++k) {
        if (k < n)
            lp.add_column(0.0, box.lower[k], box.upper[k]);
        else
            lp.add_column(0.0, -kInf, kInf);
    }
    for (const auto& t : problem.objective().terms())
        lp.cost[dict.at(t.support)] += t.coefficient;
    lp.objective_offset = problem.objective().constant();

    const auto constraints = problem.constraints();
    for (std::size_t r = 0; r < constraints.size(); ++r) {
        LpRow row;
        for (const auto& t : constraints[r].body.terms())
            row.coeffs.push_back({dict.at(t.support), t.coefficient});
        row.sense = constraints[r].relation == Relation::Equal ? RowSense::Equal : RowSense::GreaterEqual;
        row.rhs = constraints[r].rhs;
        lp.rows.push_back(std::move(row));
        rel.row_origin.push_back({RowOrigin::Original, r});
    }
    for (auto& row : bound_factor_rows(box, problem.degree(), dict)) {
        lp.rows.push_back(std::move(row));
        rel.row_origin.push_back({RowOrigin::BoundFactor, 0});
    }
    rel.dictionary = std::move(dictionary);
    return rel;
}

namespace {

// Substitutes x_j = offset_j + slope_j * y_j.
Expansion substitute(const Multiset& support, std::span<const double> offset, std::span<const double> slope)
{
    Expansion poly{{Multiset{}, 1.0}};
    for (const auto& e : support.entries())
        for (std::uint32_t k = 0; k < e.mult; ++k)
            multiply_linear(poly, e.var, offset[e.var], slope[e.var]);
    return poly;
}

Polynomial substitute(const Polynomial& p, std::span<const double> offset, std::span<const double> slope)
{
    PolynomialBuilder out;
    out.add_constant(p.constant());
    for (const auto& t : p.terms())
        for (const auto& [support, coef] : substitute(t.support, offset, slope)) {
            if (support.empty())
                out.add_constant(t.coefficient * coef);
            else
                out.add(support, t.coefficient * coef);
        }
    return out.build();
}

// Narrow intervals shrink some substituted coefficients to roundoff level
// next to others of order one, which leaves the basis ill-conditioned. On the
// unit box every product lies in [0, 1], so a dropped term a*X is covered by
// moving |a| to the slack side: the result is still a valid relaxation.
constexpr double kNegligibleCoef = 1e-9;

Constraint drop_negligible(const Constraint& original, const Polynomial& body)
{
    double biggest = 0.0;
    for (const auto& t : body.terms())
        biggest = std::max(biggest, std::abs(t.coefficient));
    PolynomialBuilder kept;
    double slack = 0.0;
    for (const auto& t : body.terms()) {
        if (std::abs(t.coefficient) < kNegligibleCoef * biggest)
            slack += std::abs(t.coefficient);
        else
            kept.add(t.support, t.coefficient);
    }
    Polynomial out = kept.build();
    if (out.degree() != body.degree())
        return {original.name, body.with_constant(0.0), original.relation, original.rhs - body.constant()};
    const double rhs = original.rhs - body.constant();
    if (original.relation == Relation::GreaterEqual || slack == 0.0)
        return {original.name, std::move(out), original.relation, rhs - slack};
    return {original.name, body.with_constant(0.0), original.relation, rhs};
}

} // namespace

RelaxationSolution solve_relaxation(const Problem& problem, const Box& box,
                                    std::shared_ptr<const RltDictionary> dictionary, const LpTolerances& tol)
{
    const std::size_t n = problem.num_vars();
    if (box.size() != n)
        throw std::invalid_argument("solve_relaxation: box dimension mismatch");
    std::vector<double> offset(box.lower), slope(n);
    std::vector<Bounds> local(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double w = box.width(j);
        if (!(w >= 0.0))
            throw std::invalid_argument("solve_relaxation: empty box interval");
        slope[j] = w > 0.0 ? w : 1.0;
        local[j] = {0.0, w > 0.0 ? 1.0 : 0.0};
    }

    std::vector<Constraint> constraints;
    for (const auto& c : problem.constraints())
        constraints.push_back(drop_negligible(c, substitute(c.body, offset, slope)));
    const Problem shifted({}, local, substitute(problem.objective(), offset, slope), std::move(constraints));
    if (shifted.degree() != problem.degree())
        throw std::logic_error("solve_relaxation: substitution changed the degree");
    Box unit;
    for (const auto& b : local) {
        unit.lower.push_back(b.lower);
        unit.upper.push_back(b.upper);
    }
    const auto rel = linearize(shifted, unit, dictionary);
    const auto lp = solve_lp(rel.lp, tol);

    RelaxationSolution out;
    out.status = lp.status;
    out.iterations = lp.iterations;
    if (lp.status != LpStatus::Optimal)
        return out;
    out.objective = lp.objective;
    const auto& dict = *dictionary;
    out.primal.resize(dict.size());
    for (std::size_t k = 0; k < dict.size(); ++k) {
        double v = 0.0;
        for (const auto& [support, coef] : substitute(dict.column(k), offset, slope))
            v += coef * (support.empty() ? 1.0 : lp.primal[dict.at(support)]);
        out.primal[k] = v;
    }
    for (std::size_t j = 0; j < n; ++j)
        out.primal[j] = std::clamp(out.primal[j], box.lower[j], box.upper[j]);
    out.constraint_duals.assign(lp.duals.begin(),
                                lp.duals.begin() + static_cast<std::ptrdiff_t>(problem.num_constraints()));
    return out;
}

Relaxation linearize(const Problem& problem, const Box& box)
{
    return linearize(problem, box, std::make_shared<const RltDictionary>(collect_dictionary(problem)));
}

std::vector<std::string> Relaxation::row_names(const Problem& problem) const
{
    std::vector<std::string> names;
    std::size_t bf = 0;
    for (const auto& tag : row_origin) {
        if (tag.origin == RowOrigin::Original)
            names.push_back(problem.constraints()[tag.index].name);
        else
            names.push_back("bf" + std::to_string(++bf));
    }
    return names;
}

std::string Relaxation::dump(const Problem& problem) const
{
    std::vector<std::string> cols;
    for (std::size_t k = 0; k < dictionary->size(); ++k)
        cols.push_back(dictionary->column_name(k));
    return lp_text(lp, cols, row_names(problem));
}

std::vector<double> lift(const RltDictionary& dictionary, std::span<const double> x)
{
    std::vector<double> out(dictionary.size());
    for (std::size_t k = 0; k < dictionary.size(); ++k)
        out[k] = monomial_value(dictionary.column(k), x);
    return out;
}

std::vector<ViolationTerm> violation_terms(const Relaxation& relaxation, std::span<const double> primal)
{
    return violation_terms(*relaxation.dictionary, primal);
}

std::vector<ViolationTerm> violation_terms(const RltDictionary& dict, std::span<const double> primal)
{
    std::vector<ViolationTerm> terms;
    for (std::size_t k = dict.num_vars(); k < dict.size(); ++k) {
        const auto& col = dict.column(k);
        if (col.degree() < 2)
            continue;
        for (const auto& e : col.entries()) {
            const auto rest = dict.find(col.without(e.var));
            if (!rest)
                continue;
            const double v = std::abs(primal[k] - primal[e.var] * primal[*rest]);
            terms.push_back({e.var, *rest, k, v});
        }
    }
    return terms;
}

} // namespace splab
