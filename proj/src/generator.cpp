#include "splab/generator.hpp"

#include "splab/rng.hpp"

#include <cmath>
#include <numeric>

namespace splab {

namespace {

Polynomial random_polynomial(const std::vector<Multiset>& pool, std::size_t count, Rng& rng)
{
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<Monomial> terms;
    terms.reserve(count);
    // Partial Fisher-Yates: the first `count` slots are a uniform sample
    // without replacement.
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t k = i + rng.index(pool.size() - i);
        std::swap(order[i], order[k]);
        double coef = 0.0;
        while (coef == 0.0)
            coef = rng.uniform(-1.0, 1.0);
        terms.push_back({coef, pool[order[i]]});
    }
    return Polynomial(std::move(terms));
}

} // namespace

GeneratedProblem generate_random(const GeneratorSpec& spec)
{
    if (spec.num_vars < 1)
        throw ModelError("generator: need at least one variable");
    if (spec.degree < 2)
        throw ModelError("generator: degree must be at least 2");
    if (spec.num_constraints < 1)
        throw ModelError("generator: need at least one constraint");
    if (!(spec.density > 0.0 && spec.density <= 1.0))
        throw ModelError("generator: density must lie in (0, 1]");
    if (!(spec.range_min >= 0.0 && spec.range_min <= spec.range_max))
        throw ModelError("generator: invalid range interval");
    if (spec.decoy_vars > 0 && !(spec.decoy_range > 0.0 && spec.decoy_gap > 0.0))
        throw ModelError("generator: decoys need a positive range and gap");

    const auto pool = enumerate_monomials(spec.num_vars, spec.degree);
    const auto count = static_cast<std::size_t>(std::llround(spec.density * static_cast<double>(pool.size())));
    if (count == 0)
        throw ModelError("generator: density selects zero monomials");

    Rng rng(spec.seed);
    std::vector<Bounds> bounds(spec.num_vars);
    for (auto& b : bounds)
        b = {0.0, rng.uniform(spec.range_min, spec.range_max)};
    std::vector<double> anchor(spec.num_vars);
    for (std::size_t j = 0; j < spec.num_vars; ++j)
        anchor[j] = rng.uniform(bounds[j].lower, bounds[j].upper);

    Polynomial objective = random_polynomial(pool, count, rng);
    const auto num_eq = static_cast<std::size_t>(
        std::llround(spec.equality_fraction * static_cast<double>(spec.num_constraints)));
    std::vector<Constraint> constraints;
    for (std::size_t r = 0; r < spec.num_constraints; ++r) {
        Polynomial body = random_polynomial(pool, count, rng);
        const double value = body.evaluate(anchor, spec.num_vars);
        const bool equality = r + num_eq >= spec.num_constraints;
        const double slack = equality ? 0.0 : rng.uniform();
        constraints.push_back({"c" + std::to_string(r + 1), std::move(body),
                               equality ? Relation::Equal : Relation::GreaterEqual, value - slack});
    }
    if (spec.decoy_vars + spec.coupling_vars > 0) {
        PolynomialBuilder extended;
        extended.add_constant(objective.constant());
        for (const auto& t : objective.terms())
            extended.add(t.support, t.coefficient);
        const std::size_t first_decoy = spec.num_vars;
        for (std::size_t k = 0; k < spec.decoy_vars; ++k) {
            const auto v = static_cast<VarIndex>(first_decoy + k);
            const double u = rng.uniform(0.5 * spec.decoy_range, spec.decoy_range);
            // min over [0, u] of x^2 - a x has relaxation gap u^2 / 4.
            const double c = 4.0 * spec.decoy_gap / (u * u);
            bounds.push_back({0.0, u});
            anchor.push_back(0.5 * u);
            extended.add(Multiset::singleton(v).with(v), c);
            extended.add(Multiset::singleton(v), -c * u * rng.uniform(0.3, 0.7));
            if (spec.decoy_pairs)
                for (std::size_t q = 0; q < k; ++q)
                    extended.add(Multiset::singleton(v).with(static_cast<VarIndex>(first_decoy + q)),
                                 rng.uniform() < 0.5 ? -c : c);
        }
        const std::size_t first_coupling = first_decoy + spec.decoy_vars;
        for (std::size_t k = 0; k < spec.coupling_vars; ++k) {
            const auto v = static_cast<VarIndex>(first_coupling + k);
            bounds.push_back({0.0, 1.0});
            anchor.push_back(0.5);
            extended.add(Multiset::singleton(v), rng.uniform(-1.0, 1.0));
            for (std::size_t q = 0; q < k; ++q)
                extended.add(Multiset::singleton(v).with(static_cast<VarIndex>(first_coupling + q)),
                             -spec.coupling_weight * rng.uniform(0.5, 1.0));
        }
        objective = extended.build();
    }
    return {Problem({}, std::move(bounds), std::move(objective), std::move(constraints), spec.family),
            std::move(anchor)};
}

} // namespace splab
