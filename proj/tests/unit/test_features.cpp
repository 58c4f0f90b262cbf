#include "doctest.h"

#include "splab/features.hpp"
#include "splab/generator.hpp"
#include "splab/instance_io.hpp"
#include "splab/rng.hpp"

#include <algorithm>
#include <numeric>
#include <set>

using namespace splab;

namespace {

Polynomial relabel(const Polynomial& p, const std::vector<VarIndex>& perm, double scale)
{
    std::vector<Monomial> terms;
    for (const auto& t : p.terms()) {
        std::vector<MultisetEntry> e;
        for (const auto& x : t.support.entries())
            e.push_back({perm[x.var], x.mult});
        terms.push_back({scale * t.coefficient, Multiset::from_entries(e)});
    }
    return Polynomial(terms, p.constant());
}

// Same problem with variables renamed by perm, constraints reversed and all
// monomial coefficients multiplied by scale.
Problem transform(const Problem& p, const std::vector<VarIndex>& perm, double scale)
{
    const std::size_t n = p.num_vars();
    std::vector<Bounds> bounds(n);
    std::vector<std::string> names(n);
    for (std::size_t j = 0; j < n; ++j) {
        bounds[perm[j]] = p.bounds()[j];
        names[perm[j]] = p.var_names()[j];
    }
    std::vector<Constraint> cons;
    for (const auto& c : p.constraints())
        cons.push_back({c.name, relabel(c.body, perm, scale), c.relation, c.rhs});
    std::reverse(cons.begin(), cons.end());
    return Problem(names, bounds, relabel(p.objective(), perm, scale), cons);
}

} // namespace

TEST_CASE("schema")
{
    CHECK(feature_names().size() == 34);
    const auto& names = feature_names();
    CHECK(std::set<std::string_view>(names.begin(), names.end()).size() == 34);
    CHECK(feature_schema_hash() == feature_schema_hash());
    CHECK_THROWS_AS(FeatureVector{}.at("nope"), std::out_of_range);
}

TEST_CASE("bilinear example counted by hand")
{
    const auto f = extract_features(
        parse_problem("var x1 in [0,1]; var x2 in [0,1]; min: x1*x2; st c1: x1 + x2 >= 1"));
    CHECK(f.at("num_vars") == 2);
    CHECK(f.at("var_density_variance") == 0.0);
    CHECK(f.at("range_mean") == 1.0);
    CHECK(f.at("range_median") == 1.0);
    CHECK(f.at("range_variance") == 0.0);
    CHECK(f.at("var_appearance_mean") == 2.0);
    CHECK(f.at("var_appearance_variance") == 0.0);
    CHECK(f.at("frac_vars_not_in_deg_gt1") == 0.0);
    CHECK(f.at("frac_vars_not_in_deg_gt2") == 1.0);
    CHECK(f.at("num_constraints") == 1);
    CHECK(f.at("frac_equality_constraints") == 0.0);
    CHECK(f.at("frac_linear_constraints") == 1.0);
    CHECK(f.at("frac_quadratic_constraints") == 0.0);
    CHECK(f.at("num_monomials") == 3);
    CHECK(f.at("frac_linear_monomials") == doctest::Approx(2.0 / 3.0));
    CHECK(f.at("frac_quadratic_monomials") == doctest::Approx(1.0 / 3.0));
    CHECK(f.at("frac_linear_rlt_vars") == doctest::Approx(0.4));
    CHECK(f.at("frac_quadratic_rlt_vars") == doctest::Approx(0.6));
    CHECK(f.at("mean_monomial_coverage") == doctest::Approx(0.5));
    CHECK(f.at("coef_mean") == 1.0);
    CHECK(f.at("coef_variance") == 0.0);
    CHECK(f.at("degree") == 2);
    CHECK(f.at("po_density") == doctest::Approx(0.6));
    CHECK(f.at("vars_per_constraint") == 2.0);
    CHECK(f.at("vars_per_degree") == 1.0);
    CHECK(f.at("rlt_vars_per_constraint") == 5.0);
    CHECK(f.at("monomials_per_constraint") == 3.0);
    CHECK(f.at("vig_density") == 1.0);
    CHECK(f.at("vig_modularity") == doctest::Approx(0.0));
    CHECK(f.at("vig_treewidth_ub") == 1.0);
    CHECK(f.at("vig_transitivity") == 0.0);
    CHECK(f.at("cmig_density") == doctest::Approx(0.3));
    // Components {obj, x1x2} and {c1, x1, x2}: 1/3 - 1/9 + 2/3 - 4/9.
    CHECK(f.at("cmig_modularity") == doctest::Approx(4.0 / 9.0));
    CHECK(f.at("cmig_treewidth_ub") == 1.0);
    CHECK(f.quality_flags.empty());
}

TEST_CASE("linear and symmetric problems")
{
    const auto lin = extract_features(parse_problem("var a in [0,2]; var b in [1,2]; min: a + b; st c: a - b >= -1"));
    CHECK(lin.at("frac_vars_not_in_deg_gt1") == 1.0);
    CHECK(lin.at("frac_quadratic_monomials") == 0.0);
    CHECK(lin.at("range_mean") == 1.5);
    CHECK(lin.at("range_variance") == doctest::Approx(0.25));
    CHECK_FALSE(lin.quality_flags.empty()); // VIG has no edges

    const auto sym = extract_features(parse_problem(
        "var a in [0,1]; var b in [0,1]; var c in [0,1]; min: a + b + c; st r1: a + b*c >= 0; st r2: a*b + c >= 0"));
    CHECK(sym.at("var_appearance_variance") == 0.0);
    CHECK(sym.at("frac_quadratic_constraints") == 1.0);
}

TEST_CASE("permutation invariance and coefficient scaling")
{
    Rng rng(5);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = generate_random({.num_vars = 3 + seed % 3, .degree = static_cast<unsigned>(2 + seed % 2),
                                        .density = 0.4, .num_constraints = 3, .equality_fraction = 0.3,
                                        .seed = seed, .range_min = 0.5, .range_max = 3.0});
        const auto& p = g.problem;
        std::vector<VarIndex> perm(p.num_vars());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.index(i)]);
        const auto base = extract_features(p);
        // Greedy modularity and min-fill break ties by node index, so only
        // their bounds are label-free.
        const auto moved = extract_features(transform(p, perm, 1.0));
        for (std::size_t i = 0; i < kNumFeatures; ++i) {
            const auto name = feature_names()[i];
            CAPTURE(name);
            if (name.ends_with("modularity"))
                CHECK(moved[i] <= 1.0);
            else if (name == "vig_treewidth_ub")
                CHECK(moved[i] <= moved.at("num_vars") - 1);
            else if (name == "cmig_treewidth_ub")
                CHECK(moved[i] <= moved.at("num_monomials") + moved.at("num_constraints"));
            else
                CHECK(moved[i] == doctest::Approx(base[i]).epsilon(1e-12));
        }
        std::vector<VarIndex> identity(p.num_vars());
        std::iota(identity.begin(), identity.end(), 0);
        auto scaled_problem = transform(transform(p, identity, -2.5), identity, 1.0); // constraint order restored
        const auto scaled = extract_features(scaled_problem);
        for (std::size_t i = 0; i < kNumFeatures; ++i) {
            CAPTURE(feature_names()[i]);
            if (feature_names()[i] == "coef_mean")
                CHECK(scaled[i] == doctest::Approx(-2.5 * base[i]).epsilon(1e-12));
            else if (feature_names()[i] == "coef_variance")
                CHECK(scaled[i] == doctest::Approx(6.25 * base[i]).epsilon(1e-12));
            else
                CHECK(scaled[i] == doctest::Approx(base[i]).epsilon(1e-12));
        }
        for (double v : base.values)
            CHECK(std::isfinite(v));
        for (auto name : {"frac_equality_constraints", "frac_linear_monomials", "po_density", "vig_density",
                          "cmig_density", "vig_transitivity"}) {
            CHECK(base.at(name) >= 0.0);
            CHECK(base.at(name) <= 1.0);
        }
    }
}

TEST_CASE("CSV round trip is exact")
{
    const auto g = generate_random({.num_vars = 4, .degree = 3, .density = 0.3, .num_constraints = 2, .seed = 3});
    const auto f = extract_features(g.problem);
    const std::string text = feature_csv_header() + "\n" + feature_csv_row("inst-1", "fam", f) + "\n";
    const auto rows = parse_feature_csv(text);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].instance == "inst-1");
    CHECK(rows[0].family == "fam");
    CHECK(rows[0].features.values == f.values);
    CHECK_THROWS_AS(parse_feature_csv("instance,family\n"), std::invalid_argument);
}
