#include "doctest.h"

#include "splab/generator.hpp"
#include "splab/instance_io.hpp"
#include "splab/problem.hpp"

#include <cmath>

using namespace splab;

namespace {

Multiset ms(std::initializer_list<VarIndex> vars)
{
    std::vector<VarIndex> v(vars);
    return Multiset::from_vars(v);
}

} // namespace

TEST_CASE("multiset canonical form and ordering")
{
    CHECK(ms({2, 0, 2}) == ms({0, 2, 2}));
    CHECK(ms({0, 2, 2}).degree() == 3);
    CHECK(ms({0, 2, 2}).multiplicity(2) == 2);
    CHECK(ms({0, 1}).with(1) == ms({0, 1, 1}));
    CHECK(ms({0, 1, 1}).without(1) == ms({0, 1}));
    CHECK_THROWS_AS(ms({0}).without(3), std::invalid_argument);
    CHECK(ms({5}) < ms({0, 0}));          // degree first
    CHECK(ms({0, 1}) < ms({0, 2}));
    CHECK(ms({0, 1}) * ms({1}) == ms({0, 1, 1}));
    CHECK(ms({0, 1}).hash() == ms({1, 0}).hash());
}

TEST_CASE("monomial enumeration counts")
{
    CHECK(enumerate_monomials(2, 2).size() == 5);
    CHECK(enumerate_monomials(3, 3).size() == 19);
    CHECK(count_monomials(3, 3) == 19);
    CHECK(count_monomials(10, 4) == 1000);
    const auto all = enumerate_monomials(4, 3);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(all.size() == count_monomials(4, 3));
}

TEST_CASE("parse the basic bilinear instance")
{
    const auto p = parse_problem("var x1 in [0,1]; var x2 in [0,1]; min: x1*x2; st c1: x1 + x2 >= 0.5");
    CHECK(p.num_vars() == 2);
    CHECK(p.degree() == 2);
    REQUIRE(p.num_constraints() == 1);
    CHECK(p.constraints()[0].relation == Relation::GreaterEqual);
    CHECK(p.constraints()[0].rhs == 0.5);
    REQUIRE(p.objective().terms().size() == 1);
    CHECK(p.objective().terms()[0].support == ms({0, 1}));
}

TEST_CASE("duplicate terms are merged")
{
    const auto p = parse_problem("var x1 in [0, 1]\nmin: 2 x1 + 3 x1 - x1\nst c: x1 >= 0\n");
    REQUIRE(p.objective().terms().size() == 1);
    CHECK(p.objective().terms()[0].coefficient == 4.0);
    CHECK(p.objective().terms()[0].support == ms({0}));

    const auto q = parse_problem("var x1 in [0, 1]\nmin: x1 - x1 + 2\nst c: x1 >= 0\n");
    CHECK(q.objective().terms().empty());
    CHECK(q.objective().constant() == 2.0);
}

TEST_CASE("parser normalizes max and <= and folds constants")
{
    const auto p = parse_problem(R"(
        # a comment
        var a in [0, 2]
        var b in [1, 3]   # trailing comment
        max: a*b^2 + 1
        st lo: a + b + 1 <= 4
        st eq: 2*a*b = 1.5e0
    )");
    CHECK(p.objective().constant() == -1.0);
    CHECK(p.objective().terms()[0].coefficient == -1.0);
    CHECK(p.objective().terms()[0].support == ms({0, 1, 1}));
    CHECK(p.degree() == 3);
    const auto& lo = p.constraints()[0];
    CHECK(lo.relation == Relation::GreaterEqual);
    CHECK(lo.rhs == -3.0);
    CHECK(lo.body.terms()[0].coefficient == -1.0);
    CHECK(p.constraints()[1].relation == Relation::Equal);
}

TEST_CASE("parse errors carry positions")
{
    try {
        parse_problem("var x1 in [2,1]\nmin: x1\nst c: x1 >= 0\n");
        FAIL("expected a bound-order error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("lower bound exceeds") != std::string::npos);
    }
    CHECK_THROWS_WITH_AS(parse_problem("var x1 in [-1, 1]\nmin: x1\nst c: x1 >= 0"),
                         doctest::Contains("negative lower bound"), ParseError);
    CHECK_THROWS_WITH_AS(parse_problem("var x1 in [0, 1]\nmin: x1*y\nst c: x1 >= 0"),
                         doctest::Contains("without declaration"), ParseError);
    CHECK_THROWS_WITH_AS(parse_problem("var x1 in [0, 1]\nmin: x1\n"), doctest::Contains("no constraints"),
                         ParseError);
    try {
        parse_problem("var x1 in [0, 1]\nmin: x1 +\nst c: x1 >= 0\n");
        FAIL("expected a syntax error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 10);
    }
    CHECK_THROWS_AS(parse_problem("var x1 in [0, 1]\nmin: x1\nst c: x1 > 0\n"), ParseError);
    CHECK_THROWS_AS(parse_problem("var x1 in [0, 1]\nfoo x1\n"), ParseError);
}

TEST_CASE("fixed variables are accepted")
{
    const auto p = parse_problem("var x1 in [0.5, 0.5]\nmin: x1\nst c: x1 >= 0\n");
    CHECK(p.bounds()[0].range() == 0.0);
}

TEST_CASE("evaluate")
{
    const auto p = parse_problem("var x1 in [0,1]; var x2 in [0,3]; min: 2 x1^2 x2 - x2 + 1; st c: x1*x2 >= 0");
    const std::vector<double> pt{1.0, 2.0};
    CHECK(p.evaluate_objective(pt) == 3.0);
    const std::vector<double> half{0.5, 0.5};
    CHECK(p.constraints()[0].body.evaluate(half, 2) == 0.25);
    const std::vector<double> zeros{0.0, 0.0};
    CHECK(p.evaluate_objective(zeros) == 1.0);
    const std::vector<double> wrong{1.0};
    CHECK_THROWS_AS(p.evaluate_objective(wrong), std::invalid_argument);
}

TEST_CASE("check_feasible")
{
    const auto p = parse_problem("var x1 in [0,1]; var x2 in [0,1]; min: x1*x2; st c1: x1 + x2 >= 0.5");
    const std::vector<double> interior{0.5, 0.5};
    auto r = check_feasible(p, interior, 1e-6);
    CHECK(r.feasible);
    CHECK(r.max_violation == 0.0);
    CHECK(r.violated.empty());

    const std::vector<double> violating{0.1, 0.2};
    r = check_feasible(p, violating, 1e-6);
    CHECK_FALSE(r.feasible);
    CHECK(r.max_violation == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r.violated == std::vector<std::size_t>{0});

    const std::vector<double> boundary{0.25, 0.25};
    CHECK(check_feasible(p, boundary, 1e-6).feasible);

    const std::vector<double> outside{1.5, 0.5};
    r = check_feasible(p, outside, 1e-6);
    CHECK_FALSE(r.in_box);
    CHECK_FALSE(r.feasible);
}

TEST_CASE("generator: full density and determinism")
{
    GeneratorSpec spec{.num_vars = 2, .degree = 2, .density = 1.0, .num_constraints = 1, .seed = 7};
    const auto a = generate_random(spec);
    const auto b = generate_random(spec);
    CHECK(a.problem.objective().terms().size() == 5);
    CHECK(a.problem == b.problem);
    CHECK(a.anchor == b.anchor);
    spec.seed = 8;
    CHECK_FALSE(generate_random(spec).problem == a.problem);

    GeneratorSpec tiny{.num_vars = 2, .degree = 2, .density = 0.05, .num_constraints = 1};
    CHECK_THROWS_AS(generate_random(tiny), ModelError);
}

TEST_CASE("generator: anchors are feasible and the instance round-trips")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GeneratorSpec spec{.num_vars = 2 + seed % 4,
                           .degree = static_cast<unsigned>(2 + seed % 3),
                           .density = 0.2 + 0.1 * static_cast<double>(seed % 8),
                           .num_constraints = 1 + seed % 4,
                           .equality_fraction = (seed % 3 == 0) ? 0.5 : 0.0,
                           .seed = seed,
                           .range_min = 0.5,
                           .range_max = 3.0,
                           .family = seed % 2 ? "fam-a" : ""};
        const auto g = generate_random(spec);
        const auto report = check_feasible(g.problem, g.anchor, 1e-9);
        CHECK_MESSAGE(report.feasible, "seed " << seed);

        const auto text = render_problem(g.problem);
        const auto back = parse_problem(text);
        CHECK_MESSAGE(back == g.problem, "seed " << seed << "\n" << text);

        unsigned deg = g.problem.objective().degree();
        for (const auto& c : g.problem.constraints())
            for (const auto& t : c.body.terms())
                deg = std::max(deg, t.support.degree());
        CHECK(g.problem.degree() == deg);
    }
}

TEST_CASE("generator: decoy and coupling variables")
{
    const GeneratorSpec base{.num_vars = 3, .degree = 2, .density = 0.5, .num_constraints = 2, .seed = 12};
    GeneratorSpec spec = base;
    spec.decoy_vars = 3;
    spec.decoy_pairs = true;
    spec.coupling_vars = 2;
    const auto plain = generate_random(base);
    const auto g = generate_random(spec);
    REQUIRE(g.problem.num_vars() == 8);
    CHECK(check_feasible(g.problem, g.anchor, 1e-9).feasible);

    // The constrained part is unchanged and the extras stay out of the constraints.
    for (std::size_t r = 0; r < base.num_constraints; ++r)
        CHECK(g.problem.constraints()[r] == plain.problem.constraints()[r]);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(g.problem.bounds()[j] == plain.problem.bounds()[j]);
    for (std::size_t j = 3; j < 6; ++j) {
        CHECK(g.problem.bounds()[j].upper >= 50.0);
        CHECK(g.problem.bounds()[j].upper <= 100.0);
    }
    for (std::size_t j = 6; j < 8; ++j)
        CHECK(g.problem.bounds()[j].upper == 1.0);

    // Each decoy square c x^2 - c a x over [0, u] has a secant-tangent gap c u^2 / 4.
    for (const auto& t : g.problem.objective().terms()) {
        const auto e = t.support.entries();
        if (e.size() == 1 && e[0].mult == 2 && e[0].var >= 3 && e[0].var < 6) {
            const double u = g.problem.bounds()[e[0].var].upper;
            CHECK(t.coefficient * u * u / 4.0 == doctest::Approx(spec.decoy_gap));
        }
    }
    CHECK(render_problem(parse_problem(render_problem(g.problem))) == render_problem(g.problem));
}
