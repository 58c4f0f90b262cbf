#include "splab/features.hpp"

#include "splab/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace splab {

namespace {

constexpr std::array<std::string_view, kNumFeatures> kNames = {
    // variables
    "num_vars",
    "var_density_variance",
    "range_mean",
    "range_median",
    "range_variance",
    "var_appearance_mean",
    "var_appearance_variance",
    "frac_vars_not_in_deg_gt1",
    "frac_vars_not_in_deg_gt2",
    // constraints
    "num_constraints",
    "frac_equality_constraints",
    "frac_linear_constraints",
    "frac_quadratic_constraints",
    // monomials
    "num_monomials",
    "frac_linear_monomials",
    "frac_quadratic_monomials",
    "frac_linear_rlt_vars",
    "frac_quadratic_rlt_vars",
    "mean_monomial_coverage",
    // coefficients
    "coef_mean",
    "coef_variance",
    // other
    "degree",
    "po_density",
    "vars_per_constraint",
    "vars_per_degree",
    "rlt_vars_per_constraint",
    "monomials_per_constraint",
    // graphs
    "vig_density",
    "vig_modularity",
    "vig_treewidth_ub",
    "vig_transitivity",
    "cmig_density",
    "cmig_modularity",
    "cmig_treewidth_ub",
};

double mean(const std::vector<double>& v)
{
    if (v.empty())
        return 0.0;
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

// Population variance.
double variance(const std::vector<double>& v)
{
    if (v.empty())
        return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

double median(std::vector<double> v)
{
    if (v.empty())
        return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double ratio(double num, double den)
{
    return den == 0.0 ? 0.0 : num / den;
}

class Builder {
public:
    void set(std::string_view name, double value)
    {
        const auto it = std::find(kNames.begin(), kNames.end(), name);
        if (it == kNames.end())
            throw std::logic_error("unknown feature " + std::string(name));
        out_.values[static_cast<std::size_t>(it - kNames.begin())] = value;
    }
    void flag(std::string what) { out_.quality_flags.push_back(std::move(what)); }
    FeatureVector take() { return std::move(out_); }

private:
    FeatureVector out_;
};

} // namespace

const std::array<std::string_view, kNumFeatures>& feature_names()
{
    return kNames;
}

std::uint64_t feature_schema_hash()
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto name : kNames) {
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        h ^= ',';
        h *= 0x100000001b3ULL;
    }
    return h;
}

double FeatureVector::at(std::string_view name) const
{
    const auto it = std::find(kNames.begin(), kNames.end(), name);
    if (it == kNames.end())
        throw std::out_of_range("unknown feature " + std::string(name));
    return values[static_cast<std::size_t>(it - kNames.begin())];
}

FeatureVector extract_features(const Problem& problem)
{
    Builder f;
    const std::size_t n = problem.num_vars();
    const std::size_t R = problem.num_constraints();
    const unsigned delta = problem.degree();
    const double dn = static_cast<double>(n), dR = static_cast<double>(R);

    std::vector<const Polynomial*> polys;
    for (const auto& c : problem.constraints())
        polys.push_back(&c.body);
    polys.push_back(&problem.objective());

    std::set<Multiset> monomials;
    std::vector<double> coefficients;
    for (const auto* p : polys)
        for (const auto& t : p->terms()) {
            monomials.insert(t.support);
            coefficients.push_back(t.coefficient);
        }
    const double M = static_cast<double>(monomials.size());

    // Variables.
    std::vector<double> density(n, 0.0), appearances(n, 0.0), ranges(n);
    std::vector<bool> in_deg2(n, false), in_deg3(n, false);
    for (const auto& m : monomials)
        for (const auto& e : m.entries()) {
            density[e.var] += 1.0;
            if (m.degree() > 1)
                in_deg2[e.var] = true;
            if (m.degree() > 2)
                in_deg3[e.var] = true;
        }
    for (double& d : density)
        d = ratio(d, M);
    for (const auto* p : polys) {
        std::vector<bool> seen(n, false);
        for (const auto& t : p->terms())
            for (const auto& e : t.support.entries())
                seen[e.var] = true;
        for (std::size_t j = 0; j < n; ++j)
            appearances[j] += seen[j] ? 1.0 : 0.0;
    }
    for (std::size_t j = 0; j < n; ++j)
        ranges[j] = problem.bounds()[j].range();
    f.set("num_vars", dn);
    f.set("var_density_variance", variance(density));
    f.set("range_mean", mean(ranges));
    f.set("range_median", median(ranges));
    f.set("range_variance", variance(ranges));
    f.set("var_appearance_mean", mean(appearances));
    f.set("var_appearance_variance", variance(appearances));
    f.set("frac_vars_not_in_deg_gt1",
          static_cast<double>(std::count(in_deg2.begin(), in_deg2.end(), false)) / dn);
    f.set("frac_vars_not_in_deg_gt2",
          static_cast<double>(std::count(in_deg3.begin(), in_deg3.end(), false)) / dn);

    // Constraints.
    double equalities = 0.0, linear = 0.0, quadratic = 0.0;
    for (const auto& c : problem.constraints()) {
        equalities += c.relation == Relation::Equal ? 1.0 : 0.0;
        const unsigned d = c.body.degree();
        linear += d <= 1 ? 1.0 : 0.0;
        quadratic += d == 2 ? 1.0 : 0.0;
    }
    f.set("num_constraints", dR);
    f.set("frac_equality_constraints", equalities / dR);
    f.set("frac_linear_constraints", linear / dR);
    f.set("frac_quadratic_constraints", quadratic / dR);

    // Monomials.
    double linear_m = 0.0, quadratic_m = 0.0;
    for (const auto& m : monomials) {
        linear_m += m.degree() == 1 ? 1.0 : 0.0;
        quadratic_m += m.degree() == 2 ? 1.0 : 0.0;
    }
    const double dict = static_cast<double>(count_monomials(n, delta));
    const double dict_quadratic = delta >= 2 ? static_cast<double>(binomial(n + 1, 2)) : 0.0;
    std::vector<double> coverage;
    for (const auto* p : polys)
        coverage.push_back(ratio(static_cast<double>(p->terms().size()), M));
    if (monomials.empty())
        f.flag("monomials: problem has no monomials");
    f.set("num_monomials", M);
    f.set("frac_linear_monomials", ratio(linear_m, M));
    f.set("frac_quadratic_monomials", ratio(quadratic_m, M));
    f.set("frac_linear_rlt_vars", ratio(delta >= 1 ? dn : 0.0, dict));
    f.set("frac_quadratic_rlt_vars", ratio(dict_quadratic, dict));
    f.set("mean_monomial_coverage", mean(coverage));

    // Coefficients.
    if (coefficients.empty())
        f.flag("coefficients: no monomial coefficients");
    f.set("coef_mean", mean(coefficients));
    f.set("coef_variance", variance(coefficients));

    // Other.
    if (delta == 0)
        f.flag("other: degree is 0");
    f.set("degree", static_cast<double>(delta));
    f.set("po_density", ratio(M, dict));
    f.set("vars_per_constraint", dn / dR);
    f.set("vars_per_degree", ratio(dn, static_cast<double>(delta)));
    f.set("rlt_vars_per_constraint", dict / dR);
    f.set("monomials_per_constraint", M / dR);

    // Graphs.
    const auto vig = build_vig(problem);
    const auto cmig = build_cmig(problem);
    if (vig.edges().empty())
        f.flag("graphs: variables intersection graph has no edges");
    f.set("vig_density", edge_density(vig));
    f.set("vig_modularity", modularity_greedy(vig));
    f.set("vig_treewidth_ub", static_cast<double>(treewidth_ub(vig)));
    f.set("vig_transitivity", transitivity(vig));
    f.set("cmig_density", edge_density(cmig.graph));
    f.set("cmig_modularity", modularity_greedy(cmig.graph));
    f.set("cmig_treewidth_ub", static_cast<double>(treewidth_ub(cmig.graph)));
    return f.take();
}

std::string feature_csv_header()
{
    std::string out = "instance,family";
    for (auto name : kNames) {
        out += ',';
        out += name;
    }
    return out;
}

std::string feature_csv_row(const std::string& instance, const std::string& family, const FeatureVector& f)
{
    std::string out = instance + ',' + family;
    char buf[64];
    for (double v : f.values) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        out += ',';
        out.append(buf, ptr);
    }
    return out;
}

std::vector<FeatureRow> parse_feature_csv(std::string_view text)
{
    std::vector<FeatureRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != feature_csv_header())
        throw std::invalid_argument("feature CSV: header does not match the feature schema");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string_view> cells;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            cells.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (cells.size() != kNumFeatures + 2)
            throw std::invalid_argument("feature CSV: wrong column count in row " + std::to_string(rows.size() + 1));
        FeatureRow row{std::string(cells[0]), std::string(cells[1]), {}};
        for (std::size_t i = 0; i < kNumFeatures; ++i) {
            const auto cell = cells[i + 2];
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), row.features.values[i]);
            if (ec != std::errc{} || ptr != cell.data() + cell.size())
                throw std::invalid_argument("feature CSV: bad value '" + std::string(cell) + "'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace splab
