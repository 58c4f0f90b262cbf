// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code
// is nonzero when any selected criterion fails.
//
//     acceptance [--criterion N]... [--suite DIR] [--work DIR] [--workers K]

#include "splab/branching.hpp"
#include "splab/graph.hpp"
#include "splab/harness.hpp"
#include "splab/instance_io.hpp"
#include "splab/learn.hpp"
#include "splab/pace.hpp"
#include "splab/rlt.hpp"
#include "splab/rng.hpp"
#include "splab/sbb.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace splab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Checker {
public:
    void expect(bool ok, const std::string& what)
    {
        if (ok)
            return;
        ++failures_;
        if (failures_ <= 5)
            std::cerr << "  fail: " << what << '\n';
    }
    int failures() const { return failures_; }

private:
    int failures_ = 0;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Relative difference measured in units of the double epsilon.
double ulps(double a, double b)
{
    if (a == b)
        return 0.0;
    return std::abs(a - b) / (std::max(std::abs(a), std::abs(b)) * std::numeric_limits<double>::epsilon());
}

struct OracleRow {
    std::string instance;
    double value;
};

std::vector<OracleRow> read_oracle(const fs::path& suite)
{
    std::ifstream in(suite / "oracle.csv");
    if (!in)
        throw DataError("cannot open " + (suite / "oracle.csv").string());
    std::vector<OracleRow> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string name, value;
        std::getline(ss, name, ',');
        std::getline(ss, value, ',');
        rows.push_back({name, std::stod(value)});
    }
    return rows;
}

// 1. Every rule closes the suite to the gap tolerance at the oracle value.
Outcome solver_correctness(const fs::path& suite)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto oracle = read_oracle(suite);
    SolveLimits limits;
    limits.time = 60.0;
    limits.gap_tol = 1e-4;
    Checker c;
    double worst_err = 0.0, worst_gap = 0.0;
    for (const auto& row : oracle) {
        const Problem p = read_problem(suite / row.instance);
        for (RuleId rule : kAllRules) {
            const auto t = solve(p, rule, limits);
            const std::string tag = row.instance + "/" + std::string(rule_name(rule));
            c.expect(t.status == SolveStatus::Solved, tag + " not solved");
            if (!t.ub_fin) {
                c.expect(false, tag + " has no incumbent");
                continue;
            }
            const double gap = relative_gap(t.lb_fin, t.ub_fin);
            const double err = std::abs(*t.ub_fin - row.value);
            worst_gap = std::max(worst_gap, gap);
            worst_err = std::max(worst_err, err);
            c.expect(gap <= 1e-4, tag + " gap " + fmt("%.3g", gap));
            c.expect(err <= 1e-2, tag + " off oracle by " + fmt("%.3g", err));
        }
    }
    const double secs = seconds_since(t0);
    c.expect(oracle.size() == 25, "suite has " + std::to_string(oracle.size()) + " instances");
    c.expect(secs < 60.0, "runtime " + fmt("%.1f s", secs));
    return {c.failures() == 0, std::to_string(oracle.size()) + " instances x 6 rules, max gap " +
                                   fmt("%.2g", worst_gap) + ", max |ub - oracle| " + fmt("%.2g", worst_err) +
                                   ", " + fmt("%.1f s", secs)};
}

double row_activity(const LpRow& row, std::span<const double> x)
{
    double a = 0.0;
    for (const auto& [k, v] : row.coeffs)
        a += v * x[k];
    return a;
}

// 2. Lifted feasible points satisfy every relaxation row; root bounds stay below the oracle.
Outcome rlt_soundness(const fs::path& suite)
{
    Checker c;
    Rng rng(2024);
    std::size_t points = 0, rows_checked = 0, short_instances = 0;
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 200; ++k) {
        GeneratorSpec spec;
        spec.num_vars = 2 + k % 3;
        spec.degree = 2 + static_cast<unsigned>((k / 3) % 2);
        spec.density = 0.4 + 0.1 * static_cast<double>(k % 5);
        spec.num_constraints = 1 + k % 3;
        spec.range_min = 0.5;
        spec.range_max = 3.0;
        spec.seed = 50000 + k;
        const auto g = generate_random(spec);
        const Problem& p = g.problem;
        const auto rel = linearize(p, Box::of(p));
        const std::size_t n = p.num_vars();

        // Uniform draws first; the anchor neighbourhood, shrinking, when the
        // feasible set is thin.
        std::size_t found = 0;
        double radius = 1.0;
        for (int attempt = 0; attempt < 20000 && found < 50; ++attempt) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j) {
                const auto& b = p.bounds()[j];
                if (attempt < 500) {
                    x[j] = rng.uniform(b.lower, b.upper);
                } else {
                    const double w = radius * b.range();
                    x[j] = std::clamp(g.anchor[j] + rng.uniform(-w, w), b.lower, b.upper);
                }
            }
            if (attempt >= 500 && attempt % 100 == 0)
                radius *= 0.5;
            if (!check_feasible(p, x, 0.0).feasible)
                continue;
            ++found;
            const auto lifted = lift(*rel.dictionary, x);
            for (std::size_t r = 0; r < rel.lp.rows.size(); ++r) {
                const auto& row = rel.lp.rows[r];
                const double a = row_activity(row, lifted);
                double viol = std::max(0.0, row.rhs - a);
                if (row.sense == RowSense::Equal)
                    viol = std::max(viol, a - row.rhs);
                worst = std::max(worst, viol);
                ++rows_checked;
                c.expect(viol <= 1e-9, "seed " + std::to_string(spec.seed) + " row " + std::to_string(r) +
                                           " violated by " + fmt("%.3g", viol));
            }
        }
        points += found;
        if (found < 50)
            ++short_instances;
    }
    c.expect(short_instances == 0, std::to_string(short_instances) + " instances with fewer than 50 points");

    double min_margin = kInf;
    for (const auto& row : read_oracle(suite)) {
        const Problem p = read_problem(suite / row.instance);
        const auto root = root_info(p);
        c.expect(root.feasible, row.instance + " root infeasible");
        min_margin = std::min(min_margin, row.value - root.lb_init);
        // Where the relaxation is exact the two agree up to LP roundoff.
        c.expect(root.lb_init <= row.value + 1e-9, row.instance + " root bound " + fmt("%.10g", root.lb_init) +
                                                " above oracle " + fmt("%.10g", row.value));
    }
    return {c.failures() == 0, std::to_string(points) + " lifted points, " + std::to_string(rows_checked) +
                                   " row checks, max violation " + fmt("%.2g", worst) +
                                   "; min (oracle - root bound) " + fmt("%.3g", min_margin)};
}

// Two-variable context with columns x1, x2, X11, X12, X22.
struct Context {
    std::size_t n = 2;
    std::vector<ViolationTerm> terms;
    std::vector<double> primal{0.5, 0.5, 0.0, 0.0, 0.0};
    std::vector<double> duals{-2.0};
    Box box{{0.0, 0.0}, {1.0, 1.0}};
    Box root{{0.0, 0.0}, {1.0, 1.0}};
    std::vector<double> vig{0.3, 0.6};
    std::vector<double> cmig{0.8, 0.0};
    MembershipIndex membership{{}, {}, {}, {0}, {}};

    NodeContext ctx() const { return {n, terms, primal, duals, &box, &root, vig, cmig, &membership}; }
};

// 3. Hand examples for each rule; argmax invariant under weight scaling.
Outcome rule_fidelity()
{
    Checker c;
    int examples = 0;
    auto same = [&](const std::vector<double>& got, const std::vector<double>& want, const std::string& what) {
        ++examples;
        c.expect(got == want, what);
    };
    Context f;
    // Term (j = 1, J = {2}, v) lives in column X12; (1, {1}, v) in X11.
    f.terms = {{0, 1, 3, 1.0}};
    same(score(RuleId::Max, f.ctx()), {1.0, 0.0}, "max single term");
    same(score(RuleId::Sum, f.ctx()), {1.0, 0.0}, "sum single term");
    same(score(RuleId::Range, f.ctx()), {0.5, 0.0}, "range at the midpoint");
    same(score(RuleId::Dual, f.ctx()), {2.0, 0.0}, "dual with shadow price -2");
    same(score(RuleId::EigVi, f.ctx()), {0.3, 0.0}, "eig-vi weight");
    same(score(RuleId::EigCmi, f.ctx()), {0.8, 0.0}, "eig-cmi weight");
    f.terms = {{0, 1, 3, 0.3}, {0, 0, 2, 0.4}};
    same(score(RuleId::Max, f.ctx()), {0.4, 0.0}, "max of two terms");
    same(score(RuleId::Sum, f.ctx()), {0.7, 0.0}, "sum of two terms");

    ++examples;
    c.expect(select_variable(std::vector<double>{0.4, 0.7}) == 1, "select argmax");
    ++examples;
    c.expect(select_variable(std::vector<double>{0.5, 0.5}) == 0, "select tie");
    ++examples;
    c.expect(!select_variable(std::vector<double>{1e-9, 0.0}), "select below tolerance");
    Context b;
    ++examples;
    c.expect(branch_point(b.ctx(), 0) == 0.5, "branch point interior");
    b.primal[0] = 1.0;
    ++examples;
    c.expect(std::abs(branch_point(b.ctx(), 0) - 0.9) <= 1e-15, "branch point upper clamp");
    b.primal[0] = 0.0;
    b.box.lower[0] = 0.5;
    ++examples;
    c.expect(std::abs(branch_point(b.ctx(), 0) - 0.55) <= 1e-15, "branch point lower clamp");

    // Scaling weight vectors by 10.
    Rng rng(99);
    int changed = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + rng.index(5);
        const std::size_t extra = 8;
        Context r;
        r.n = n;
        r.box = r.root = Box{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
        r.primal.assign(n + extra, 0.0);
        r.vig.resize(n);
        r.cmig.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            r.primal[j] = rng.uniform();
            r.vig[j] = rng.uniform();
            r.cmig[j] = rng.uniform();
        }
        r.duals = {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        r.membership.assign(n + extra, {});
        for (std::size_t k = n; k < n + extra; ++k)
            for (std::size_t q = 0; q < 3; ++q)
                if (rng.uniform() < 0.5)
                    r.membership[k].push_back(q);
        for (int k = 0; k < 10; ++k) {
            const auto j = static_cast<VarIndex>(rng.index(n));
            const std::size_t col = n + rng.index(extra);
            r.terms.push_back({j, rng.index(n), col, rng.uniform()});
        }
        Context s = r;
        for (double& d : s.duals)
            d *= 10.0;
        for (double& v : s.vig)
            v *= 10.0;
        for (double& v : s.cmig)
            v *= 10.0;
        for (RuleId rule : {RuleId::Dual, RuleId::EigVi, RuleId::EigCmi}) {
            const auto a = select_variable(score(rule, r.ctx()));
            const auto bsel = select_variable(score(rule, s.ctx()));
            if (a != bsel)
                ++changed;
        }
    }
    c.expect(changed == 0, std::to_string(changed) + " selections changed under scaling");
    return {c.failures() == 0, std::to_string(examples) + " hand examples, 300 scaled selections, " +
                                   std::to_string(changed) + " changed"};
}

// Exhaustive modularity maximum over all set partitions.
double exhaustive_modularity(const Graph& g)
{
    const std::size_t n = g.num_nodes();
    const double m = static_cast<double>(g.num_edges());
    std::vector<std::size_t> label(n, 0);
    double best = -kInf;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
        if (i == n) {
            double q = 0.0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    if (label[a] != label[b])
                        continue;
                    const auto& nb = g.neighbors(a);
                    const double adj = std::count(nb.begin(), nb.end(), b) > 0 ? 1.0 : 0.0;
                    q += adj - static_cast<double>(g.degree(a) * g.degree(b)) / (2.0 * m);
                }
            best = std::max(best, q / (2.0 * m));
            return;
        }
        for (std::size_t l = 0; l <= used && l < n; ++l) {
            label[i] = l;
            rec(i + 1, std::max(used, l + 1));
        }
    };
    rec(0, 0);
    return best;
}

Graph complete_graph(std::size_t n)
{
    std::vector<Graph::Edge> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            e.push_back({i, j});
    return Graph(n, e);
}

// 4. Graph metrics against analytic or exhaustive oracles.
Outcome graph_metrics()
{
    Checker c;
    const Graph triangles(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    const double q = modularity_greedy(triangles);
    const double q_oracle = exhaustive_modularity(triangles);
    c.expect(std::abs(q - 0.5) <= 1e-9, "two triangles modularity " + fmt("%.12g", q));
    c.expect(std::abs(q_oracle - 0.5) <= 1e-9, "exhaustive oracle " + fmt("%.12g", q_oracle));
    const double qk4 = modularity_greedy(complete_graph(4));
    c.expect(std::abs(qk4 - exhaustive_modularity(complete_graph(4))) <= 1e-9, "K4 modularity");

    c.expect(treewidth_ub(complete_graph(4)) == 3, "K4 treewidth");
    c.expect(treewidth_ub(Graph(5, {{0, 1}, {0, 2}, {2, 3}, {2, 4}})) == 1, "tree treewidth");
    c.expect(treewidth_ub(Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})) == 2, "C4 treewidth");

    const auto star = eigencentrality(Graph(4, {{0, 1}, {0, 2}, {0, 3}}));
    double star_err = std::abs(star[0] - std::sqrt(3.0 / 6.0));
    for (int i = 1; i < 4; ++i)
        star_err = std::max(star_err, std::abs(star[i] - 1.0 / std::sqrt(6.0)));
    c.expect(star_err <= 1e-6, "star eigencentrality off by " + fmt("%.3g", star_err));
    for (double v : eigencentrality(complete_graph(3)))
        c.expect(std::abs(v - 1.0 / std::sqrt(3.0)) <= 1e-6, "K3 eigencentrality");

    c.expect(transitivity(complete_graph(3)) == 1.0, "K3 transitivity");
    c.expect(transitivity(Graph(3, {{0, 1}, {1, 2}})) == 0.0, "P3 transitivity");
    c.expect(transitivity(complete_graph(4)) == 1.0, "K4 transitivity");
    // Triangle plus pendant: 3 * 1 triangle / 5 connected triples.
    c.expect(transitivity(Graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}})) == 3.0 / 5.0, "paw transitivity");
    // Two triangles sharing an edge: 3 * 2 / (1 + 3 + 3 + 1) connected triples.
    c.expect(transitivity(Graph(4, {{0, 1}, {1, 2}, {0, 2}, {1, 3}, {2, 3}})) == 6.0 / 8.0, "diamond transitivity");
    return {c.failures() == 0, "modularity " + fmt("%.12g", q) + ", star error " + fmt("%.2g", star_err)};
}

SolveTrace synthetic(double time, double lb_init, double lb_fin)
{
    SolveTrace t;
    t.time = time;
    t.lb_init = lb_init;
    t.lb_fin = lb_fin;
    return t;
}

// 5. KPI algebra on synthetic traces. Quotients of computed paces are
// compared within 2 ulps; everything else must match bit for bit.
Outcome kpi_algebra()
{
    Checker c;
    c.expect(lb_pace(synthetic(3600, 2, 2)) == 3.6e6, "zero-improvement pace");
    c.expect(lb_pace(synthetic(0, 1, 1)) == 0.0, "root-solved pace");

    Rng rng(5);
    double worst_ratio = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double lb0 = rng.uniform(-5, 5), lb1 = lb0 + rng.uniform(0, 3);
        const double ta = rng.uniform(0.1, 100), tb = rng.uniform(0.1, 100);
        // Set A: same bounds, pace ratio is the time ratio.
        const double ratio = lb_pace(synthetic(ta, lb0, lb1)) / lb_pace(synthetic(tb, lb0, lb1));
        worst_ratio = std::max(worst_ratio, ulps(ratio, ta / tb));
        // Set C: same time, more improvement, smaller pace.
        const double lb2 = lb1 + rng.uniform(0.01, 2);
        c.expect(lb_pace(synthetic(ta, lb0, lb2)) < lb_pace(synthetic(ta, lb0, lb1)), "set-C ordering");

        PaceMap paces;
        for (RuleId r : kAllRules)
            paces[r] = rng.uniform(0.01, 50);
        const auto base = normalize(paces);
        for (double scale : {0.25, 8.0, 1024.0}) {
            PaceMap scaled;
            for (const auto& [r, p] : paces)
                scaled[r] = scale * p;
            c.expect(normalize(scaled) == base, "normalize under power-of-two scaling");
        }
        const double cgen = rng.uniform(0.1, 10);
        PaceMap scaled;
        for (const auto& [r, p] : paces)
            scaled[r] = cgen * p;
        const auto other = normalize(scaled);
        for (RuleId r : kAllRules)
            c.expect(ulps(other.at(r), base.at(r)) <= 2.0, "normalize under general scaling");
        c.expect(rank_rules(paces) == rank_rules(scaled), "ranks under scaling");
    }
    c.expect(worst_ratio <= 2.0, "set-A ratio off by " + fmt("%.1f ulps", worst_ratio));
    return {c.failures() == 0, "zero-improvement pace 3.6e6; set-A max " + fmt("%.1f ulps", worst_ratio)};
}

double mean_pinball(const std::vector<double>& y, const std::vector<double>& q, double tau)
{
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        s += pinball_loss(y[i], q[i], tau);
    return s / static_cast<double>(y.size());
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// 6. Quantile forest on y = U(0,1) + 1{x0 > 0.5}: the 0.3-quantile is 0.3 or 1.3.
Outcome forest_statistics(std::size_t workers)
{
    const auto t0 = std::chrono::steady_clock::now();
    const double tau = 0.3;
    const std::size_t d = 5, rows = 1000, held = 1000;
    Checker c;
    double worst_median = 0.0, worst_oob = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(derive_seed(seed, 0));
        auto draw = [&](std::size_t count, Matrix& x, std::vector<double>& y) {
            x = Matrix(count, d);
            y.resize(count);
            for (std::size_t i = 0; i < count; ++i) {
                for (std::size_t j = 0; j < d; ++j)
                    x(i, j) = rng.uniform();
                y[i] = rng.uniform() + (x(i, 0) > 0.5 ? 1.0 : 0.0);
            }
        };
        Matrix x, xv;
        std::vector<double> y, yv;
        draw(rows, x, y);
        draw(held, xv, yv);
        ForestParams fp;
        fp.trees = 500;
        fp.seed = seed;
        fp.workers = workers;
        const auto forest = QuantileForest::fit(x, y, fp);

        std::vector<double> err(held), pred(held);
        for (std::size_t i = 0; i < held; ++i) {
            pred[i] = forest.predict_quantile(xv.row(i), tau);
            err[i] = std::abs(pred[i] - (xv(i, 0) > 0.5 ? 1.3 : 0.3));
        }
        const double med = median(err);
        worst_median = std::max(worst_median, med);
        c.expect(med <= 0.1, "seed " + std::to_string(seed) + " median error " + fmt("%.3g", med));

        std::vector<double> oy, op;
        const auto oob = forest.oob_predict(x, tau);
        for (std::size_t i = 0; i < rows; ++i)
            if (oob[i]) {
                oy.push_back(y[i]);
                op.push_back(*oob[i]);
            }
        const double lo = mean_pinball(oy, op, tau), lh = mean_pinball(yv, pred, tau);
        const double rel = std::abs(lo - lh) / lh;
        worst_oob = std::max(worst_oob, rel);
        c.expect(rel <= 0.2, "seed " + std::to_string(seed) + " OOB loss off by " + fmt("%.3g", rel));
    }
    const double secs = seconds_since(t0);
    c.expect(secs < 30.0, "runtime " + fmt("%.1f s", secs));
    return {c.failures() == 0, "10 seeds, worst median error " + fmt("%.3g", worst_median) +
                                   ", worst OOB/held-out deviation " + fmt("%.3g", worst_oob) + ", " +
                                   fmt("%.1f s", secs)};
}

struct PipelineRun {
    TrainResult result;
    fs::path dir;
};

// generate -> bench (node-count time) -> train -> report under dir.
PipelineRun run_pipeline(const fs::path& dir, std::size_t workers)
{
    fs::remove_all(dir);
    fs::create_directories(dir);
    generate_instances(dir / "instances", three_family_preset(), 40, 0);
    BenchConfig bc;
    bc.limits.time = 300.0;
    bc.limits.time_mode = TimeMode::Nodes;
    bc.workers = workers;
    const auto summary = bench(dir / "instances" / "manifest.csv", dir / "archive", bc);
    if (!summary.parse_errors.empty())
        throw DataError("parse errors in generated instances");
    const Archive archive = load_archive(dir / "archive");
    TrainConfig tc;
    tc.workers = workers;
    auto result = train(archive, tc);
    write_train_outputs(result, tc, dir / "train");
    const fs::path train_dir = dir / "train";
    write_report(archive, &train_dir, dir / "report");
    return {std::move(result), dir};
}

// 7. Learned selection beats the best fixed rule on three engineered families.
Outcome end_to_end(const fs::path& work, std::size_t workers)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto run = run_pipeline(work / "criterion7", workers);
    const double secs = seconds_since(t0);
    const auto& m = run.result.mean;
    const double imp = m.improvement(), opt = m.optimal_improvement();
    const double share = opt > 0.0 ? imp / opt : 0.0;
    Checker c;
    c.expect(imp >= 0.10, "improvement " + fmt("%.3f", imp));
    c.expect(opt > 0.0 && imp >= 0.5 * opt, "share of optimal improvement " + fmt("%.3f", share));
    c.expect(secs < 900.0, "runtime " + fmt("%.1f s", secs));
    return {c.failures() == 0, std::to_string(run.result.partitions.size()) + " partitions, best single " +
                                   std::string(rule_name(m.best_rule)) + " " + fmt("%.4g", m.best_single) +
                                   ", learned " + fmt("%.4g", m.learned) + ", optimal " + fmt("%.4g", m.optimal) +
                                   ", improvement " + fmt("%.3f", imp) + " (" + fmt("%.0f%%", 100 * share) +
                                   " of optimal), " + fmt("%.1f s", secs)};
}

std::vector<fs::path> files_under(const fs::path& root)
{
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file())
            out.push_back(fs::relative(e.path(), root));
    std::sort(out.begin(), out.end());
    return out;
}

// 8. Two runs, different worker counts, byte-identical outputs.
Outcome determinism(const fs::path& work, std::size_t workers)
{
    const auto a = run_pipeline(work / "criterion8-a", 1);
    const auto b = run_pipeline(work / "criterion8-b", std::max<std::size_t>(workers, 3));
    Checker c;
    std::size_t compared = 0;
    for (const char* part : {"instances", "archive", "train", "report"}) {
        const auto fa = files_under(a.dir / part), fb = files_under(b.dir / part);
        c.expect(fa == fb, std::string(part) + " file lists differ");
        if (fa != fb)
            continue;
        for (const auto& f : fa) {
            ++compared;
            c.expect(read_text(a.dir / part / f) == read_text(b.dir / part / f), (fs::path(part) / f).string() + " differs");
        }
    }
    return {c.failures() == 0, std::to_string(compared) + " files compared (workers 1 vs " +
                                   std::to_string(std::max<std::size_t>(workers, 3)) + ")"};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance checks"};
    std::vector<int> criteria;
    std::string suite = SPLAB_SUITE_DIR, work = "acceptance-work";
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--criterion", criteria, "Criterion number 1-8 (repeatable; default all)")
        ->check(CLI::Range(1, 8));
    app.add_option("--suite", suite, "Directory with the small-instance suite and oracle.csv")->capture_default_str();
    app.add_option("--work", work, "Scratch directory for pipeline runs")->capture_default_str();
    app.add_option("--workers", workers, "Threads")->envname("SPLAB_WORKERS")->capture_default_str();
    CLI11_PARSE(app, argc, argv);
    if (criteria.empty())
        criteria = {1, 2, 3, 4, 5, 6, 7, 8};

    const std::vector<std::pair<const char*, std::function<Outcome()>>> all{
        {"solver correctness", [&] { return solver_correctness(suite); }},
        {"RLT soundness", [&] { return rlt_soundness(suite); }},
        {"rule fidelity", [&] { return rule_fidelity(); }},
        {"graph metrics", [&] { return graph_metrics(); }},
        {"KPI algebra", [&] { return kpi_algebra(); }},
        {"QRF statistics", [&] { return forest_statistics(workers); }},
        {"end-to-end learning", [&] { return end_to_end(work, workers); }},
        {"determinism", [&] { return determinism(work, workers); }},
    };
    bool ok = true;
    for (int k : criteria) {
        const auto& [name, fn] = all[static_cast<std::size_t>(k - 1)];
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::cout << "criterion " << k << " (" << name << "): " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail
                  << std::endl;
        ok = ok && o.pass;
    }
    return ok ? 0 : 1;
}
