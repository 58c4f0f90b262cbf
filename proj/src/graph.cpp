#include "splab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace splab {

Graph::Graph(std::size_t num_nodes, std::vector<Edge> edges, std::vector<std::string> labels)
    : adjacency_(num_nodes), labels_(std::move(labels))
{
    for (auto& [u, v] : edges) {
        if (u >= num_nodes || v >= num_nodes)
            throw std::invalid_argument("Graph: edge references a missing node");
        if (u == v)
            throw std::invalid_argument("Graph: self-loops are not allowed");
        if (u > v)
            std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    for (const auto& [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& a : adjacency_)
        std::sort(a.begin(), a.end());
}

std::string Graph::edge_list_text() const
{
    std::string out;
    for (const auto& [u, v] : edges_)
        out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

namespace {

template <typename Fn>
void for_each_support(const Problem& problem, Fn&& fn)
{
    for (const auto& t : problem.objective().terms())
        fn(t.support);
    for (const auto& c : problem.constraints())
        for (const auto& t : c.body.terms())
            fn(t.support);
}

} // namespace

Graph build_vig(const Problem& problem)
{
    std::vector<Graph::Edge> edges;
    for_each_support(problem, [&](const Multiset& s) {
        const auto e = s.entries();
        for (std::size_t a = 0; a < e.size(); ++a)
            for (std::size_t b = a + 1; b < e.size(); ++b)
                edges.push_back({e[a].var, e[b].var});
    });
    const auto names = problem.var_names();
    return Graph(problem.num_vars(), std::move(edges), {names.begin(), names.end()});
}

Cmig build_cmig(const Problem& problem)
{
    std::set<Multiset> distinct;
    for_each_support(problem, [&](const Multiset& s) { distinct.insert(s); });
    Cmig out{Graph(0, {}), {distinct.begin(), distinct.end()}, distinct.size()};

    std::map<Multiset, std::size_t> node_of;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < out.monomials.size(); ++k) {
        node_of.emplace(out.monomials[k], k);
        std::string label;
        for (const auto& e : out.monomials[k].entries()) {
            if (!label.empty())
                label += "*";
            label += problem.var_names()[e.var];
            if (e.mult > 1)
                label += "^" + std::to_string(e.mult);
        }
        labels.push_back(label);
    }
    labels.push_back("objective");
    for (const auto& c : problem.constraints())
        labels.push_back(c.name);

    std::vector<Graph::Edge> edges;
    for (const auto& t : problem.objective().terms())
        edges.push_back({node_of.at(t.support), out.objective_node});
    const auto constraints = problem.constraints();
    for (std::size_t r = 0; r < constraints.size(); ++r)
        for (const auto& t : constraints[r].body.terms())
            edges.push_back({node_of.at(t.support), out.objective_node + 1 + r});
    const std::size_t total = out.objective_node + 1 + constraints.size();
    out.graph = Graph(total, std::move(edges), std::move(labels));
    return out;
}

double edge_density(const Graph& g)
{
    const double n = static_cast<double>(g.num_nodes());
    if (g.num_nodes() < 2)
        return 0.0;
    return static_cast<double>(g.num_edges()) / (n * (n - 1.0) / 2.0);
}

std::size_t treewidth_ub(const Graph& g)
{
    const std::size_t n = g.num_nodes();
    std::vector<std::set<std::size_t>> adj(n);
    for (const auto& [u, v] : g.edges()) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    std::vector<bool> gone(n, false);
    std::size_t width = 0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n, best_fill = 0, best_deg = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (gone[v])
                continue;
            std::size_t fill = 0;
            for (auto a = adj[v].begin(); a != adj[v].end(); ++a)
                for (auto b = std::next(a); b != adj[v].end(); ++b)
                    if (!adj[*a].count(*b))
                        ++fill;
            const std::size_t deg = adj[v].size();
            if (best == n || fill < best_fill || (fill == best_fill && deg < best_deg)) {
                best = v;
                best_fill = fill;
                best_deg = deg;
            }
        }
        width = std::max(width, best_deg);
        for (auto a = adj[best].begin(); a != adj[best].end(); ++a) {
            for (auto b = std::next(a); b != adj[best].end(); ++b) {
                adj[*a].insert(*b);
                adj[*b].insert(*a);
            }
        }
        for (std::size_t u : adj[best])
            adj[u].erase(best);
        adj[best].clear();
        gone[best] = true;
    }
    return width;
}

double modularity(const Graph& g, const std::vector<std::size_t>& community)
{
    if (g.num_edges() == 0)
        return 0.0;
    const double m = static_cast<double>(g.num_edges());
    std::map<std::size_t, double> inside, degree;
    for (const auto& [u, v] : g.edges())
        if (community[u] == community[v])
            inside[community[u]] += 1.0;
    for (std::size_t v = 0; v < g.num_nodes(); ++v)
        degree[community[v]] += static_cast<double>(g.degree(v));
    double q = 0.0;
    for (const auto& [c, d] : degree) {
        const double frac = d / (2.0 * m);
        q += inside[c] / m - frac * frac;
    }
    return q;
}

double modularity_greedy(const Graph& g)
{
    const std::size_t n = g.num_nodes();
    if (g.num_edges() == 0)
        return 0.0;
    const double two_m = 2.0 * static_cast<double>(g.num_edges());

    // e[i][j]: fraction of edge ends joining communities i and j (i != j);
    // a[i]: fraction of edge ends attached to community i.
    std::vector<std::map<std::size_t, double>> e(n);
    std::vector<double> a(n, 0.0);
    for (const auto& [u, v] : g.edges()) {
        e[u][v] += 1.0 / two_m;
        e[v][u] += 1.0 / two_m;
    }
    for (std::size_t v = 0; v < n; ++v)
        a[v] = static_cast<double>(g.degree(v)) / two_m;
    std::vector<std::size_t> community(n);
    for (std::size_t v = 0; v < n; ++v)
        community[v] = v;
    std::vector<bool> alive(n, true);

    while (true) {
        double best = 0.0;
        std::size_t bi = n, bj = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i])
                continue;
            for (const auto& [j, eij] : e[i]) {
                if (j <= i)
                    continue;
                const double dq = 2.0 * (eij - a[i] * a[j]);
                if (dq > best + 1e-15) {
                    best = dq;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == n)
            break;
        // Merge bj into bi.
        for (const auto& [k, ejk] : e[bj]) {
            if (k == bi)
                continue;
            e[bi][k] += ejk;
            e[k][bi] += ejk;
            e[k].erase(bj);
        }
        e[bi].erase(bj);
        e[bj].clear();
        a[bi] += a[bj];
        a[bj] = 0.0;
        alive[bj] = false;
        for (auto& c : community)
            if (c == bj)
                c = bi;
    }
    return modularity(g, community);
}

double transitivity(const Graph& g)
{
    double triangles = 0.0, triples = 0.0;
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        const auto& nb = g.neighbors(v);
        const double d = static_cast<double>(nb.size());
        triples += d * (d - 1.0) / 2.0;
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                if (std::binary_search(g.neighbors(nb[a]).begin(), g.neighbors(nb[a]).end(), nb[b]))
                    triangles += 1.0; // each triangle is seen from its three corners
    }
    return triples == 0.0 ? 0.0 : triangles / triples;
}

std::vector<double> eigencentrality(const Graph& g, const PowerIterationOptions& opts)
{
    const std::size_t n = g.num_nodes();
    std::vector<double> v(n, 0.0);
    if (g.num_edges() == 0)
        return v;
    std::fill(v.begin(), v.end(), 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> next(n);
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = v[i];
            for (std::size_t j : g.neighbors(i))
                s += v[j];
            next[i] = s;
        }
        double norm = 0.0;
        for (double x : next)
            norm += x * x;
        norm = std::sqrt(norm);
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= norm;
            diff += (next[i] - v[i]) * (next[i] - v[i]);
        }
        v.swap(next);
        if (std::sqrt(diff) < opts.tolerance)
            break;
    }
    for (double& x : v)
        x = std::abs(x);
    return v;
}

std::vector<double> vig_weights(const Problem& problem)
{
    return eigencentrality(build_vig(problem));
}

std::vector<double> cmig_weights(const Problem& problem)
{
    const auto cmig = build_cmig(problem);
    const auto centrality = eigencentrality(cmig.graph);
    std::vector<double> w(problem.num_vars(), 0.0);
    for (std::size_t k = 0; k < cmig.monomials.size(); ++k) {
        const auto& m = cmig.monomials[k];
        if (m.degree() == 1)
            w[m.entries()[0].var] = centrality[k];
    }
    return w;
}

} // namespace splab
