#pragma once

#include "splab/problem.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace splab {

/// Simple undirected graph with a canonical edge list (u < v, sorted, unique).
class Graph {
public:
    using Edge = std::pair<std::size_t, std::size_t>;

    Graph(std::size_t num_nodes, std::vector<Edge> edges, std::vector<std::string> labels = {});

    std::size_t num_nodes() const { return adjacency_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_[v]; }
    std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }
    const std::vector<std::string>& labels() const { return labels_; }

    /// "u v" per line.
    std::string edge_list_text() const;

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::string> labels_;
};

/// Variables intersection graph: one node per variable, adjacent when two
/// variables share a monomial.
Graph build_vig(const Problem& problem);

struct Cmig {
    Graph graph;
    std::vector<Multiset> monomials; // node k < monomials.size() is monomials[k]
    std::size_t objective_node = 0;  // followed by one node per constraint
};

/// Constraints-monomials intersection graph: distinct monomial supports on one
/// side, the objective and the constraints on the other.
Cmig build_cmig(const Problem& problem);

double edge_density(const Graph& g);

/// Width of the greedy min-fill elimination ordering (ties: min degree, then
/// min index). An upper bound on treewidth.
std::size_t treewidth_ub(const Graph& g);

/// Modularity of the partition found by Clauset-Newman-Moore greedy merging.
double modularity_greedy(const Graph& g);

/// Modularity of a given partition (community id per node).
double modularity(const Graph& g, const std::vector<std::size_t>& community);

/// Global clustering coefficient: 3 * triangles / connected triples.
double transitivity(const Graph& g);

struct PowerIterationOptions {
    std::size_t max_iterations = 1000;
    double tolerance = 1e-12;
};

/// Dominant adjacency eigenvector with unit norm and nonnegative entries.
/// Iterates on A + I so that bipartite graphs converge instead of oscillating.
std::vector<double> eigencentrality(const Graph& g, const PowerIterationOptions& opts = {});

/// Per-variable weights for the eig-vi / eig-cmi rules. The CMIG weight of x_j
/// is the centrality of the degree-one monomial x_j, or 0 if it never appears alone.
std::vector<double> vig_weights(const Problem& problem);
std::vector<double> cmig_weights(const Problem& problem);

} // namespace splab
