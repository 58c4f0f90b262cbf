#pragma once

#include "splab/problem.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace splab {

struct GeneratorSpec {
    std::size_t num_vars = 2;
    unsigned degree = 2;
    double density = 1.0;             // fraction of the C(n+d,d)-1 possible monomials per polynomial
    std::size_t num_constraints = 1;
    double equality_fraction = 0.0;
    std::uint64_t seed = 0;
    // Upper bounds are drawn uniformly from [range_min, range_max]; lower bounds are 0.
    double range_min = 1.0;
    double range_max = 1.0;
    std::string family;

    // Objective-only variables appended after the constrained ones.
    // Decoys: wide-range squares c*(x^2 - a*x) scaled so each adds at most
    // decoy_gap to the root relaxation gap; their RLT violations are large
    // while their effect on the bound is negligible.
    std::size_t decoy_vars = 0;
    double decoy_range = 100.0; // upper bounds uniform on [decoy_range / 2, decoy_range]
    double decoy_gap = 1e-6;
    bool decoy_pairs = false;   // decoys also multiply each other
    // Coupling variables: unit range, each multiplied with every earlier
    // coupling variable with weight -coupling_weight * U(0.5, 1).
    std::size_t coupling_vars = 0;
    double coupling_weight = 1.0;
};

struct GeneratedProblem {
    Problem problem;
    std::vector<double> anchor; // feasible by construction
};

/// Random boxed polynomial program, feasible at a stored anchor point.
///
/// Each polynomial draws round(density * M) distinct supports uniformly from
/// the M nonconstant monomials of degree <= d, with coefficients uniform on
/// [-1, 1] \ {0}. For >= rows rhs = phi(anchor) - s with s ~ U(0, 1); for =
/// rows rhs = phi(anchor). The last round(eq_fraction * R) rows are equalities.
/// Decoy and coupling variables are drawn afterwards from the same stream, so
/// the base problem does not depend on them.
GeneratedProblem generate_random(const GeneratorSpec& spec);

} // namespace splab
