// Writes the generated part of the small-instance suite.
//
//     make_suite <directory>

#include "splab/generator.hpp"
#include "splab/instance_io.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

int main(int argc, char** argv)
{
    if (argc != 2) {
        std::cerr << "usage: make_suite <directory>\n";
        return 1;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    for (int i = 0; i < 20; ++i) {
        splab::GeneratorSpec spec;
        const bool three = i >= 10;
        spec.num_vars = three ? 3 : 2;
        spec.degree = 2 + static_cast<unsigned>(i % 2);
        spec.density = 0.6 + 0.1 * (i % 4);
        spec.num_constraints = 1 + static_cast<std::size_t>((i / 2) % 2);
        spec.seed = 1000 + static_cast<std::uint64_t>(i);
        // The oracle grid is 1e-3 wide, so three-variable boxes stay at unit range.
        spec.range_min = three ? 1.0 : 0.5;
        spec.range_max = three ? 1.0 : 3.0;
        spec.family = three ? "suite-n3" : "suite-n2";
        char name[32];
        std::snprintf(name, sizeof name, "gen-%02d.poly", i);
        splab::write_problem(splab::generate_random(spec).problem, dir / name);
    }
    return 0;
}
