#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace splab {

// Deterministic random source. The raw engine output of std::mt19937_64 is
// fixed by the standard; the conversions below are ours so that results do
// not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer on [0, n). n must be positive.
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
    return mix_seed(master ^ mix_seed(stream + 0x9e3779b97f4a7c15ULL));
}

} // namespace splab
