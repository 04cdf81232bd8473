#pragma once

#include <cstdint>
#include <random>

#include "tvf/graph.hpp"
#include "tvf/rational.hpp"

namespace tvf {

/// mt19937_64 is fully specified by the standard; the helpers below avoid the
/// library-defined distributions so streams match across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);
    std::int64_t between(std::int64_t lo, std::int64_t hi);  // inclusive
    /// Numerator in [-range, range], denominator in [1, max_den].
    Rational rational(std::int64_t range, std::int64_t max_den);

private:
    std::mt19937_64 engine_;
};

/// G(n, p) with p = percent/100 on vertices 0..n-1.
Graph random_graph(int n, int percent, Rng& rng);

} // namespace tvf
