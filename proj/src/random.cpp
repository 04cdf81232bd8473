#include "tvf/random.hpp"

#include <limits>

#include "tvf/error.hpp"

namespace tvf {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw DomainError("Rng::below needs a positive bound");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw DomainError("Rng::between with an empty range");
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rational Rng::rational(std::int64_t range, std::int64_t max_den) {
    const std::int64_t den = between(1, max_den);
    const std::int64_t num = between(-range * den, range * den);
    return Rational(num, den);
}

Graph random_graph(int n, int percent, Rng& rng) {
    if (n < 0 || percent < 0 || percent > 100) throw DomainError("random_graph needs n >= 0 and 0 <= percent <= 100");
    std::vector<Vertex> vs(n);
    for (int i = 0; i < n; ++i) vs[i] = i;
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.below(100) < static_cast<std::uint64_t>(percent)) edges.emplace_back(u, v);
    return Graph(vs, edges);
}

} // namespace tvf
