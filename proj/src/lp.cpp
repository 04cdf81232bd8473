#include "tvf/lp.hpp"

#include "tvf/error.hpp"

namespace tvf {

std::optional<std::vector<Rational>> nonnegative_solution(const RationalMatrix& a, const std::vector<Rational>& b) {
    const std::size_t m = a.size();
    if (b.size() != m) throw DomainError("LP: right-hand side has the wrong length");
    const std::size_t n = m ? a[0].size() : 0;
    for (const auto& row : a)
        if (row.size() != n) throw DomainError("LP: ragged constraint matrix");
    if (m == 0) return std::vector<Rational>(n, Rational(0));

    // tableau columns: n structural, m artificial, rhs
    const std::size_t width = n + m + 1;
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(width, Rational(0)));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const bool flip = b[i] < 0;
        for (std::size_t j = 0; j < n; ++j) t[i][j] = flip ? Rational(-a[i][j]) : a[i][j];
        t[i][n + i] = 1;
        t[i][width - 1] = flip ? Rational(-b[i]) : b[i];
        basis[i] = n + i;
    }
    // reduced costs of the phase-1 objective Σ artificials
    std::vector<Rational> cost(width, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < width; ++j)
            if (j < n || j == width - 1) cost[j] -= t[i][j];

    while (true) {
        std::size_t enter = width;
        for (std::size_t j = 0; j < n + m; ++j)
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        if (enter == width) break;

        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = t[i][width - 1] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) throw TheoremViolation("phase-1 LP reported unbounded");

        const Rational pivot = t[leave][enter];
        for (auto& v : t[leave]) v /= pivot;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rational f = t[i][enter];
            for (std::size_t j = 0; j < width; ++j)
                if (t[leave][j] != 0) t[i][j] -= f * t[leave][j];
        }
        if (cost[enter] != 0) {
            const Rational f = cost[enter];
            for (std::size_t j = 0; j < width; ++j)
                if (t[leave][j] != 0) cost[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    if (cost[width - 1] != 0) return std::nullopt;  // -(Σ artificials) at the optimum
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) x[basis[i]] = t[i][width - 1];
    return x;
}

} // namespace tvf
