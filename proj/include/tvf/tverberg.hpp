#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvf/graph.hpp"
#include "tvf/rational.hpp"
#include "tvf/random.hpp"
#include "tvf/scheme.hpp"

namespace tvf {

using Point = std::vector<Rational>;

struct PointConfiguration {
    int d = 0;
    std::map<Vertex, Point> points;
};

/// Lines "v x_1 ... x_d", coordinates as integers, "p/q" or decimals.
PointConfiguration read_points(std::istream& in);
PointConfiguration read_points_file(const std::string& path);
void write_points(std::ostream& out, const PointConfiguration& cfg);

/// Vertices 0..n-1 with coordinates from Rng::rational(range, max_den).
PointConfiguration random_configuration(int n, int d, Rng& rng, std::int64_t range = 10, std::int64_t max_den = 4);

/// (d+1)(q-1)+1; requires d >= 1, q >= 2.
std::int64_t tverberg_number(std::int64_t d, std::int64_t q);

struct HullIntersection {
    Point common;
    /// coefficients[i][j] belongs to parts[i][j].
    std::vector<std::vector<Rational>> coefficients;
};

/// A point in the convex hull of every part, found by exact LP; nothing if the
/// hulls have no common point. Throws DomainError on empty parts or mixed
/// dimensions.
std::optional<HullIntersection> hulls_intersect(const std::vector<std::vector<Point>>& parts);

struct TverbergWitness {
    std::map<Vertex, int> coloring;  // colors 1..q
    Point common_point;
    /// One map per color: vertex -> convex coefficient.
    std::vector<std::map<Vertex, Rational>> barycentric;
};

struct WitnessCheck {
    bool ok = true;
    std::string reason;
    explicit operator bool() const { return ok; }
};

/// Recomputes every witness property exactly: proper coloring in 1..q, each
/// class nonempty with nonnegative coefficients summing to 1, and each class
/// combination equal to the common point.
WitnessCheck verify_witness(const Graph& g, const PointConfiguration& cfg, int q, const TverbergWitness& w);

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t lp_calls = 0;
    std::uint64_t settled = 0;  // prefixes whose hulls already meet
};

/// Proper surjective q-colorings in restricted-growth order over ascending
/// labels. Once every class of a prefix is nonempty and the hulls meet, any
/// proper completion is a witness, so no further LPs run below it. Returns
/// the first feasible coloring.
/// Throws ResourceError after `budget` search nodes.
std::optional<TverbergWitness> search_witness(const Graph& g, const PointConfiguration& cfg, int q,
                                              std::uint64_t budget, SearchStats* stats = nullptr);

bool is_prime(std::int64_t n);

struct PrimeInfo {
    bool prime_power = false;
    std::int64_t base = 0;  // p when q = p^k
    int exponent = 0;
    std::int64_t bertrand_prime = 0;  // largest prime <= q
};

/// Requires q >= 2.
PrimeInfo prime_utilities(std::int64_t q);

struct CorollaryCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct CorollaryReport {
    std::vector<CorollaryCheck> checks;
    int d = 0;
    std::int64_t q = 0;
    std::int64_t q_prime = 0;
    Rational epsilon;
    Rational required_exact;  // ((d+1)(q_p-1)+1)(1+ε)
    std::int64_t selected = 0;  // its floor
    bool fractional = false;
    std::optional<TverbergWitness> witness;
    std::map<Vertex, int> full_coloring;
    std::vector<int> empty_colors;
    bool ok() const;
};

/// Runs the prime reduction on an affine instance: prime q_p <= q, the
/// first ⌊((d+1)(q_p-1)+1)(1+ε)⌋ vertices, a q_p-colored witness there, then a
/// greedy proper extension to q colors. Hypothesis failures are reported, not
/// thrown; DomainError only for inconsistent inputs.
CorollaryReport corollary_pipeline(const Graph& g, const PointConfiguration& cfg, std::int64_t q, const Rational& epsilon,
                                   std::uint64_t budget);

nlohmann::json point_json(const Point& p);
nlohmann::json witness_to_json(const TverbergWitness& w);
nlohmann::json hull_to_json(const HullIntersection& h);
nlohmann::json corollary_to_json(const CorollaryReport& r);

} // namespace tvf
