#include "tvf/tverberg.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "tvf/error.hpp"
#include "tvf/lp.hpp"

namespace tvf {

PointConfiguration read_points(std::istream& in) {
    PointConfiguration cfg;
    cfg.d = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string where = "point file line " + std::to_string(lineno);
        Vertex v = 0;
        try {
            std::size_t used = 0;
            v = std::stoi(tok[0], &used);
            if (used != tok[0].size() || v < 0) throw DomainError("");
        } catch (const std::exception&) {
            throw DomainError(where + ": bad vertex label '" + tok[0] + "'");
        }
        Point p;
        for (std::size_t i = 1; i < tok.size(); ++i) p.push_back(parse_rational(tok[i]));
        if (cfg.d < 0) cfg.d = static_cast<int>(p.size());
        if (static_cast<int>(p.size()) != cfg.d || cfg.d == 0)
            throw DomainError(where + ": expected " + std::to_string(std::max(cfg.d, 1)) + " coordinates");
        if (!cfg.points.emplace(v, std::move(p)).second) throw DomainError(where + ": vertex repeated");
    }
    if (cfg.d < 0) cfg.d = 0;
    return cfg;
}

PointConfiguration read_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open point file '" + path + "'");
    return read_points(in);
}

void write_points(std::ostream& out, const PointConfiguration& cfg) {
    for (const auto& [v, p] : cfg.points) {
        out << v;
        for (const auto& x : p) out << ' ' << to_string(x);
        out << '\n';
    }
}

PointConfiguration random_configuration(int n, int d, Rng& rng, std::int64_t range, std::int64_t max_den) {
    if (n < 0 || d < 1) throw DomainError("random_configuration needs n >= 0 and d >= 1");
    PointConfiguration cfg;
    cfg.d = d;
    for (int v = 0; v < n; ++v) {
        Point p;
        for (int i = 0; i < d; ++i) p.push_back(rng.rational(range, max_den));
        cfg.points.emplace(v, std::move(p));
    }
    return cfg;
}

std::int64_t tverberg_number(std::int64_t d, std::int64_t q) {
    if (d < 1 || q < 2) throw DomainError("tverberg_number requires d >= 1 and q >= 2");
    return (d + 1) * (q - 1) + 1;
}

std::optional<HullIntersection> hulls_intersect(const std::vector<std::vector<Point>>& parts) {
    if (parts.empty()) throw DomainError("hulls_intersect needs at least one part");
    const std::size_t d = parts[0].empty() ? 0 : parts[0][0].size();
    std::size_t vars = 0;
    for (const auto& part : parts) {
        if (part.empty()) throw DomainError("hulls_intersect: empty part");
        for (const auto& p : part)
            if (p.size() != d) throw DomainError("hulls_intersect: points of different dimensions");
        vars += part.size();
    }
    // λ for every point; Σλ = 1 per part and Σλ_i p_i = Σλ_0 p_0 per coordinate
    RationalMatrix a;
    std::vector<Rational> b;
    std::vector<std::size_t> offset;
    std::size_t col = 0;
    for (const auto& part : parts) {
        offset.push_back(col);
        std::vector<Rational> row(vars, Rational(0));
        for (std::size_t j = 0; j < part.size(); ++j) row[col + j] = 1;
        a.push_back(std::move(row));
        b.emplace_back(1);
        col += part.size();
    }
    for (std::size_t i = 1; i < parts.size(); ++i) {
        for (std::size_t c = 0; c < d; ++c) {
            std::vector<Rational> row(vars, Rational(0));
            for (std::size_t j = 0; j < parts[i].size(); ++j) row[offset[i] + j] = parts[i][j][c];
            for (std::size_t j = 0; j < parts[0].size(); ++j) row[j] -= parts[0][j][c];
            a.push_back(std::move(row));
            b.emplace_back(0);
        }
    }
    auto x = nonnegative_solution(a, b);
    if (!x) return std::nullopt;
    HullIntersection out;
    out.common.assign(d, Rational(0));
    for (std::size_t i = 0; i < parts.size(); ++i)
        out.coefficients.emplace_back(x->begin() + static_cast<std::ptrdiff_t>(offset[i]),
                                      x->begin() + static_cast<std::ptrdiff_t>(offset[i] + parts[i].size()));
    for (std::size_t j = 0; j < parts[0].size(); ++j)
        for (std::size_t c = 0; c < d; ++c) out.common[c] += out.coefficients[0][j] * parts[0][j][c];
    return out;
}

namespace {

void require_matching(const Graph& g, const PointConfiguration& cfg) {
    if (cfg.points.size() != g.order())
        throw DomainError("point configuration has " + std::to_string(cfg.points.size()) + " points, graph has " +
                          std::to_string(g.order()) + " vertices");
    for (Vertex v : g.vertices())
        if (!cfg.points.count(v)) throw DomainError("vertex " + std::to_string(v) + " has no point");
}

} // namespace

WitnessCheck verify_witness(const Graph& g, const PointConfiguration& cfg, int q, const TverbergWitness& w) {
    auto fail = [](std::string why) { return WitnessCheck{false, std::move(why)}; };
    if (w.coloring.size() != g.order()) return fail("coloring does not cover the graph");
    for (const auto& [v, c] : w.coloring) {
        if (!g.contains(v)) return fail("colored vertex " + std::to_string(v) + " is not in the graph");
        if (c < 1 || c > q) return fail("color of " + std::to_string(v) + " outside 1..q");
        for (Vertex u : g.neighbors(v))
            if (w.coloring.at(u) == c) return fail("edge " + std::to_string(u) + "-" + std::to_string(v) + " is monochromatic");
    }
    if (static_cast<int>(w.barycentric.size()) != q) return fail("expected one coefficient map per color");
    if (static_cast<int>(w.common_point.size()) != cfg.d) return fail("common point has the wrong dimension");
    for (int c = 1; c <= q; ++c) {
        const auto& coeffs = w.barycentric[c - 1];
        std::set<Vertex> cls;
        for (const auto& [v, col] : w.coloring)
            if (col == c) cls.insert(v);
        if (cls.empty()) return fail("color " + std::to_string(c) + " is empty");
        Rational sum = 0;
        Point combo(cfg.d, Rational(0));
        for (const auto& [v, lambda] : coeffs) {
            if (!cls.count(v)) return fail("coefficient on vertex " + std::to_string(v) + " outside color " + std::to_string(c));
            if (lambda < 0) return fail("negative coefficient in color " + std::to_string(c));
            sum += lambda;
            const Point& p = cfg.points.at(v);
            for (int i = 0; i < cfg.d; ++i) combo[i] += lambda * p[i];
        }
        if (sum != 1) return fail("coefficients of color " + std::to_string(c) + " sum to " + to_string(sum));
        if (combo != w.common_point) return fail("color " + std::to_string(c) + " does not reach the common point");
    }
    return {};
}

std::optional<TverbergWitness> search_witness(const Graph& g, const PointConfiguration& cfg, int q, std::uint64_t budget,
                                              SearchStats* stats) {
    if (q < 1) throw DomainError("q must be positive");
    require_matching(g, cfg);
    SearchStats local;
    SearchStats& st = stats ? *stats : local;
    const auto& order = g.vertices();
    const int n = static_cast<int>(order.size());
    if (n < q) return std::nullopt;  // some class would be empty

    std::vector<std::vector<int>> earlier_nbrs(n);
    for (int i = 0; i < n; ++i)
        for (Vertex u : g.neighbors(order[i])) {
            const int j = g.index_of(u);
            if (j < i) earlier_nbrs[i].push_back(j);
        }
    std::vector<int> color(n, -1);

    auto feasibility = [&](int assigned) {
        ++st.lp_calls;
        std::vector<std::vector<Point>> parts(q);
        for (int i = 0; i < assigned; ++i) parts[color[i]].push_back(cfg.points.at(order[i]));
        return hulls_intersect(parts);
    };

    std::optional<TverbergWitness> found;
    // hulls only grow as points join a class: a prefix whose hulls meet
    // settles its whole subtree, while a prefix whose hulls miss prunes nothing
    auto rec = [&](auto&& self, int i, int used, bool meets) -> bool {
        if (++st.nodes > budget)
            throw ResourceError("search budget " + std::to_string(budget) + " exhausted after " + std::to_string(st.nodes - 1) +
                                " nodes (" + std::to_string(st.lp_calls) + " LPs, depth " + std::to_string(i) + ")");
        if (used == q && !meets && i < n) {
            meets = feasibility(i).has_value();
            st.settled += meets;
        }
        if (i == n) {
            if (used < q) return false;
            auto hull = feasibility(n);
            if (!hull) return false;
            TverbergWitness w;
            w.common_point = hull->common;
            w.barycentric.resize(q);
            std::vector<std::size_t> seen(q, 0);
            for (int k = 0; k < n; ++k) {
                w.coloring[order[k]] = color[k] + 1;
                const Rational& lambda = hull->coefficients[color[k]][seen[color[k]]++];
                if (lambda != 0) w.barycentric[color[k]][order[k]] = lambda;
            }
            found = std::move(w);
            return true;
        }
        const int top = std::min(used, q - 1);
        for (int c = 0; c <= top; ++c) {
            const int now_used = std::max(used, c + 1);
            if (n - i - 1 < q - now_used) continue;
            bool clash = false;
            for (int j : earlier_nbrs[i])
                if (color[j] == c) clash = true;
            if (clash) continue;
            color[i] = c;
            if (self(self, i + 1, now_used, meets)) return true;
        }
        color[i] = -1;
        return false;
    };
    rec(rec, 0, 0, false);
    return found;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

PrimeInfo prime_utilities(std::int64_t q) {
    if (q < 2) throw DomainError("prime utilities require q >= 2");
    PrimeInfo info;
    std::int64_t p = 2;
    while (p * p <= q && q % p != 0) ++p;
    if (q % p != 0) p = q;  // q itself is prime
    std::int64_t rest = q;
    int k = 0;
    while (rest % p == 0) {
        rest /= p;
        ++k;
    }
    info.prime_power = rest == 1;
    if (info.prime_power) {
        info.base = p;
        info.exponent = k;
    }
    info.bertrand_prime = q;
    while (!is_prime(info.bertrand_prime)) --info.bertrand_prime;
    return info;
}

bool CorollaryReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CorollaryCheck& c) { return c.ok; });
}

CorollaryReport corollary_pipeline(const Graph& g, const PointConfiguration& cfg, std::int64_t q, const Rational& epsilon,
                                   std::uint64_t budget) {
    require_matching(g, cfg);
    if (cfg.d < 1) throw DomainError("point dimension must be positive");
    if (q < 2) throw DomainError("q must be at least 2");
    if (epsilon <= 0) throw DomainError("epsilon must be positive");

    CorollaryReport r;
    r.d = cfg.d;
    r.q = q;
    r.epsilon = epsilon;
    auto check = [&](std::string name, bool ok, std::string detail) {
        r.checks.push_back({std::move(name), ok, std::move(detail)});
    };

    const int delta = g.max_degree();
    const EpsilonConstants c = epsilon_constants(to_double(epsilon));
    const double bound = c.k_epsilon * delta;
    check("q_exceeds_k_eps_delta", static_cast<double>(q) > bound,
          "q = " + std::to_string(q) + ", K_eps * delta = " + format_real(bound));
    check("q_exceeds_delta", q > delta, "q = " + std::to_string(q) + ", delta = " + std::to_string(delta));

    const PrimeInfo primes = prime_utilities(q);
    r.q_prime = primes.bertrand_prime;
    check("bertrand_prime", 2 * r.q_prime > q, "q_p = " + std::to_string(r.q_prime));

    r.required_exact = Rational(tverberg_number(cfg.d, r.q_prime)) * (1 + epsilon);
    const Integer floored = floor(r.required_exact);
    r.fractional = Rational(floored) != r.required_exact;
    r.selected = floored.convert_to<std::int64_t>();
    const auto order = static_cast<std::int64_t>(g.order());
    check("enough_vertices", order >= r.selected,
          "need " + std::to_string(r.selected) + (r.fractional ? " (floored from " + to_string(r.required_exact) + ")" : "") +
              ", graph has " + std::to_string(order));

    const std::int64_t take = std::min(order, r.selected);
    VertexSet chosen(g.vertices().begin(), g.vertices().begin() + take);
    const Graph sub = induced_subgraph(g, chosen);
    PointConfiguration sub_cfg{cfg.d, {}};
    for (Vertex v : chosen) sub_cfg.points.emplace(v, cfg.points.at(v));

    r.witness = search_witness(sub, sub_cfg, static_cast<int>(r.q_prime), budget);
    check("witness_found", r.witness.has_value(), r.witness ? "q_p-colored witness on the selected vertices" : "none");
    if (!r.witness) return r;
    const WitnessCheck wc = verify_witness(sub, sub_cfg, static_cast<int>(r.q_prime), *r.witness);
    check("witness_verified", wc.ok, wc.ok ? "exact recomputation" : wc.reason);

    r.full_coloring = r.witness->coloring;
    bool extended = true;
    for (Vertex v : g.vertices()) {
        if (r.full_coloring.count(v)) continue;
        std::set<int> taken;
        for (Vertex u : g.neighbors(v))
            if (auto it = r.full_coloring.find(u); it != r.full_coloring.end()) taken.insert(it->second);
        int color = 1;
        while (taken.count(color)) ++color;
        if (color > q) extended = false;
        r.full_coloring[v] = color;
    }
    check("extension_proper", extended, extended ? "greedy extension within q colors" : "greedy extension needed more than q colors");
    std::set<int> used;
    for (const auto& [v, col] : r.full_coloring) used.insert(col);
    for (int col = 1; col <= q; ++col)
        if (!used.count(col)) r.empty_colors.push_back(col);
    return r;
}

nlohmann::json point_json(const Point& p) {
    auto out = nlohmann::json::array();
    for (const auto& x : p) out.push_back(to_string(x));
    return out;
}

nlohmann::json witness_to_json(const TverbergWitness& w) {
    nlohmann::json coloring = nlohmann::json::object();
    for (const auto& [v, c] : w.coloring) coloring[std::to_string(v)] = c;
    auto bary = nlohmann::json::array();
    for (const auto& m : w.barycentric) {
        nlohmann::json jm = nlohmann::json::object();
        for (const auto& [v, lambda] : m) jm[std::to_string(v)] = to_string(lambda);
        bary.push_back(jm);
    }
    return {{"coloring", coloring}, {"common_point", point_json(w.common_point)}, {"barycentric", bary}};
}

nlohmann::json hull_to_json(const HullIntersection& h) {
    auto coeffs = nlohmann::json::array();
    for (const auto& part : h.coefficients) {
        auto jp = nlohmann::json::array();
        for (const auto& x : part) jp.push_back(to_string(x));
        coeffs.push_back(jp);
    }
    return {{"common_point", point_json(h.common)}, {"coefficients", coeffs}};
}

nlohmann::json corollary_to_json(const CorollaryReport& r) {
    auto checks = nlohmann::json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    nlohmann::json full = nlohmann::json::object();
    for (const auto& [v, c] : r.full_coloring) full[std::to_string(v)] = c;
    return {{"d", r.d},
            {"q", r.q},
            {"q_prime", r.q_prime},
            {"epsilon", to_string(r.epsilon)},
            {"required_vertices_exact", to_string(r.required_exact)},
            {"selected_vertices", r.selected},
            {"fractional", r.fractional},
            {"checks", checks},
            {"witness", r.witness ? witness_to_json(*r.witness) : nlohmann::json(nullptr)},
            {"full_coloring", full},
            {"empty_colors", r.empty_colors},
            {"ok", r.ok()}};
}

} // namespace tvf
