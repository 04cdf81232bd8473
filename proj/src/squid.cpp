#include "tvf/squid.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "tvf/error.hpp"

namespace tvf {

std::string to_string(SquidKind kind) {
    switch (kind) {
    case SquidKind::one: return "I";
    case SquidKind::two: return "II";
    case SquidKind::column: return "column";
    }
    return "?";
}

SquidKind parse_squid_kind(const std::string& text) {
    if (text == "I") return SquidKind::one;
    if (text == "II") return SquidKind::two;
    if (text == "column") return SquidKind::column;
    throw DomainError("unknown squid kind '" + text + "'");
}

std::vector<ProductVertex> Squid::cells() const {
    std::vector<ProductVertex> out;
    for (int r : column) out.push_back({body, r});
    out.insert(out.end(), arms.begin(), arms.end());
    std::sort(out.begin(), out.end());
    return out;
}

bool is_valid_squid(const ProductLayout& layout, const Squid& s) {
    const Graph& g = layout.base();
    const int q = layout.q();
    if (!g.contains(s.body)) return false;
    auto in_rows = [&](int r) { return r >= 1 && r <= q; };
    for (int r : s.column)
        if (!in_rows(r)) return false;
    if (!std::is_sorted(s.column.begin(), s.column.end()) ||
        std::adjacent_find(s.column.begin(), s.column.end()) != s.column.end())
        return false;
    for (const auto& h : s.hearts)
        if (h.base != s.body || !std::binary_search(s.column.begin(), s.column.end(), h.row)) return false;
    for (const auto& arm : s.arms)
        if (!g.contains(arm.base) || arm.base == s.body || !in_rows(arm.row)) return false;

    const auto& body_nbrs = g.neighbors(s.body);
    auto body_adjacent = [&](Vertex u) { return std::binary_search(body_nbrs.begin(), body_nbrs.end(), u); };
    switch (s.kind) {
    case SquidKind::one: {
        if (!s.partner || !g.contains(*s.partner) || !g.adjacent(*s.partner, s.body) || !in_rows(s.row_i)) return false;
        if (s.hearts != std::vector<ProductVertex>{{s.body, s.row_i}}) return false;
        for (const auto& arm : s.arms)
            if (arm.row != s.row_i || !(body_adjacent(arm.base) || g.adjacent(*s.partner, arm.base))) return false;
        return true;
    }
    case SquidKind::two: {
        if (!(in_rows(s.row_i) && in_rows(s.row_j) && s.row_i < s.row_j)) return false;
        if (s.hearts != std::vector<ProductVertex>{{s.body, s.row_i}, {s.body, s.row_j}}) return false;
        for (const auto& arm : s.arms)
            if ((arm.row != s.row_i && arm.row != s.row_j) || !body_adjacent(arm.base)) return false;
        return true;
    }
    case SquidKind::column:
        return s.arms.empty() && in_rows(s.row_i) && s.hearts == std::vector<ProductVertex>{{s.body, s.row_i}};
    }
    return false;
}

void validate_tuple(const DfTuple& t) {
    const auto j = static_cast<long long>(t.squids.size());
    if (t.q <= 0) throw DomainError("DF-tuple: q must be positive");
    if (!(static_cast<long long>(t.graph.order()) >= t.m && t.m >= j))
        throw DomainError("DF-tuple: requires |G| >= m >= j >= 0");
    ProductLayout layout(t.graph, t.q);
    for (const auto& s : t.squids)
        if (!is_valid_squid(layout, s)) throw DomainError("DF-tuple: invalid squid with body " + std::to_string(s.body));
}

Graph residual(const DfTuple& t) {
    validate_tuple(t);
    ProductLayout layout(t.graph, t.q);
    VertexSet removed;
    for (const auto& s : t.squids)
        for (const auto& c : s.cells()) removed.insert(layout.label(c));
    return delete_vertices(layout.product(), removed);
}

int df1_threshold(const Graph& g, TwoStepMode mode) {
    int best = 0;
    for (Vertex v : g.vertices())
        best = std::max(best, static_cast<int>(distance_two_set(g, v, mode).size()) + 2 * g.degree(v));
    return best;
}

bool df1_check(const Graph& g, int q, TwoStepMode mode) {
    if (q <= 0) throw DomainError("q must be positive");
    return q > df1_threshold(g, mode);
}

namespace {

struct StateKey {
    VertexMask residual;
    int level;
    std::vector<int> rows;
    friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateHash {
    std::size_t operator()(const StateKey& k) const {
        std::size_t h = k.residual.hash() * 31 + static_cast<std::size_t>(k.level);
        for (int r : k.rows) h = h * 131 + static_cast<std::size_t>(r);
        return h;
    }
};

/// Expands the removal recursion: at every node the pivot p = (v,i), its
/// residual neighbours u_1..u_n (row neighbours by base, then column
/// neighbours by row), one child per S'_l = N°_H(u_l) ∪ {u_1..u_l} and one
/// child for the closed neighbourhood N•_H(p).
class Engine {
public:
    using PivotRule = std::function<int(const VertexMask&, int, std::vector<int>&, std::optional<BlockInfo>&)>;

    Engine(const ProductLayout& layout, RemovalTrace& trace, PivotRule rule)
        : layout_(layout), graph_(layout.product()), trace_(trace), rule_(std::move(rule)) {}

    std::size_t expand(const VertexMask& h, int level, const std::vector<int>& rows) {
        StateKey key{h, level, rows};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        const std::size_t id = trace_.nodes.size();
        trace_.nodes.emplace_back();
        memo_.emplace(key, id);
        TraceNode node;
        node.level = level;
        node.residual_count = h.count();
        if (level > 0) {
            if (h.empty())
                throw TheoremViolation("residual is empty with " + std::to_string(level) + " removals still required");
            std::vector<int> child_rows = rows;
            std::optional<BlockInfo> block;
            const int p = rule_(h, level, child_rows, block);
            node.pivot = layout_.locate(p);
            node.block = block;
            node.children = expand_children(h, level, p, child_rows);
        }
        trace_.nodes[id] = std::move(node);
        return id;
    }

private:
    std::vector<TraceChild> expand_children(const VertexMask& h, int level, int p, const std::vector<int>& rows) {
        const ProductVertex pv = layout_.locate(p);
        std::vector<int> row_nbrs, col_nbrs;
        (graph_.neighbors(p) & h).for_each([&](int u) {
            (layout_.locate(u).row == pv.row ? row_nbrs : col_nbrs).push_back(u);
        });
        std::vector<int> nbrs = row_nbrs;
        nbrs.insert(nbrs.end(), col_nbrs.begin(), col_nbrs.end());

        std::vector<TraceChild> out;
        VertexMask prefix;
        for (int u : nbrs) {
            prefix.set(u);
            const VertexMask s = ((graph_.neighbors(u) & h) | prefix);
            const ProductVertex uv = layout_.locate(u);
            Squid squid;
            if (uv.row == pv.row) {
                squid = describe(s, uv.base, SquidKind::one, pv.base, pv.row, 0);
            } else {
                squid = describe(s, pv.base, SquidKind::two, std::nullopt, std::min(pv.row, uv.row),
                                 std::max(pv.row, uv.row));
            }
            out.push_back({uv, std::move(squid), expand(h - s, level - 1, rows)});
        }

        const VertexMask closed = (graph_.neighbors(p) & h) | VertexMask::single(p);
        const auto& base_nbrs = layout_.base().neighbors(pv.base);
        Squid squid;
        if (!base_nbrs.empty()) {
            squid = describe(closed, pv.base, SquidKind::one, base_nbrs.front(), pv.row, 0);
        } else if (!col_nbrs.empty()) {
            const int other = layout_.locate(col_nbrs.front()).row;
            squid = describe(closed, pv.base, SquidKind::two, std::nullopt, std::min(pv.row, other),
                             std::max(pv.row, other));
        } else {
            squid = describe(closed, pv.base, SquidKind::column, std::nullopt, pv.row, 0);
        }
        out.push_back({std::nullopt, std::move(squid), expand(h - closed, level - 1, rows)});
        return out;
    }

    Squid describe(const VertexMask& s, Vertex body, SquidKind kind, std::optional<Vertex> partner, int row_i,
                   int row_j) const {
        Squid out;
        out.body = body;
        out.kind = kind;
        out.partner = partner;
        out.row_i = row_i;
        out.row_j = kind == SquidKind::two ? row_j : 0;
        s.for_each([&](int c) {
            const ProductVertex cv = layout_.locate(c);
            if (cv.base == body) out.column.push_back(cv.row);
            else out.arms.push_back(cv);
        });
        out.hearts.push_back({body, row_i});
        if (kind == SquidKind::two) out.hearts.push_back({body, row_j});
        return out;
    }

    const ProductLayout& layout_;
    BitGraph graph_;
    RemovalTrace& trace_;
    PivotRule rule_;
    std::unordered_map<StateKey, std::size_t, StateHash> memo_;
};

VertexMask initial_residual(const ProductLayout& layout, const DfTuple& t) {
    VertexMask h = VertexMask::first(static_cast<int>(layout.product().order()));
    for (const auto& s : t.squids)
        for (const auto& c : s.cells()) h.reset(layout.label(c));
    return h;
}

} // namespace

RemovalTrace run_df1(const Graph& g, int q, TwoStepMode mode) {
    if (q <= 0) throw DomainError("q must be positive");
    if (!df1_check(g, q, mode))
        throw DomainError("DF1 hypothesis fails: q = " + std::to_string(q) + " <= max |N2| + 2|N| = " +
                          std::to_string(df1_threshold(g, mode)));
    RemovalTrace trace;
    trace.algorithm = Algorithm::df1;
    trace.mode = mode;
    trace.initial = DfTuple{g, q, {}, static_cast<int>(g.order())};
    ProductLayout layout(g, q);
    Engine engine(layout, trace, [](const VertexMask& h, int, std::vector<int>&, std::optional<BlockInfo>&) {
        return h.lowest();
    });
    engine.expand(initial_residual(layout, trace.initial), trace.initial.m, {});
    return trace;
}

RemovalTrace run_dynamic(const Graph& g, int q, const SizeScheme& scheme) {
    const int delta = g.max_degree();
    if (delta == 0) throw DomainError("dynamic scheme requires maximal degree > 0");
    if (scheme.q != q) throw DomainError("scheme was validated for q = " + std::to_string(scheme.q));
    if (scheme.delta < delta)
        throw DomainError("scheme delta " + std::to_string(scheme.delta) + " is below the graph's maximal degree " +
                          std::to_string(delta));
    const auto product_order = static_cast<std::int64_t>(g.order()) * q;
    if (scheme.n > product_order)
        throw DomainError("scheme n = " + std::to_string(scheme.n) + " exceeds |V(G □ K_q)| = " + std::to_string(product_order));
    if (auto check = validate_scheme(scheme); !check) throw DomainError("invalid scheme: " + check.reason);
    const std::int64_t total = scheme.total();
    if (total > static_cast<std::int64_t>(g.order()))
        throw DomainError("scheme removes " + std::to_string(total) + " squids but |G| = " + std::to_string(g.order()));

    RemovalTrace trace;
    trace.algorithm = Algorithm::dynamic;
    trace.scheme = scheme;
    trace.initial = DfTuple{g, q, {}, static_cast<int>(total)};
    ProductLayout layout(g, q);
    std::vector<std::int64_t> prefix(scheme.sizes.size() + 1, 0);
    std::partial_sum(scheme.sizes.begin(), scheme.sizes.end(), prefix.begin() + 1);
    const int n_base = static_cast<int>(g.order());

    auto rule = [&](const VertexMask& h, int level, std::vector<int>& rows, std::optional<BlockInfo>& block) {
        const std::int64_t t = (total - level) + 1;  // 1-based index of the next removal
        int index = 1;
        while (prefix[index] < t) ++index;
        BlockInfo info;
        info.index = index;
        info.starts_block = (t == prefix[index - 1] + 1);
        if (static_cast<int>(rows.size()) < index) {
            std::vector<int> preserved(q, 0);
            h.for_each([&](int c) { ++preserved[c % q]; });
            int best = -1;
            for (int r = 1; r <= q; ++r) {
                if (std::find(rows.begin(), rows.end(), r) != rows.end()) continue;
                if (best < 0 || preserved[r - 1] > preserved[best - 1]) best = r;
            }
            if (best < 0 || preserved[best - 1] == 0)
                throw SchemeInfeasible("block " + std::to_string(index) + ": no unused row keeps a vertex");
            info.preserved = std::move(preserved);
            rows.push_back(best);
        }
        info.row = rows[index - 1];
        info.previous_rows.assign(rows.begin(), rows.begin() + (index - 1));
        block = info;
        for (int b = 0; b < n_base; ++b) {
            const int label = b * q + (info.row - 1);
            if (h.test(label)) return label;
        }
        throw SchemeInfeasible("row " + std::to_string(info.row) + " ran empty inside block " + std::to_string(index));
    };
    Engine engine(layout, trace, rule);
    engine.expand(initial_residual(layout, trace.initial), trace.initial.m, {});
    return trace;
}

Graph trace_host(const RemovalTrace& trace) { return residual(trace.initial); }

VdCertificate extract_certificate(const RemovalTrace& trace) {
    validate_tuple(trace.initial);
    if (trace.nodes.empty()) throw DomainError("trace has no nodes");
    ProductLayout layout(trace.initial.graph, trace.initial.q);
    BitGraph product(layout.product());
    CertificateBuilder builder(product);
    const int root_level = trace.initial.m - static_cast<int>(trace.initial.squids.size());
    if (trace.nodes[0].level != root_level)
        throw DomainError("trace root level " + std::to_string(trace.nodes[0].level) + " differs from m - j = " +
                          std::to_string(root_level));

    std::vector<std::optional<std::pair<VertexMask, VdCertificate>>> done(trace.nodes.size());
    auto rec = [&](auto&& self, std::size_t id, const VertexMask& h) -> VdCertificate {
        if (id >= trace.nodes.size()) throw DomainError("trace references missing node " + std::to_string(id));
        if (done[id]) {
            if (done[id]->first != h) throw DomainError("trace node " + std::to_string(id) + " reached with two residuals");
            return done[id]->second;
        }
        const TraceNode& node = trace.nodes[id];
        VdCertificate cert;
        if (node.level > 0) {
            if (!node.pivot || node.children.empty())
                throw DomainError("incomplete trace: node " + std::to_string(id) + " at level " +
                                  std::to_string(node.level) + " has no expansion");
            const int p = layout.label(*node.pivot);
            if (!h.test(p)) throw DomainError("trace node " + std::to_string(id) + ": pivot not in the residual");
            std::vector<int> nbrs;
            std::vector<VdCertificate> arms;
            std::optional<VdCertificate> closed;
            for (const auto& ch : node.children) {
                VertexMask s;
                for (const auto& c : ch.squid.cells()) s.set(layout.label(c));
                if (trace.nodes.at(ch.child).level != node.level - 1)
                    throw DomainError("trace node " + std::to_string(ch.child) + " has the wrong level");
                VdCertificate sub = self(self, ch.child, h - s);
                if (ch.neighbour) {
                    nbrs.push_back(layout.label(*ch.neighbour));
                    arms.push_back(std::move(sub));
                } else {
                    if (closed) throw DomainError("trace node " + std::to_string(id) + " has two closed children");
                    closed = std::move(sub);
                }
            }
            if (!closed) throw DomainError("trace node " + std::to_string(id) + " lacks the closed-neighbourhood child");
            cert = builder.chain(h, p, nbrs, arms, *closed, node.level);
        }
        done[id] = std::make_pair(h, cert);
        return cert;
    };
    return rec(rec, 0, initial_residual(layout, trace.initial));
}

bool admissible_successor(const ProductLayout& layout, const VertexSet& residual_set, ProductVertex pivot,
                          const VertexSet& squid) {
    const Graph h = induced_subgraph(layout.product(), residual_set);
    const Vertex p = layout.label(pivot);
    auto nbrs = [&](Vertex x) { return open_neighborhood(h, x); };
    auto covered = [&](const VertexSet& allowed) {
        return std::includes(allowed.begin(), allowed.end(), squid.begin(), squid.end());
    };
    const VertexSet around_pivot = nbrs(p);
    for (int j = 1; j <= layout.q(); ++j) {
        const Vertex other = layout.label({pivot.base, j});
        if (!h.contains(other)) continue;
        VertexSet allowed = around_pivot;
        auto more = nbrs(other);
        allowed.insert(more.begin(), more.end());
        if (covered(allowed)) return true;
    }
    VertexSet row_part;
    for (Vertex x : around_pivot)
        if (layout.locate(x).row == pivot.row) row_part.insert(x);
    for (Vertex u : layout.base().neighbors(pivot.base)) {
        const Vertex ui = layout.label({u, pivot.row});
        if (!h.contains(ui)) continue;
        VertexSet allowed = row_part;
        auto more = nbrs(ui);
        allowed.insert(more.begin(), more.end());
        if (covered(allowed)) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json pv_json(const ProductVertex& pv) { return nlohmann::json::array({pv.base, pv.row}); }

ProductVertex pv_from(const nlohmann::json& j) { return {j.at(0).get<Vertex>(), j.at(1).get<int>()}; }

nlohmann::json pv_list(const std::vector<ProductVertex>& v) {
    auto out = nlohmann::json::array();
    for (const auto& pv : v) out.push_back(pv_json(pv));
    return out;
}

nlohmann::json graph_json(const Graph& g) {
    auto edges = nlohmann::json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    return {{"vertices", g.vertices()}, {"edges", edges}};
}

Graph graph_from(const nlohmann::json& j) {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<Vertex>(), e.at(1).get<Vertex>());
    return Graph(j.at("vertices").get<std::vector<Vertex>>(), edges);
}

} // namespace

nlohmann::json squid_to_json(const Squid& s) {
    nlohmann::json j = {{"body", s.body},
                        {"kind", to_string(s.kind)},
                        {"hearts", pv_list(s.hearts)},
                        {"column", s.column},
                        {"arms", pv_list(s.arms)},
                        {"partner", s.partner ? nlohmann::json(*s.partner) : nlohmann::json(nullptr)}};
    j["rows"] = s.kind == SquidKind::two ? nlohmann::json::array({s.row_i, s.row_j}) : nlohmann::json::array({s.row_i});
    return j;
}

Squid squid_from_json(const nlohmann::json& j) {
    Squid s;
    s.body = j.at("body").get<Vertex>();
    s.kind = parse_squid_kind(j.at("kind").get<std::string>());
    if (j.contains("partner") && !j.at("partner").is_null()) s.partner = j.at("partner").get<Vertex>();
    const auto rows = j.at("rows").get<std::vector<int>>();
    if (rows.empty()) throw DomainError("squid JSON: empty rows");
    s.row_i = rows[0];
    s.row_j = rows.size() > 1 ? rows[1] : 0;
    for (const auto& h : j.at("hearts")) s.hearts.push_back(pv_from(h));
    s.column = j.at("column").get<std::vector<int>>();
    for (const auto& a : j.at("arms")) s.arms.push_back(pv_from(a));
    return s;
}

nlohmann::json trace_to_json(const RemovalTrace& t) {
    nlohmann::json j;
    j["algorithm"] = t.algorithm == Algorithm::df1 ? "df1" : "dynamic";
    j["graph"] = graph_json(t.initial.graph);
    j["q"] = t.initial.q;
    j["m"] = t.initial.m;
    j["mode"] = to_string(t.mode);
    auto initial = nlohmann::json::array();
    for (const auto& s : t.initial.squids) initial.push_back(squid_to_json(s));
    j["initial_squids"] = initial;
    j["scheme"] = t.scheme ? scheme_to_json(*t.scheme) : nlohmann::json(nullptr);
    auto nodes = nlohmann::json::array();
    for (std::size_t id = 0; id < t.nodes.size(); ++id) {
        const auto& n = t.nodes[id];
        nlohmann::json jn = {{"id", id}, {"level", n.level}, {"residual", n.residual_count}};
        jn["pivot"] = n.pivot ? pv_json(*n.pivot) : nlohmann::json(nullptr);
        if (n.block) {
            jn["block"] = {{"index", n.block->index},
                           {"row", n.block->row},
                           {"starts_block", n.block->starts_block},
                           {"previous_rows", n.block->previous_rows},
                           {"preserved", n.block->preserved}};
        } else {
            jn["block"] = nullptr;
        }
        auto children = nlohmann::json::array();
        for (const auto& c : n.children) {
            children.push_back({{"child", c.child},
                                {"neighbour", c.neighbour ? pv_json(*c.neighbour) : nlohmann::json(nullptr)},
                                {"squid", squid_to_json(c.squid)}});
        }
        jn["children"] = children;
        nodes.push_back(std::move(jn));
    }
    j["nodes"] = std::move(nodes);
    return j;
}

RemovalTrace trace_from_json(const nlohmann::json& j) {
    try {
        RemovalTrace t;
        const auto alg = j.at("algorithm").get<std::string>();
        if (alg == "df1") t.algorithm = Algorithm::df1;
        else if (alg == "dynamic") t.algorithm = Algorithm::dynamic;
        else throw DomainError("trace: unknown algorithm '" + alg + "'");
        t.initial.graph = graph_from(j.at("graph"));
        t.initial.q = j.at("q").get<int>();
        t.initial.m = j.at("m").get<int>();
        t.mode = parse_two_step_mode(j.at("mode").get<std::string>());
        for (const auto& s : j.at("initial_squids")) t.initial.squids.push_back(squid_from_json(s));
        if (j.contains("scheme") && !j.at("scheme").is_null()) t.scheme = scheme_from_json(j.at("scheme"));
        const auto& nodes = j.at("nodes");
        t.nodes.resize(nodes.size());
        for (const auto& jn : nodes) {
            const auto id = jn.at("id").get<std::size_t>();
            if (id >= t.nodes.size()) throw DomainError("trace: node id out of range");
            TraceNode n;
            n.level = jn.at("level").get<int>();
            n.residual_count = jn.at("residual").get<int>();
            if (!jn.at("pivot").is_null()) n.pivot = pv_from(jn.at("pivot"));
            if (jn.contains("block") && !jn.at("block").is_null()) {
                const auto& b = jn.at("block");
                BlockInfo info;
                info.index = b.at("index").get<int>();
                info.row = b.at("row").get<int>();
                info.starts_block = b.at("starts_block").get<bool>();
                info.previous_rows = b.at("previous_rows").get<std::vector<int>>();
                info.preserved = b.at("preserved").get<std::vector<int>>();
                n.block = info;
            }
            for (const auto& c : jn.at("children")) {
                TraceChild ch;
                ch.child = c.at("child").get<std::size_t>();
                if (!c.at("neighbour").is_null()) ch.neighbour = pv_from(c.at("neighbour"));
                ch.squid = squid_from_json(c.at("squid"));
                n.children.push_back(std::move(ch));
            }
            t.nodes[id] = std::move(n);
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("trace JSON: ") + e.what());
    }
}

} // namespace tvf
