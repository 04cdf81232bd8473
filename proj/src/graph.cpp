#include "tvf/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tvf/error.hpp"

namespace tvf {

std::uint64_t configured_budget() {
    if (const char* env = std::getenv("TVF_BUDGET")) {
        char* end = nullptr;
        auto value = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return value;
    }
    return kDefaultBudget;
}

Graph::Graph(std::vector<Vertex> vertices, const std::vector<Edge>& edges) : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (!vertices_.empty() && vertices_.front() < 0) throw DomainError("negative vertex label");
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
        throw DomainError("duplicate vertex label");
    adjacency_.resize(vertices_.size());
    for (auto [u, v] : edges) {
        if (u == v) throw DomainError("self-loop at vertex " + std::to_string(u));
        auto& nu = adjacency_[index_of(u)];
        auto& nv = adjacency_[index_of(v)];
        nu.push_back(v);
        nv.push_back(u);
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end());
        if (std::adjacent_find(list.begin(), list.end()) != list.end()) throw DomainError("duplicate edge");
        edge_count_ += list.size();
    }
    edge_count_ /= 2;
}

Graph Graph::edgeless(int n) {
    std::vector<Vertex> vs(n);
    for (int i = 0; i < n; ++i) vs[i] = i;
    return Graph(std::move(vs), {});
}

Graph Graph::path(int n) {
    std::vector<Edge> es;
    for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
    auto g = edgeless(n);
    return Graph(g.vertices(), es);
}

Graph Graph::cycle(int n) {
    if (n < 3) throw DomainError("cycle needs at least 3 vertices");
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i) es.emplace_back(i, (i + 1) % n);
    return Graph(edgeless(n).vertices(), es);
}

Graph Graph::complete(int n) {
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) es.emplace_back(i, j);
    return Graph(edgeless(n).vertices(), es);
}

bool Graph::contains(Vertex v) const { return std::binary_search(vertices_.begin(), vertices_.end(), v); }

std::size_t Graph::index_of(Vertex v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || *it != v) throw DomainError("unknown vertex " + std::to_string(v));
    return static_cast<std::size_t>(it - vertices_.begin());
}

bool Graph::adjacent(Vertex u, Vertex v) const {
    const auto& nu = neighbors(u);
    index_of(v);
    return std::binary_search(nu.begin(), nu.end(), v);
}

int Graph::max_degree() const {
    std::size_t best = 0;
    for (const auto& list : adjacency_) best = std::max(best, list.size());
    return static_cast<int>(best);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        for (Vertex w : adjacency_[i])
            if (vertices_[i] < w) out.emplace_back(vertices_[i], w);
    return out;
}

std::string to_string(TwoStepMode mode) { return mode == TwoStepMode::walk ? "walk" : "distance"; }

TwoStepMode parse_two_step_mode(const std::string& text) {
    if (text == "walk") return TwoStepMode::walk;
    if (text == "distance") return TwoStepMode::distance;
    throw DomainError("unknown N2 mode '" + text + "' (expected walk|distance)");
}

VertexSet open_neighborhood(const Graph& g, Vertex v) {
    const auto& n = g.neighbors(v);
    return VertexSet(n.begin(), n.end());
}

VertexSet closed_neighborhood(const Graph& g, Vertex v) {
    auto s = open_neighborhood(g, v);
    s.insert(v);
    return s;
}

VertexSet distance_two_set(const Graph& g, Vertex v, TwoStepMode mode) {
    VertexSet out;
    for (Vertex u : g.neighbors(v))
        for (Vertex w : g.neighbors(u))
            if (w != v) out.insert(w);
    if (mode == TwoStepMode::distance)
        for (Vertex u : g.neighbors(v)) out.erase(u);
    return out;
}

Graph induced_subgraph(const Graph& g, const VertexSet& keep) {
    for (Vertex v : keep) g.index_of(v);
    std::vector<Edge> es;
    for (auto [u, v] : g.edges())
        if (keep.count(u) && keep.count(v)) es.emplace_back(u, v);
    return Graph(std::vector<Vertex>(keep.begin(), keep.end()), es);
}

Graph delete_vertices(const Graph& g, const VertexSet& s) {
    for (Vertex v : s)
        if (!g.contains(v)) throw DomainError("cannot delete unknown vertex " + std::to_string(v));
    VertexSet keep;
    for (Vertex v : g.vertices())
        if (!s.count(v)) keep.insert(v);
    return induced_subgraph(g, keep);
}

Graph cartesian_product(const Graph& g, const Graph& h) {
    const int nh = static_cast<int>(h.order());
    auto label = [&](Vertex u, Vertex w) {
        return static_cast<Vertex>(g.index_of(u)) * nh + static_cast<Vertex>(h.index_of(w));
    };
    std::vector<Vertex> vs;
    for (Vertex u : g.vertices())
        for (Vertex w : h.vertices()) vs.push_back(label(u, w));
    std::vector<Edge> es;
    for (auto [u, u2] : g.edges())
        for (Vertex w : h.vertices()) es.emplace_back(label(u, w), label(u2, w));
    for (Vertex u : g.vertices())
        for (auto [w, w2] : h.edges()) es.emplace_back(label(u, w), label(u, w2));
    return Graph(std::move(vs), es);
}

ProductLayout::ProductLayout(Graph base, int q) : base_(std::move(base)), q_(q) {
    if (q < 1) throw DomainError("q must be positive");
    product_ = cartesian_product(base_, Graph::complete(q));
}

Vertex ProductLayout::label(ProductVertex pv) const {
    if (pv.row < 1 || pv.row > q_) throw DomainError("row out of range 1..q");
    return static_cast<Vertex>(base_.index_of(pv.base)) * q_ + (pv.row - 1);
}

ProductVertex ProductLayout::locate(Vertex label) const {
    if (label < 0 || static_cast<std::size_t>(label) >= base_.order() * static_cast<std::size_t>(q_))
        throw DomainError("label outside G □ K_q");
    return {base_.vertices()[label / q_], label % q_ + 1};
}

BitGraph::BitGraph(const Graph& g) : labels_(g.vertices()) {
    if (labels_.size() > static_cast<std::size_t>(VertexMask::kCapacity))
        throw ResourceError("graph has " + std::to_string(labels_.size()) + " vertices; exhaustive routines support at most " +
                            std::to_string(VertexMask::kCapacity));
    adjacency_.resize(labels_.size());
    for (int i = 0; i < order(); ++i) {
        for (Vertex w : g.neighbors(labels_[i])) adjacency_[i].set(static_cast<int>(g.index_of(w)));
    }
    all_ = VertexMask::first(order());
}

int BitGraph::position(Vertex v) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), v);
    if (it == labels_.end() || *it != v) throw DomainError("unknown vertex " + std::to_string(v));
    return static_cast<int>(it - labels_.begin());
}

bool BitGraph::edgeless(const VertexMask& m) const {
    for (int i = m.lowest(); i >= 0; i = m.next(i))
        if (adjacency_[i].intersects(m)) return false;
    return true;
}

VertexMask BitGraph::mask_of(const VertexSet& s) const {
    VertexMask m;
    for (Vertex v : s) m.set(position(v));
    return m;
}

VertexSet BitGraph::labels_of(const VertexMask& m) const {
    VertexSet s;
    m.for_each([&](int i) { s.insert(labels_[i]); });
    return s;
}

Graph read_edge_list(std::istream& in) {
    std::string line;
    long long n = -1, m = -1;
    std::vector<Edge> es;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        auto fail = [&](const std::string& why) {
            return DomainError("edge list line " + std::to_string(line_no) + ": " + why);
        };
        if (tag == "p") {
            if (n >= 0) throw fail("duplicate header");
            if (!(ls >> n >> m) || n < 0 || m < 0) throw fail("expected 'p <n> <m>'");
        } else if (tag == "e") {
            if (n < 0) throw fail("edge before header");
            long long u, v;
            if (!(ls >> u >> v)) throw fail("expected 'e <u> <v>'");
            if (u < 0 || v < 0 || u >= n || v >= n) throw fail("endpoint outside 0..n-1");
            es.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
        } else {
            throw fail("unknown record '" + tag + "'");
        }
        std::string extra;
        if (ls >> extra) throw fail("trailing tokens");
    }
    if (n < 0) throw DomainError("edge list: missing 'p' header");
    if (static_cast<long long>(es.size()) != m)
        throw DomainError("edge list: header announces " + std::to_string(m) + " edges, found " + std::to_string(es.size()));
    return Graph(Graph::edgeless(static_cast<int>(n)).vertices(), es);
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open graph file " + path);
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << "p " << g.order() << ' ' << g.size() << '\n';
    for (auto [u, v] : g.edges()) out << "e " << g.index_of(u) << ' ' << g.index_of(v) << '\n';
}

} // namespace tvf
