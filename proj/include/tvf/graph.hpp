#pragma once

#include <cstddef>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tvf/mask.hpp"

namespace tvf {

using Vertex = int;
using VertexSet = std::set<Vertex>;
using Edge = std::pair<Vertex, Vertex>;

/// Finite simple graph on non-negative integer labels. Immutable after
/// construction; every operation returns a new graph.
class Graph {
public:
    Graph() = default;
    /// Throws DomainError on negative/duplicate labels, self-loops, duplicate
    /// edges or edges touching unlisted vertices.
    Graph(std::vector<Vertex> vertices, const std::vector<Edge>& edges);

    static Graph edgeless(int n);
    static Graph path(int n);
    static Graph cycle(int n);
    static Graph complete(int n);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    std::size_t order() const { return vertices_.size(); }
    std::size_t size() const { return edge_count_; }

    bool contains(Vertex v) const;
    /// Position of v in the sorted vertex list. Throws DomainError if absent.
    std::size_t index_of(Vertex v) const;
    bool adjacent(Vertex u, Vertex v) const;
    /// Sorted neighbour labels.
    const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[index_of(v)]; }
    int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }
    int max_degree() const;
    /// Edges (u, v) with u < v in lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<Vertex> vertices_;
    std::vector<std::vector<Vertex>> adjacency_;
    std::size_t edge_count_ = 0;
};

enum class TwoStepMode { walk, distance };

std::string to_string(TwoStepMode mode);
TwoStepMode parse_two_step_mode(const std::string& text);

VertexSet open_neighborhood(const Graph& g, Vertex v);
VertexSet closed_neighborhood(const Graph& g, Vertex v);

/// N²(v). walk: every u != v at the end of a 2-edge walk from v (may contain
/// neighbours). distance: graph distance exactly two.
VertexSet distance_two_set(const Graph& g, Vertex v, TwoStepMode mode = TwoStepMode::walk);

/// Induced subgraph on V(G) \ S. S must be a subset of V(G).
Graph delete_vertices(const Graph& g, const VertexSet& s);
Graph induced_subgraph(const Graph& g, const VertexSet& keep);

/// G □ H. The product vertex (u, w) gets label index_of(u) * |V(H)| + index_of(w).
Graph cartesian_product(const Graph& g, const Graph& h);

/// Vertex of G □ K_q addressed by its base vertex and its K_q coordinate (row, 1-based).
struct ProductVertex {
    Vertex base = 0;
    int row = 1;
    friend auto operator<=>(const ProductVertex&, const ProductVertex&) = default;
};

/// Addressing inside G □ K_q. Labels follow cartesian_product(G, K_q), i.e.
/// label = index_of(base) * q + (row - 1), so label order is (base, row) order.
class ProductLayout {
public:
    ProductLayout(Graph base, int q);

    const Graph& base() const { return base_; }
    int q() const { return q_; }
    const Graph& product() const { return product_; }

    Vertex label(ProductVertex pv) const;
    ProductVertex locate(Vertex label) const;

private:
    Graph base_;
    int q_;
    Graph product_;
};

/// Dense view of a graph with at most VertexMask::kCapacity vertices; positions
/// follow the sorted label order. Used by every exhaustive recursion.
class BitGraph {
public:
    explicit BitGraph(const Graph& g);

    int order() const { return static_cast<int>(labels_.size()); }
    const VertexMask& all() const { return all_; }
    const VertexMask& neighbors(int i) const { return adjacency_[i]; }
    VertexMask closed_neighbors(int i) const { return adjacency_[i] | VertexMask::single(i); }
    Vertex label(int i) const { return labels_[i]; }
    int position(Vertex v) const;
    bool edgeless(const VertexMask& m) const;
    int degree_in(int i, const VertexMask& m) const { return (adjacency_[i] & m).count(); }

    VertexMask mask_of(const VertexSet& s) const;
    VertexSet labels_of(const VertexMask& m) const;

private:
    std::vector<Vertex> labels_;
    std::vector<VertexMask> adjacency_;
    VertexMask all_;
};

/// "p <n> <m>" header, then m lines "e <u> <v>"; vertices are 0..n-1; blank
/// lines and '#' comments ignored.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
/// Writes with labels compacted to their rank (identity for 0..n-1 graphs).
void write_edge_list(std::ostream& out, const Graph& g);

} // namespace tvf
