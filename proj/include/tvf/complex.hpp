#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvf/graph.hpp"
#include "tvf/mask.hpp"

namespace tvf {

/// Finite simplicial complex on vertex labels 0..255, stored by its facets.
/// Always contains the empty face; {∅} has no vertices and dimension -1.
class SimplicialComplex {
public:
    /// {∅}
    SimplicialComplex();
    /// Keeps the inclusion-maximal sets; an empty list gives {∅}.
    static SimplicialComplex from_facets(std::vector<VertexMask> facets);
    static SimplicialComplex simplex(const std::vector<Vertex>& vertices);

    const std::vector<VertexMask>& facets() const { return facets_; }
    const VertexMask& vertex_mask() const { return vertices_; }
    std::vector<Vertex> vertices() const;
    bool has_vertex(Vertex v) const;
    int dimension() const;
    bool is_pure() const;
    bool contains(const VertexMask& face) const;

    /// Distinct faces of the given dimension (-1 gives {∅}). Throws
    /// ResourceError once more than `budget` faces are produced.
    std::vector<VertexMask> faces(int dim, std::uint64_t budget) const;
    /// f_{-1}, f_0, ..., f_dim.
    std::vector<std::uint64_t> f_vector(std::uint64_t budget) const;

    friend bool operator==(const SimplicialComplex&, const SimplicialComplex&) = default;

private:
    std::vector<VertexMask> facets_;  // sorted, inclusion-maximal
    VertexMask vertices_;
};

/// Faces = independent sets of G. Labels must lie in 0..255.
SimplicialComplex independence_complex(const Graph& g);

/// All faces of dimension <= k (k >= -1).
SimplicialComplex skeleton(const SimplicialComplex& s, int k, std::uint64_t budget);

/// lk(v) = {σ : v ∉ σ, σ ∪ {v} ∈ S}; throws DomainError if v is not a vertex.
SimplicialComplex link(const SimplicialComplex& s, Vertex v);
/// del(v) = {σ ∈ S : v ∉ σ}; throws DomainError if v is not a vertex.
SimplicialComplex deletion(const SimplicialComplex& s, Vertex v);

struct VdResult {
    bool decomposable = false;
    /// Facet order: the deletion's order, then the link's order joined with the
    /// shedding vertex. Empty when not decomposable.
    std::vector<VertexMask> shelling;
};

/// Exhaustive memoized test of: pure, and either {∅} or some vertex with
/// decomposable link and deletion. Vertices are tried in increasing order.
VdResult is_vertex_decomposable(const SimplicialComplex& s);

/// Each facet after the first meets the union of its predecessors in a pure
/// complex of one dimension less, and the order lists every facet exactly once.
bool is_shelling_order(const SimplicialComplex& s, const std::vector<VertexMask>& order);

/// Reduced Betti numbers over Q, indexed -1..dim (entry 0 is b̃_{-1}).
std::vector<std::uint64_t> reduced_betti(const SimplicialComplex& s, std::uint64_t budget);

/// Σ_{i>=-1} (-1)^i f_i, the reduced Euler characteristic.
std::int64_t reduced_euler(const std::vector<std::uint64_t>& f_vector);

struct PropReport {
    int k = 0;
    int dimension = -1;
    bool pure = false;
    bool decomposable = false;
    bool shelling_valid = false;
    std::vector<VertexMask> shelling;
    std::vector<std::uint64_t> betti;
    /// b̃_i = 0 for every i < k-1.
    bool betti_concentrated = false;
    std::int64_t euler = 0;
    bool euler_matches = false;
    bool ok() const {
        return pure && dimension == k - 1 && decomposable && shelling_valid && betti_concentrated && euler_matches;
    }
};

/// Checks Ind(G)^{<=k-1}: pure of dimension k-1, vertex decomposable with a
/// valid shelling, homology vanishing below degree k-1 and Euler consistency.
/// Throws DomainError if G is not VD_k.
PropReport check_prop_isvd(const Graph& g, int k, std::uint64_t budget);

/// One facet per line as space-separated labels; '#' starts a comment. A line
/// holding only "{}" is the empty facet.
SimplicialComplex read_facets(std::istream& in);
SimplicialComplex read_facets_file(const std::string& path);

std::vector<Vertex> mask_labels(const VertexMask& m);
nlohmann::json complex_to_json(const SimplicialComplex& s);
nlohmann::json prop_report_to_json(const PropReport& r);

} // namespace tvf
