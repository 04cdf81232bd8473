#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "tvf/complex.hpp"
#include "tvf/error.hpp"
#include "tvf/random.hpp"
#include "tvf/vd.hpp"

using namespace tvf;

namespace {

constexpr std::uint64_t kBudget = 1'000'000;

VertexMask mask(std::initializer_list<int> vs) {
    VertexMask m;
    for (int v : vs) m.set(v);
    return m;
}

SimplicialComplex from_sets(const std::vector<VertexSet>& sets) {
    std::vector<VertexMask> masks;
    for (const auto& s : sets) {
        VertexMask m;
        for (Vertex v : s) m.set(v);
        masks.push_back(m);
    }
    return SimplicialComplex::from_facets(masks);
}

Graph two_k2() { return Graph({0, 1, 2, 3}, {{0, 1}, {2, 3}}); }

SimplicialComplex random_complex(Rng& rng) {
    std::vector<VertexMask> facets;
    const int count = static_cast<int>(rng.between(1, 5));
    for (int i = 0; i < count; ++i) {
        VertexMask m;
        for (int v = 0; v < 6; ++v)
            if (rng.below(2)) m.set(v);
        facets.push_back(m);
    }
    return SimplicialComplex::from_facets(facets);
}

} // namespace

TEST_CASE("independence complexes") {
    const SimplicialComplex full = independence_complex(Graph::edgeless(3));
    CHECK(full.facets() == std::vector<VertexMask>{mask({0, 1, 2})});
    CHECK(full.dimension() == 2);

    const SimplicialComplex square = independence_complex(two_k2());
    CHECK(square.facets().size() == 4);
    CHECK(square.dimension() == 1);
    CHECK(square.vertices().size() == 4);

    const SimplicialComplex pentagon = independence_complex(Graph::cycle(5));
    CHECK(pentagon.facets().size() == 5);
    CHECK(pentagon.is_pure());

    CHECK(independence_complex(Graph()).dimension() == -1);
}

TEST_CASE("faces equal the independent sets on all graphs up to 6 vertices") {
    for (int n = 0; n <= 6; ++n)
        for (const Graph& g : oracle::graphs_up_to_iso(n)) {
            const SimplicialComplex s = independence_complex(g);
            const auto sets = oracle::independent_sets(g);
            std::size_t total = 0;
            for (auto f : s.f_vector(kBudget)) total += f;
            CHECK(total == sets.size());
            for (const auto& set : sets) {
                VertexMask m;
                for (Vertex v : set) m.set(v);
                CHECK(s.contains(m));
            }
        }
}

TEST_CASE("skeleta") {
    const SimplicialComplex s = independence_complex(Graph::edgeless(4));
    CHECK(skeleton(s, 5, kBudget) == s);
    CHECK(skeleton(s, -1, kBudget).dimension() == -1);
    CHECK(skeleton(s, 1, kBudget).facets().size() == 6);
    const SimplicialComplex p3 = skeleton(independence_complex(Graph::path(3)), 0, kBudget);
    CHECK(p3.facets() == std::vector<VertexMask>{mask({0}), mask({1}), mask({2})});
    CHECK_THROWS_AS(skeleton(s, 1, 3), ResourceError);
}

TEST_CASE("links and deletions") {
    const SimplicialComplex tri = SimplicialComplex::simplex({0, 1, 2});
    CHECK(link(tri, 0).facets() == std::vector<VertexMask>{mask({1, 2})});
    CHECK(deletion(tri, 0).facets() == std::vector<VertexMask>{mask({1, 2})});

    const SimplicialComplex k2 = independence_complex(Graph::complete(2));
    CHECK(link(k2, 0).dimension() == -1);
    CHECK(deletion(k2, 0).facets() == std::vector<VertexMask>{mask({1})});
    CHECK_THROWS_AS(link(k2, 7), DomainError);
}

TEST_CASE("link and deletion of Ind(G) are Ind of vertex-deleted graphs") {
    for (int n = 1; n <= 6; ++n)
        for (const Graph& g : oracle::graphs_up_to_iso(n)) {
            const SimplicialComplex s = independence_complex(g);
            for (Vertex v : g.vertices()) {
                CHECK(link(s, v) == independence_complex(delete_vertices(g, closed_neighborhood(g, v))));
                CHECK(deletion(s, v) == independence_complex(delete_vertices(g, {v})));
            }
        }
}

TEST_CASE("link commutes with skeleta") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const SimplicialComplex s = random_complex(rng);
        for (int k = 0; k <= 4; ++k)
            for (Vertex v : s.vertices())
                CHECK(link(skeleton(s, k, kBudget), v) == skeleton(link(s, v), k - 1, kBudget));
    }
}

TEST_CASE("vertex decomposability examples") {
    const VdResult empty = is_vertex_decomposable(SimplicialComplex());
    CHECK(empty.decomposable);
    CHECK(is_vertex_decomposable(SimplicialComplex::simplex({0, 1, 2, 3})).decomposable);

    const SimplicialComplex triangle_boundary = from_sets({{0, 1}, {1, 2}, {0, 2}});
    CHECK(is_vertex_decomposable(triangle_boundary).decomposable);
    const SimplicialComplex square = independence_complex(two_k2());
    const VdResult sq = is_vertex_decomposable(square);
    CHECK(sq.decomposable);
    CHECK(is_shelling_order(square, sq.shelling));

    const SimplicialComplex two_edges = from_sets({{0, 1}, {2, 3}});
    CHECK(two_edges.is_pure());
    CHECK_FALSE(is_vertex_decomposable(two_edges).decomposable);
    CHECK_FALSE(is_vertex_decomposable(from_sets({{0, 1}, {2}})).decomposable);
}

TEST_CASE("shelling validator") {
    const SimplicialComplex path = from_sets({{0, 1}, {1, 2}, {2, 3}});
    CHECK(is_shelling_order(path, {mask({0, 1}), mask({1, 2}), mask({2, 3})}));
    CHECK_FALSE(is_shelling_order(path, {mask({0, 1}), mask({2, 3}), mask({1, 2})}));
    CHECK_FALSE(is_shelling_order(path, {mask({0, 1}), mask({1, 2})}));
    // two triangles sharing only a vertex
    const SimplicialComplex bowtie = from_sets({{0, 1, 2}, {2, 3, 4}});
    CHECK_FALSE(is_shelling_order(bowtie, {mask({0, 1, 2}), mask({2, 3, 4})}));
}

TEST_CASE("reduced Betti numbers") {
    CHECK(reduced_betti(SimplicialComplex::simplex({0, 1, 2}), kBudget) == std::vector<std::uint64_t>{0, 0, 0, 0});
    CHECK(reduced_betti(SimplicialComplex(), kBudget) == std::vector<std::uint64_t>{1});
    CHECK(reduced_betti(independence_complex(two_k2()), kBudget) == std::vector<std::uint64_t>{0, 0, 1});
    CHECK(reduced_betti(independence_complex(Graph::cycle(5)), kBudget) == std::vector<std::uint64_t>{0, 0, 1});
    CHECK(reduced_betti(from_sets({{0}, {1}, {2}}), kBudget) == std::vector<std::uint64_t>{0, 2});
    CHECK_THROWS_AS(reduced_betti(SimplicialComplex::simplex({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}), 100), ResourceError);
}

TEST_CASE("Betti numbers match an independent rank computation and the Euler characteristic") {
    for (int n = 1; n <= 6; ++n)
        for (const Graph& g : oracle::graphs_up_to_iso(n)) {
            const SimplicialComplex s = independence_complex(g);
            const auto ours = reduced_betti(s, kBudget);
            const auto ref = oracle::reduced_betti(oracle::independent_sets(g));
            REQUIRE(ours.size() == ref.size());
            std::int64_t alt = 0;
            for (std::size_t i = 0; i < ours.size(); ++i) {
                CHECK(static_cast<std::int64_t>(ours[i]) == ref[i]);
                alt += (i % 2 == 0 ? -1 : 1) * static_cast<std::int64_t>(ours[i]);
            }
            CHECK(alt == reduced_euler(s.f_vector(kBudget)));
        }
}

TEST_CASE("skeleton property examples") {
    const PropReport simplex = check_prop_isvd(Graph::edgeless(3), 3, kBudget);
    CHECK(simplex.ok());
    CHECK(simplex.betti == std::vector<std::uint64_t>{0, 0, 0, 0});

    const PropReport square = check_prop_isvd(two_k2(), 2, kBudget);
    CHECK(square.ok());
    CHECK(square.betti == std::vector<std::uint64_t>{0, 0, 1});

    const PropReport points = check_prop_isvd(Graph::path(3), 1, kBudget);
    CHECK(points.ok());
    CHECK(points.dimension == 0);
    CHECK(points.betti == std::vector<std::uint64_t>{0, 2});

    CHECK_THROWS_AS(check_prop_isvd(Graph::path(3), 2, kBudget), DomainError);
}

TEST_CASE("facet file format") {
    std::istringstream in("# a path\n0 1\n1 2\n\n2 3  # last\n");
    const SimplicialComplex s = read_facets(in);
    CHECK(s.facets().size() == 3);
    std::istringstream empty("{}\n");
    CHECK(read_facets(empty).dimension() == -1);
    std::istringstream bad("0 x\n");
    CHECK_THROWS_AS(read_facets(bad), DomainError);
    std::istringstream big("300\n");
    CHECK_THROWS_AS(read_facets(big), DomainError);
}
