#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "tvf/error.hpp"
#include "tvf/graph.hpp"

using namespace tvf;

TEST_CASE("constructor rejects malformed graphs") {
    CHECK_THROWS_AS(Graph({0, 0}, {}), DomainError);
    CHECK_THROWS_AS(Graph({0, 1}, {{0, 0}}), DomainError);
    CHECK_THROWS_AS(Graph({0, 1}, {{0, 1}, {1, 0}}), DomainError);
    CHECK_THROWS_AS(Graph({0, 1}, {{0, 2}}), DomainError);
    CHECK_THROWS_AS(Graph({-1}, {}), DomainError);
}

TEST_CASE("named families") {
    CHECK(Graph::cycle(5).size() == 5);
    CHECK(Graph::path(4).size() == 3);
    CHECK(Graph::complete(4).size() == 6);
    CHECK(Graph::edgeless(3).max_degree() == 0);
    CHECK(Graph::cycle(5).max_degree() == 2);
}

TEST_CASE("two-step sets on C5 and P3") {
    const Graph c5 = Graph::cycle(5);
    CHECK(distance_two_set(c5, 0, TwoStepMode::walk) == VertexSet{2, 3});
    CHECK(distance_two_set(c5, 0, TwoStepMode::distance) == VertexSet{2, 3});
    // in a triangle the walk set picks up neighbours, the distance set is empty
    const Graph k3 = Graph::complete(3);
    CHECK(distance_two_set(k3, 0, TwoStepMode::walk) == VertexSet{1, 2});
    CHECK(distance_two_set(k3, 0, TwoStepMode::distance).empty());
    CHECK(closed_neighborhood(Graph::path(3), 1) == VertexSet{0, 1, 2});
}

TEST_CASE("cartesian product with K_q") {
    const Graph c5 = Graph::cycle(5);
    const Graph prod = cartesian_product(c5, Graph::complete(7));
    CHECK(prod.order() == 35);
    // 7 copies of C5 plus 5 copies of K7
    CHECK(prod.size() == 7 * 5 + 5 * 21);
    CHECK(prod.max_degree() == 2 + 6);

    ProductLayout layout(c5, 7);
    for (Vertex v = 0; v < 35; ++v) CHECK(layout.label(layout.locate(v)) == v);
    CHECK(layout.label({2, 3}) == 2 * 7 + 2);
    CHECK(prod.adjacent(layout.label({0, 1}), layout.label({1, 1})));
    CHECK(prod.adjacent(layout.label({0, 1}), layout.label({0, 5})));
    CHECK_FALSE(prod.adjacent(layout.label({0, 1}), layout.label({1, 2})));
    CHECK_THROWS_AS(layout.label({0, 8}), DomainError);
}

TEST_CASE("induced subgraphs keep labels") {
    const Graph c5 = Graph::cycle(5);
    const Graph h = delete_vertices(c5, {0});
    CHECK(h.vertices() == std::vector<Vertex>{1, 2, 3, 4});
    CHECK(h.size() == 3);
    CHECK_THROWS_AS(delete_vertices(c5, {9}), DomainError);
}

TEST_CASE("edge list round trip and errors") {
    std::istringstream in("# C4\np 4 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n");
    const Graph g = read_edge_list(in);
    CHECK(g == Graph::cycle(4));
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream again(out.str());
    CHECK(read_edge_list(again) == g);

    std::istringstream bad1("p 3 1\ne 0 3\n");
    CHECK_THROWS_AS(read_edge_list(bad1), DomainError);
    std::istringstream bad2("p 3 2\ne 0 1\n");
    CHECK_THROWS_AS(read_edge_list(bad2), DomainError);
    std::istringstream bad3("e 0 1\n");
    CHECK_THROWS_AS(read_edge_list(bad3), DomainError);
}

TEST_CASE("bit graph mirrors adjacency") {
    const Graph g = delete_vertices(Graph::cycle(6), {2});
    BitGraph bg(g);
    CHECK(bg.order() == 5);
    for (int i = 0; i < bg.order(); ++i)
        for (int j = 0; j < bg.order(); ++j) CHECK(bg.neighbors(i).test(j) == g.adjacent(bg.label(i), bg.label(j)));
    CHECK(bg.labels_of(bg.mask_of({1, 5})) == VertexSet{1, 5});
    CHECK_THROWS_AS(BitGraph(Graph::edgeless(300)), ResourceError);
}

TEST_CASE("isomorphism class counts") {
    // OEIS A000088
    const std::vector<std::size_t> expected{1, 1, 2, 4, 11, 34, 156, 1044};
    for (int n = 0; n <= 7; ++n) CHECK(oracle::graphs_up_to_iso(n).size() == expected[n]);
}
