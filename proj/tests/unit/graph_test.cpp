#include "corpus.hpp"
#include "rtt/graph.hpp"

#include <doctest.h>

using namespace rtt;

TEST_SUITE("graph") {

TEST_CASE("min_degree on small hosts") {
  CHECK(min_degree(corpus::complete(6)) == 5);
  CHECK(min_degree(corpus::cycle(8)) == 2);
  CHECK_THROWS_AS(min_degree(Graph(0, {})), InvalidArgument);
}

TEST_CASE("construction rejects bad edges") {
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), InvalidArgument);
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), InvalidArgument);
  Graph g(3, {{0, 1}, {1, 0}});
  CHECK(g.edge_count() == 1);
}

TEST_CASE("girth") {
  CHECK(girth(corpus::complete(4)) == 3);
  CHECK_FALSE(girth(corpus::path(7)).has_value());
  CHECK_FALSE(girth(corpus::star(5)).has_value());
  CHECK(girth(corpus::petersen()) == corpus::girth(corpus::petersen()));
  CHECK(girth(corpus::petersen()) == 5);
  CHECK(girth(corpus::cycle(8)) == 8);
  CHECK(girth(corpus::complete_bipartite(3, 3)) == 4);
}

TEST_CASE("clique number") {
  CHECK(clique_number(corpus::complete(5)) == 5);
  CHECK(clique_number(corpus::cycle(5)) == 2);
  CHECK(clique_number(corpus::petersen()) == corpus::clique_number(corpus::petersen()));
  CHECK(clique_number(corpus::petersen()) == 2);
  CHECK(clique_number(Graph(3, {})) == 1);
}

TEST_CASE("clique budget exhaustion carries bounds") {
  auto g = corpus::gnp(60, 0.7, 11);
  try {
    clique_number(g, 5);
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(e.lower_bound <= e.upper_bound);
    CHECK(e.lower_bound >= 1);
  }
}

TEST_CASE("edges_between") {
  auto k4 = corpus::complete(4);
  CHECK(edges_between(k4, k4.vertex_set({0, 1}), k4.vertex_set({2, 3})) == 4);
  auto k3 = corpus::complete(3);
  CHECK(edges_between(k3, k3.everything(), k3.everything()) == 6);
  auto c6 = corpus::cycle(6);
  CHECK(edges_between(c6, c6.vertex_set({0, 1, 2}), c6.vertex_set({3, 4, 5})) == 2);
  auto other = corpus::complete(4);
  CHECK_THROWS_AS(edges_between(k4, k4.vertex_set({0}), other.vertex_set({1})), HostMismatch);
  CHECK_THROWS_AS(k4.vertex_set({0}) | other.vertex_set({1}), HostMismatch);
}

TEST_CASE("degree sum and girth/clique oracles over a seeded corpus") {
  for (const auto& g : corpus::seeded(60, 3, 8, 2024)) {
    std::size_t sum = 0;
    for (Vertex v = 0; v < g.order(); ++v) sum += g.degree(v);
    CHECK(sum == 2 * g.edge_count());
    CHECK(girth(g).value_or(0) == corpus::girth(g));
    CHECK(clique_number(g) == corpus::clique_number(g));
  }
}

TEST_CASE("edges_between matches a double loop for disjoint sets") {
  std::uint64_t state = 5;
  for (const auto& g : corpus::seeded(40, 4, 12, 77)) {
    state = derive_seed(state, g.order());
    Bits a(g.order()), b(g.order());
    for (Vertex v = 0; v < g.order(); ++v) {
      auto pick = derive_seed(state, v) % 3;
      if (pick == 1) a.set(v);
      if (pick == 2) b.set(v);
    }
    std::size_t expected = 0;
    for (Vertex u = 0; u < g.order(); ++u)
      for (Vertex v = 0; v < g.order(); ++v)
        if (a.test(u) && b.test(v) && g.adjacent(u, v)) ++expected;
    CHECK(edges_between(g, g.vertex_set(a), g.vertex_set(b)) == expected);
  }
}

TEST_CASE("induced subgraph keeps a remapping table") {
  auto g = corpus::petersen();
  Bits keep(10);
  for (Vertex v : {1u, 3u, 5u, 6u, 8u}) keep.set(v);
  auto sub = induced(g, keep);
  CHECK(sub.graph.order() == 5);
  REQUIRE(sub.to_host.size() == 5);
  for (Vertex a = 0; a < 5; ++a)
    for (Vertex b = 0; b < 5; ++b)
      CHECK(sub.graph.adjacent(a, b) == g.adjacent(sub.to_host[a], sub.to_host[b]));
}

TEST_CASE("complement and components") {
  auto g = corpus::cliques({3, 4});
  auto parts = components(g, g.all());
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].count() == 3);
  auto co = complement(g);
  CHECK(co.edge_count() == 21 - g.edge_count());
  CHECK(components(co, co.all()).size() == 1);
}

}
