#include "corpus.hpp"
#include "rtt/tiling.hpp"

#include <doctest.h>

using namespace rtt;

namespace {

Graph g0_10() {
  // X1 = {0,1,2} clique, complete to the independent X2
  std::vector<Edge> e;
  for (Vertex a = 0; a < 3; ++a)
    for (Vertex b = a + 1; b < 10; ++b) e.emplace_back(a, b);
  return Graph(10, e);
}

Graph with_extra_edge(const Graph& g, Vertex a, Vertex b) {
  auto e = g.edges();
  e.emplace_back(a, b);
  return Graph(g.order(), e);
}

}  // namespace

TEST_SUITE("tiling") {

TEST_CASE("max_tiling examples") {
  auto k3 = Pattern::clique(3);
  auto k6 = max_tiling(corpus::complete(6), k3);
  CHECK(k6.optimal);
  CHECK(k6.tiling.copies.size() == 2);
  CHECK(k6.tiling.uncovered.empty());

  auto two8 = max_tiling(corpus::cliques({8, 8}), k3);
  CHECK(two8.optimal);
  CHECK(two8.tiling.copies.size() == 4);
  CHECK(two8.tiling.uncovered.size() == 4);

  auto g0 = g0_10();
  auto out = max_tiling(g0, k3);
  CHECK(out.optimal);
  CHECK(out.tiling.copies.size() == 1);
  CHECK(out.tiling.copies.size() == corpus::max_packing(g0, k3));
  CHECK(out.tiling.uncovered.size() == 7);
}

TEST_CASE("has_factor examples") {
  auto k3 = Pattern::clique(3);
  CHECK(has_factor(corpus::complete(6), k3) == Verdict::yes);
  CHECK(has_factor(corpus::complete(7), k3) == Verdict::no);
  CHECK(has_factor(corpus::cliques({4, 5}), k3) == Verdict::no);
  CHECK(has_factor(corpus::cycle(6), Pattern::path(3)) == Verdict::yes);
  CHECK(has_factor(corpus::star(5), Pattern::path(2)) == Verdict::no);
}

TEST_CASE("quasiperfect gap examples") {
  auto k3 = Pattern::clique(3);
  auto a = quasiperfect_gap(corpus::cliques({8, 8}), k3, Rational(2, 5));
  CHECK(a.uncovered == 4);
  CHECK(a.allowance == 4);
  CHECK(a.quasiperfect == Verdict::yes);
  auto b = quasiperfect_gap(corpus::complete(6), k3, Rational(9, 10));
  CHECK(b.uncovered == 0);
  CHECK(b.allowance == 2);
  CHECK(b.quasiperfect == Verdict::yes);
  auto c = quasiperfect_gap(g0_10(), k3, Rational(3, 10));
  CHECK(c.uncovered == 7);
  CHECK(c.allowance == 6);
  CHECK(c.quasiperfect == Verdict::no);
  CHECK_THROWS_AS(quasiperfect_gap(g0_10(), k3, Rational(0)), InvalidArgument);
}

TEST_CASE("solver optimum equals the packing oracle") {
  std::vector<Pattern> patterns{Pattern::clique(2), Pattern::clique(3), Pattern::path(3),
                                Pattern::cycle(4), Pattern::clique(4), Pattern::parse("K1,3")};
  for (const auto& g : corpus::seeded(40, 5, 12, 555)) {
    for (const auto& f : patterns) {
      auto out = max_tiling(g, f);
      CHECK(out.optimal);
      CHECK(out.tiling.copies.size() == corpus::max_packing(g, f));
      CHECK(verify_tiling(g, f, out.tiling, g.all()));
      CHECK(out.tiling.uncovered.size() % f.order() == g.order() % f.order());
    }
  }
}

TEST_CASE("adding edges never lowers the optimum") {
  auto k3 = Pattern::clique(3);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto g = corpus::gnp(10, 0.25, seed);
    std::size_t prev = max_tiling(g, k3).tiling.copies.size();
    for (Vertex a = 0; a < 10; a += 3) {
      for (Vertex b = a + 1; b < 10; b += 2) {
        if (g.adjacent(a, b)) continue;
        g = with_extra_edge(g, a, b);
        auto now = max_tiling(g, k3).tiling.copies.size();
        CHECK(now >= prev);
        prev = now;
      }
    }
  }
}

TEST_CASE("dense graphs have triangle factors") {
  auto k3 = Pattern::clique(3);
  std::size_t tested = 0;
  for (std::size_t n : {6u, 9u, 12u}) {
    for (std::uint64_t seed = 0; seed < 300 && tested < 90; ++seed) {
      auto g = corpus::gnp(n, 0.85, seed * 31 + n);
      if (min_degree(g) * 3 < 2 * n) continue;
      ++tested;
      CHECK(has_factor(g, k3) == Verdict::yes);
    }
  }
  CHECK(tested > 30);
}

TEST_CASE("restricted solves and filters") {
  auto g = corpus::complete(9);
  SolveOptions opts;
  opts.within = bits_of(9, {0, 1, 2, 3, 4});
  auto out = max_tiling(g, Pattern::clique(3), opts);
  CHECK(out.tiling.copies.size() == 1);
  CHECK(out.tiling.uncovered.size() == 2);

  SolveOptions only_low;
  only_low.filter = [](const PatternCopy& c) { return c.vertices[0] < 2; };
  auto filtered = max_tiling(g, Pattern::clique(3), only_low);
  CHECK(filtered.optimal);
  CHECK(filtered.tiling.copies.size() == 2);
}

TEST_CASE("budget exhaustion is never reported as optimal") {
  auto g = corpus::gnp(30, 0.4, 17);
  auto out = max_tiling(g, Pattern::cycle(5), 3);
  if (!out.optimal) CHECK(out.upper_bound >= out.tiling.copies.size());
  CHECK(verify_tiling(g, Pattern::cycle(5), out.tiling, g.all()));
}

TEST_CASE("verify_tiling catches corrupted tilings") {
  auto g = corpus::complete(6);
  auto k3 = Pattern::clique(3);
  Tiling bad{{PatternCopy{{0, 1, 2}}, PatternCopy{{2, 3, 4}}}, {5}};
  CHECK_FALSE(verify_tiling(g, k3, bad, g.all()));
  Tiling wrong_rest{{PatternCopy{{0, 1, 2}}}, {3, 4}};
  CHECK_FALSE(verify_tiling(g, k3, wrong_rest, g.all()));
  Tiling fine{{PatternCopy{{0, 1, 2}}}, {3, 4, 5}};
  CHECK(verify_tiling(g, k3, fine, g.all()));
}

TEST_CASE("identical inputs give identical tilings") {
  auto g = corpus::gnp(14, 0.5, 3);
  auto a = max_tiling(g, Pattern::clique(3));
  auto b = max_tiling(g, Pattern::clique(3));
  CHECK(a.tiling.copies == b.tiling.copies);
  CHECK(a.nodes == b.nodes);
}

}
