#include "corpus.hpp"
#include "rtt/absorption.hpp"
#include "rtt/constructions.hpp"
#include "rtt/matching.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>

using namespace rtt;

namespace {

Bits range_bits(std::size_t n, Vertex lo, Vertex hi) {
  Bits b(n);
  for (Vertex v = lo; v < hi; ++v) b.set(v);
  return b;
}

VertexPartition halves(const Graph& g, Vertex split) {
  return VertexPartition(g, {range_bits(g.order(), 0, split), range_bits(g.order(), split, static_cast<Vertex>(g.order()))});
}

// Every k-set of s plus one more vertex splits into copies of a clique:
// for cliques that is just "the union is a clique" when |set| = k.
bool clique_on(const Graph& g, const std::vector<Vertex>& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (!g.adjacent(s[i], s[j])) return false;
  return true;
}

// Brute-force maximum matching size by trying each right vertex in turn.
std::size_t brute_matching(const std::vector<std::vector<bool>>& adj, std::size_t r, std::vector<bool>& used) {
  if (r == adj.front().size()) return 0;
  std::size_t best = brute_matching(adj, r + 1, used);
  for (std::size_t l = 0; l < adj.size(); ++l)
    if (!used[l] && adj[l][r]) {
      used[l] = true;
      best = std::max(best, 1 + brute_matching(adj, r + 1, used));
      used[l] = false;
    }
  return best;
}

std::vector<std::vector<std::size_t>> right_adjacency(const Template& t, const std::vector<std::size_t>& chosen) {
  std::vector<bool> present(t.left(), false);
  for (auto i : chosen) present[i] = true;
  for (auto i = t.x; i < t.left(); ++i) present[i] = true;
  std::vector<std::vector<std::size_t>> out(t.z);
  for (auto [l, r] : t.edges)
    if (present[l]) out[r].push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("absorption") {
  TEST_CASE("hopcroft-karp agrees with brute force and Hall") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
      const auto left = 1 + uniform_below(rng, 7);
      const auto right = 1 + uniform_below(rng, 7);
      Bipartite b{left, right, std::vector<std::vector<std::size_t>>(left)};
      std::vector<std::vector<bool>> dense(left, std::vector<bool>(right, false));
      std::vector<std::vector<std::size_t>> by_right(right);
      for (std::size_t l = 0; l < left; ++l)
        for (std::size_t r = 0; r < right; ++r)
          if (uniform_below(rng, 3) == 0) {
            b.adj[l].push_back(r);
            dense[l][r] = true;
            by_right[r].push_back(l);
          }
      auto m = maximum_matching(b);
      std::vector<bool> used(left, false);
      CHECK(m.size == brute_matching(dense, 0, used));
      CHECK((m.size == right) == corpus::hall_saturates(by_right));
      std::size_t counted = 0;
      for (std::size_t l = 0; l < left; ++l) {
        if (m.match_left[l] == Matching::npos) continue;
        ++counted;
        CHECK(dense[l][m.match_left[l]]);
        CHECK(m.match_right[m.match_left[l]] == l);
      }
      CHECK(counted == m.size);
    }
  }

  TEST_CASE("partitions validate their parts") {
    auto g = corpus::complete(6);
    CHECK_THROWS_AS(VertexPartition(g, {range_bits(6, 0, 4), range_bits(6, 3, 6)}), InvalidArgument);
    CHECK_THROWS_AS(VertexPartition(g, {range_bits(6, 0, 3)}), InvalidArgument);
    auto p = halves(g, 2);
    CHECK(index_vector(p, std::vector<Vertex>{0, 3, 4}) == IndexVector{1, 2});
    CHECK(format_vector({1, 2}) == "(1,2)");
    auto other = corpus::complete(6);
    CHECK_THROWS_AS(index_vector(p, other.vertex_set({0, 1})), HostMismatch);
  }

  TEST_CASE("fans are disjoint and each spans F with the root") {
    auto k3 = Pattern::clique(3);
    auto g = corpus::complete(7);
    auto fan = build_fan(g, k3, 0, g.all());
    CHECK(fan.size() == 3);
    for (std::size_t seed = 1; seed <= 5; ++seed) {
      auto h = corpus::gnp(14, 0.5, seed);
      for (auto f : {k3, Pattern::cycle(4), Pattern::path(3)}) {
        auto sets = build_fan(h, f, 0, h.all());
        Bits seen(14);
        for (const auto& s : sets) {
          CHECK(s.size() == f.order() - 1);
          auto with_root = s;
          with_root.push_back(0);
          CHECK(spanning_copy(h, f, with_root).has_value());
          for (auto x : s) {
            CHECK(x != 0);
            CHECK_FALSE(seen.test(x));
            seen.set(x);
          }
        }
        // greedy maximality: nothing spans F with the root outside the fan
        Bits rest = h.all() - seen;
        rest.reset(0);
        CHECK_FALSE(find_rooted_copy(h, f, 0, rest).copy.has_value());
      }
    }
  }

  TEST_CASE("disjoint connectors in a clique") {
    auto g = corpus::complete(12);
    auto k3 = Pattern::clique(3);
    auto cert = find_disjoint_connectors(g, k3, 0, 1, 1, 10);
    CHECK(cert.strength() == 5);
    Bits seen(12);
    for (const auto& s : cert.connectors()) {
      CHECK(s.size() == 2);
      CHECK(clique_on(g, {s[0], s[1], 0}));
      CHECK(clique_on(g, {s[0], s[1], 1}));
      for (auto x : s) {
        CHECK_FALSE(seen.test(x));
        seen.set(x);
      }
    }
    Bits w(12);
    for (auto x : cert.connectors().front()) w.set(x);
    auto other = cert.avoiding(w);
    REQUIRE(other.has_value());
    CHECK(*other != cert.connectors().front());

    auto split = corpus::cliques({6, 6});
    CHECK(find_disjoint_connectors(split, k3, 0, 6, 2, 5).strength() == 0);
    CHECK_THROWS_AS(find_disjoint_connectors(g, k3, 3, 3, 1, 1), InvalidArgument);
  }

  TEST_CASE("non-clique connectors") {
    // C4 in K4,4 with u, v on one side: S is one same-side vertex plus two opposite.
    auto g = corpus::complete_bipartite(4, 4);
    auto c4 = Pattern::cycle(4);
    auto cert = find_disjoint_connectors(g, c4, 0, 1, 1, 5);
    CHECK(cert.strength() == 2);
    for (const auto& s : cert.connectors()) CHECK(is_connector(g, c4, 0, 1, s, 1));
  }

  TEST_CASE("connectors of length two chain through a middle vertex") {
    // triangles {u,a,b} {a,b,w} {w,c,d} {c,d,v}; u and v share no neighbour
    const Vertex u = 0, a = 1, b = 2, w = 3, c = 4, d = 5, v = 6;
    Graph g(7, {{u, a}, {u, b}, {a, b}, {a, w}, {b, w}, {w, c}, {w, d}, {c, d}, {c, v}, {d, v}});
    auto k3 = Pattern::clique(3);
    CHECK(find_disjoint_connectors(g, k3, u, v, 1, 1).strength() == 0);
    auto cert = find_disjoint_connectors(g, k3, u, v, 2, 1);
    REQUIRE(cert.strength() == 1);
    CHECK(cert.connectors().front() == std::vector<Vertex>{a, b, w, c, d});
    CHECK(is_connector(g, k3, u, v, cert.connectors().front(), 2));
    CHECK_FALSE(is_connector(g, k3, u, v, cert.connectors().front(), 1));
  }

  TEST_CASE("certificates reject bad connectors") {
    auto g = corpus::complete(6);
    auto k3 = Pattern::clique(3);
    CHECK_THROWS_AS(ReachabilityCertificate::make(g, k3, 0, 1, 1, {{2, 3}, {3, 4}}), Error);
    CHECK_THROWS_AS(ReachabilityCertificate::make(g, k3, 0, 1, 1, {{2, 3, 4}}), Error);
    CHECK_THROWS_AS(ReachabilityCertificate::make(g, k3, 0, 1, 1, {{0, 3}}), Error);
    CHECK(ReachabilityCertificate::make(g, k3, 0, 1, 1, {{2, 3}, {4, 5}}).strength() == 2);
  }

  TEST_CASE("concatenation") {
    auto g = corpus::complete(20);
    auto k3 = Pattern::clique(3);
    auto uv = find_disjoint_connectors(g, k3, 0, 1, 1, 20);
    auto vw = find_disjoint_connectors(g, k3, 1, 2, 1, 20);
    CHECK(uv.strength() == 9);
    auto uw = concatenate_reachability(g, k3, uv, vw);
    CHECK(uw.t() == 2);
    CHECK(uw.u() == 0);
    CHECK(uw.v() == 2);
    // each connector uses five of the eighteen vertices other than u and w
    CHECK(uw.strength() == 3);
    for (const auto& s : uw.connectors()) CHECK(is_connector(g, k3, 0, 2, s, 2));

    auto same = concatenate_reachability(g, k3, uv, find_disjoint_connectors(g, k3, 1, 0, 1, 3));
    CHECK(same.u() == same.v());
    CHECK(same.strength() == uv.strength());

    CHECK_THROWS_AS(concatenate_reachability(g, k3, uv, uv), InvalidArgument);
    auto h = corpus::complete(20);
    auto foreign = find_disjoint_connectors(h, k3, 1, 2, 1, 2);
    CHECK_THROWS_AS(concatenate_reachability(g, k3, uv, foreign), HostMismatch);

    auto empty = find_disjoint_connectors(corpus::cliques({10, 10}), k3, 0, 10, 1, 2);
    auto g2 = corpus::cliques({10, 10});
    auto e1 = find_disjoint_connectors(g2, k3, 0, 10, 1, 2);
    auto e2 = find_disjoint_connectors(g2, k3, 10, 11, 1, 2);
    CHECK(empty.strength() == 0);
    CHECK(concatenate_reachability(g2, k3, e1, e2).strength() == 0);
  }

  TEST_CASE("robust vectors") {
    auto g = corpus::complete(12);
    auto k3 = Pattern::clique(3);
    auto p = halves(g, 6);
    CHECK(robust_vector_certificate(g, k3, p, {2, 1}, 10).strength() == 3);
    CHECK(robust_vector_certificate(g, k3, p, {3, 0}, 10).strength() == 2);
    auto capped = robust_vector_certificate(g, k3, p, {1, 2}, 2);
    CHECK(capped.strength() >= 2);
    for (const auto& c : capped.copies()) CHECK(index_vector(p, c.vertices) == IndexVector{1, 2});
    CHECK_THROWS_AS(robust_vector_certificate(g, k3, p, {1, 1}, 1), InvalidArgument);
    CHECK_THROWS_AS(robust_vector_certificate(g, k3, p, {1, 1, 1}, 1), InvalidArgument);

    auto split = corpus::cliques({6, 6});
    auto q = halves(split, 6);
    CHECK(robust_vector_certificate(split, k3, q, {2, 1}, 5).strength() == 0);
  }

  TEST_CASE("absorber verification") {
    auto k3 = Pattern::clique(3);
    auto g = corpus::complete(9);
    CHECK(verify_absorber(g, k3, {0, 1, 2}, {3, 4, 5}, 1) == Verdict::yes);
    CHECK(verify_absorber(g, k3, {0, 1, 2}, {}, 1) == Verdict::yes);
    CHECK_THROWS_AS(verify_absorber(g, k3, {0, 1}, {3, 4, 5}, 1), InvalidArgument);
    CHECK_THROWS_AS(verify_absorber(g, k3, {0, 1, 2}, {2, 4, 5}, 1), InvalidArgument);
    auto big = corpus::complete(14);
    std::vector<Vertex> ten{3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    CHECK_THROWS_AS(verify_absorber(big, k3, {0, 1, 2}, ten, 1), InvalidArgument);

    // {0,1,2} is independent, so nothing can absorb it alone inside a triangle
    Graph star(6, {{0, 3}, {1, 4}, {2, 5}, {3, 4}, {4, 5}, {3, 5}});
    CHECK(verify_absorber(star, k3, {0, 1, 2}, {3, 4, 5}, 1) == Verdict::no);
  }

  TEST_CASE("twin absorbers") {
    auto k3 = Pattern::clique(3);
    auto g = corpus::complete(15);
    auto p = VertexPartition::trivial(g);
    // twin (3) plus three connectors (6) leaves too little for a second absorber
    auto one = find_disjoint_absorbers(g, k3, p, {0, 1, 2}, 1, 2);
    REQUIRE(one.size() == 1);
    CHECK(one.front().size() == 9);
    CHECK(verify_absorber(g, k3, {0, 1, 2}, one.front(), 1) == Verdict::yes);

    auto split = corpus::cliques({9, 9});
    auto halves9 = halves(split, 9);
    CHECK(find_disjoint_absorbers(split, k3, halves9, {0, 1, 9}, 1, 1).empty());

    auto two = corpus::cliques({15, 15});
    auto p2 = halves(two, 15);
    auto found = find_disjoint_absorbers(two, k3, p2, {0, 1, 2}, 1, 3);
    CHECK(found.size() >= 1);
    Bits seen(30);
    for (const auto& a : found) {
      CHECK(verify_absorber(two, k3, {0, 1, 2}, a, 1) == Verdict::yes);
      for (auto x : a) {
        CHECK(x < 15);
        CHECK_FALSE(seen.test(x));
        seen.set(x);
      }
    }
  }

  TEST_CASE("templates match every small subset onto Z") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto t = montgomery_template(2, Rational(3, 2), seed);
      CHECK(t.verified);
      CHECK(t.exhaustive);
      CHECK(t.x == 5);
      CHECK(t.y == 4);
      CHECK(t.z == 6);
      CHECK(t.max_degree <= 40);
      CHECK(t.subsets_checked == 10);
      // Hall check on every 2-subset of X
      for (std::size_t i = 0; i < t.x; ++i)
        for (std::size_t j = i + 1; j < t.x; ++j) CHECK(corpus::hall_saturates(right_adjacency(t, {i, j})));
    }
    auto m4 = montgomery_template(4, Rational(1), 3);
    CHECK(m4.subsets_checked == 70);
    auto big = montgomery_template(7, Rational(1), 3);
    CHECK_FALSE(big.exhaustive);
    CHECK(big.verified);
    auto tight = montgomery_template(3, Rational(0), 1);
    CHECK(tight.x == 3);
    CHECK(tight.subsets_checked == 1);
    CHECK_THROWS_AS(montgomery_template(1, Rational(1), 1), InvalidArgument);

    // deleting every edge at one Z vertex breaks the template
    auto broken = montgomery_template(2, Rational(3, 2), 1);
    std::erase_if(broken.edges, [](auto e) { return e.second == 0; });
    auto check = check_template(broken);
    CHECK(check.perfect == 0);
    CHECK(check.failing_subset == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("absorbing set in a clique") {
    auto g = corpus::complete(30);
    auto k3 = Pattern::clique(3);
    AbsorbingParams params;
    params.gamma = Rational(4, 5);
    params.seed = 7;
    auto a = build_absorbing_set(g, k3, params);
    CHECK(a.vertices.count() == 21);
    CHECK(a.capacity == 1);
    CHECK(a.xi == Rational(1, 30));
    CHECK(reverify_ledger(g, k3, a.ledger));
    auto check = verify_absorbing_set(g, k3, a.vertices, a.scope, 3);
    CHECK(check.verdict == Verdict::yes);
    CHECK(check.checked == 1 + 84);

    auto tampered = a.ledger;
    tampered["X"][0] = tampered["Y"][0];
    CHECK_FALSE(reverify_ledger(g, k3, tampered));
    auto truncated = a.ledger;
    truncated["absorbers"].erase(0);
    CHECK_FALSE(reverify_ledger(g, k3, truncated));
  }

  TEST_CASE("absorbing set inside one part") {
    auto g = corpus::cliques({24, 24});
    auto k3 = Pattern::clique(3);
    AbsorbingParams params;
    params.scope = range_bits(48, 0, 24);
    params.gamma = Rational(1, 2);
    params.seed = 3;
    auto a = build_absorbing_set(g, k3, params);
    CHECK((a.vertices - params.scope).none());
    CHECK(reverify_ledger(g, k3, a.ledger));
    CHECK(verify_absorbing_set(g, k3, a.vertices, a.scope, 3).verdict == Verdict::yes);
  }

  TEST_CASE("absorbing set stage failures") {
    auto k3 = Pattern::clique(3);
    AbsorbingParams params;
    auto small = corpus::complete(15);
    try {
      build_absorbing_set(small, k3, params);
      FAIL("expected a sizing failure");
    } catch (const StageError& e) {
      CHECK(e.stage == "sizing");
    }
    // no triangles at all: the reservoir has no fans
    auto bip = corpus::complete_bipartite(15, 15);
    try {
      build_absorbing_set(bip, k3, params);
      FAIL("expected a reservoir failure");
    } catch (const StageError& e) {
      CHECK(e.stage == "reservoir");
    }
  }

  TEST_CASE("merging parts") {
    auto k3 = Pattern::clique(3);
    auto g = corpus::complete(12);
    auto merged = merge_partition(g, k3, halves(g, 6), 1, 2);
    CHECK(merged.partition.size() == 1);
    REQUIRE(merged.log.size() == 1);
    CHECK(merged.log.front().parts_before == 2);
    CHECK(merged.log.front().strength_s >= 2);

    auto split = corpus::cliques({9, 9});
    CHECK(merge_partition(split, k3, halves(split, 9), 1, 2).partition.size() == 2);

    // the result does not depend on how parts are listed
    auto three = VertexPartition(g, {range_bits(12, 8, 12), range_bits(12, 0, 4), range_bits(12, 4, 8)});
    auto again = VertexPartition(g, {range_bits(12, 0, 4), range_bits(12, 4, 8), range_bits(12, 8, 12)});
    auto r1 = merge_partition(g, k3, three, 1, 2);
    auto r2 = merge_partition(g, k3, again, 1, 2);
    CHECK(r1.partition.parts() == r2.partition.parts());
    CHECK(r1.log.size() == r2.log.size());
    CHECK(r1.partition.size() == 1);
  }

  TEST_CASE("worked examples") {
    auto k3 = Pattern::clique(3);
    auto g12 = g0(12, Rational(1, 2));
    CHECK(find_disjoint_connectors(g12, k3, 8, 10, 1, 10).strength() == 3);

    auto k9 = corpus::complete(9);
    auto split = halves(k9, 4);
    CHECK(robust_vector_certificate(k9, k3, split, {3, 0}, 10).strength() == 1);
    CHECK(robust_vector_certificate(k9, k3, split, {1, 2}, 10).strength() == 2);

    auto k12 = corpus::complete(12);
    CHECK(verify_absorber(k12, k3, {0, 1, 2}, {3, 4, 5}, 1) == Verdict::yes);
    CHECK(verify_absorber(k12, k3, {0, 1, 2}, {3, 4, 5, 6}, 1) == Verdict::no);
    auto two6 = corpus::cliques({6, 6});
    CHECK(verify_absorber(two6, k3, {0, 1, 6}, {2, 3, 4}, 1) == Verdict::no);

    auto k18 = corpus::complete(18);
    CHECK(merge_partition(k18, k3, halves(k18, 9), 1, 2).partition.size() == 1);
    auto g20 = g0(20, Rational(1, 2));
    CHECK(merge_partition(g20, k3, halves(g20, 10), 1, 2).partition.size() == 1);
  }

  TEST_CASE("initial partitions") {
    auto k3 = Pattern::clique(3);
    auto k18 = corpus::complete(18);
    auto one = initial_partition(k18, k3, Rational(1, 10), 1, 1000);
    CHECK(one.partition.size() == 1);
    CHECK(one.threshold == 2);
    CHECK(one.sampled_pairs == 153);
    CHECK(one.weak_within == 0);
    for (const auto& c : one.within) CHECK(c.strength() >= 2);

    auto split = corpus::cliques({9, 9});
    CHECK(initial_partition(split, k3, Rational(1, 10), 1, 1000).partition.size() == 2);

    auto dense = g0(20, Rational(1, 2));
    CHECK(initial_partition(dense, k3, Rational(1, 10), 1, 1000).partition.size() == 1);

    auto sampled = initial_partition(k18, k3, Rational(1, 10), 1, 40, 5);
    CHECK(sampled.sampled_pairs == 40);
    auto repeat = initial_partition(k18, k3, Rational(1, 10), 1, 40, 5);
    CHECK(sampled.partition.parts() == repeat.partition.parts());
  }
}
