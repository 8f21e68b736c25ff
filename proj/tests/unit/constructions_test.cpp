#include "corpus.hpp"
#include "rtt/constructions.hpp"
#include "rtt/independence.hpp"
#include "rtt/tiling.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>

using namespace rtt;

namespace {

// Dense eigensolve written against Eigen directly, ascending.
std::vector<double> oracle_spectrum(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Vertex u = 0; u < g.order(); ++u)
    for (Vertex v = 0; v < g.order(); ++v)
      if (g.adjacent(u, v)) a(u, v) = 1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return out;
}

std::size_t cross_triangles(const Graph& g, const Bits& v1) {
  std::size_t count = 0;
  for (Vertex a = 0; a < g.order(); ++a)
    for (Vertex b = a + 1; b < g.order(); ++b)
      for (Vertex c = b + 1; c < g.order(); ++c) {
        if (!g.adjacent(a, b) || !g.adjacent(b, c) || !g.adjacent(a, c)) continue;
        auto in = v1.test(a) + v1.test(b) + v1.test(c);
        if (in != 0 && in != 3) ++count;
      }
  return count;
}

}  // namespace

TEST_SUITE("constructions") {

TEST_CASE("g0 examples") {
  auto g = g0(10, Rational(3, 10));
  CHECK(min_degree(g) == 3);
  CHECK(corpus::alpha_r(g, 2) == 7);
  CHECK(corpus::clique_number(g) == 4);
  CHECK(g0(7, Rational(1)) == corpus::complete(7));
  CHECK(g0(4, Rational(1, 4)) == corpus::star(3));
  CHECK_THROWS_AS(g0(5, Rational(0)), InvalidArgument);
  CHECK_THROWS_AS(g0(5, Rational(6, 5)), InvalidArgument);
}

TEST_CASE("g0 minimum degree is the clique size") {
  for (std::size_t n = 2; n <= 14; ++n)
    for (std::int64_t num = 1; num <= 10; ++num) {
      Rational eta(num, 10);
      auto x1 = static_cast<std::size_t>(ceil_of(eta * static_cast<std::int64_t>(n)));
      auto g = g0(n, eta);
      CHECK(min_degree(g) == (x1 < n ? x1 : n - 1));
      // X2 independent
      for (Vertex u = static_cast<Vertex>(x1); u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) CHECK_FALSE(g.adjacent(u, v));
    }
}

TEST_CASE("disjoint cliques") {
  auto g = disjoint_cliques({5, 7});
  CHECK(min_degree(g) == 4);
  CHECK(corpus::alpha_star_r(g, 2) == 5);
  CHECK(alpha_star_r(g, 2).value == 5);
  CHECK(disjoint_cliques({3}) == corpus::complete(3));
  CHECK(disjoint_cliques({8, 8}) == corpus::cliques({8, 8}));
  CHECK_THROWS_AS(disjoint_cliques({}), InvalidArgument);
}

TEST_CASE("random regular graphs are simple, regular and seeded") {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    Rng a(s), b(s);
    auto g = random_regular(20, 4, a);
    CHECK(g == random_regular(20, 4, b));
    for (Vertex v = 0; v < 20; ++v) CHECK(g.degree(v) == 4);
  }
  Rng rng(1);
  CHECK_THROWS_AS(random_regular(7, 3, rng), InvalidArgument);
  CHECK_THROWS_AS(random_regular(4, 4, rng), InvalidArgument);
}

TEST_CASE("perturb") {
  auto g = corpus::cycle(12);
  CHECK(perturb(g, Rational(0), 5) == g);
  CHECK(perturb(g, Rational(1), 5) == corpus::complete(12));
  auto a = perturb(g, Rational(1, 4), 9);
  CHECK(a == perturb(g, Rational(1, 4), 9));
  for (auto [u, v] : g.edges()) CHECK(a.adjacent(u, v));
}

TEST_CASE("triangle-factor blocker structure") {
  for (std::size_t n : {9, 12, 15, 18, 24})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CAPTURE(n);
      CAPTURE(seed);
      auto b = triangle_factor_blocker(n, 4, seed);
      CHECK(b.graph.order() == n);
      CHECK(b.cross_triangle_free);
      CHECK(cross_triangles(b.graph, b.v1) == 0);
      CHECK((b.v1 | b.v2).count() == n);
      CHECK((b.v1 & b.v2).none());
      CHECK(b.v1.count() % 3 != b.v2.count() % 3);
      CHECK(static_cast<std::int64_t>(min_degree(b.graph)) >=
            static_cast<std::int64_t>((n + 1) / 2) - 1 - 16 - 4);
      CHECK(b.spectrum.d == 4);
      CHECK(b.spectrum.lambda <= 4.0 + 1e-9);
      // each side's within-part graph leaves every G0 neighbourhood independent
      for (Vertex x = 0; x < b.g0.order(); ++x) {
        auto nb = members(b.g0.neighbors(x));
        for (auto p : nb)
          for (auto q : nb)
            if (p < q && p < b.v1.count() && q < b.v1.count()) CHECK_FALSE(b.graph.adjacent(p, q));
      }
    }
}

TEST_CASE("blocker has no triangle factor") {
  for (std::size_t n : {12, 18, 24}) {
    auto b = triangle_factor_blocker(n, 4, 1);
    CHECK(has_factor(b.graph, Pattern::clique(3)) == Verdict::no);
  }
  CHECK(corpus::max_packing(triangle_factor_blocker(12, 4, 2).graph, Pattern::clique(3)) < 4);
}

TEST_CASE("blocker parameter checks") {
  CHECK_THROWS_AS(triangle_factor_blocker(10, 4, 1), InvalidArgument);
  CHECK_THROWS_AS(triangle_factor_blocker(12, 3, 1), InvalidArgument);
  CHECK_THROWS_AS(triangle_factor_blocker(12, 2, 1), InvalidArgument);
  CHECK_THROWS_AS(triangle_factor_blocker(6, 4, 1), InvalidArgument);
}

TEST_CASE("second eigenvalue examples") {
  auto k6 = second_eigenvalue(corpus::complete(6));
  CHECK(k6.lambda == doctest::Approx(1).epsilon(1e-8));
  CHECK(k6.d == 5);

  auto c8 = second_eigenvalue(corpus::cycle(8));
  CHECK(c8.lambda2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(c8.lambda_n == doctest::Approx(-2).epsilon(1e-8));
  CHECK(c8.lambda == doctest::Approx(2).epsilon(1e-8));

  auto pet = second_eigenvalue(corpus::petersen());
  CHECK(pet.lambda == doctest::Approx(2).epsilon(1e-8));
  CHECK(pet.lambda2 == doctest::Approx(1).epsilon(1e-8));
  CHECK(pet.method == "power");
}

TEST_CASE("power iteration agrees with a dense eigensolve") {
  Rng rng(77);
  for (int i = 0; i < 10; ++i) {
    auto g = random_regular(20, 4, rng);
    auto rep = second_eigenvalue(g);
    auto ev = oracle_spectrum(g);
    CHECK(rep.converged);
    CHECK(rep.method == "power");
    CHECK(std::abs(rep.lambda2 - ev[18]) < 1e-6);
    CHECK(std::abs(rep.lambda_n - ev[0]) < 1e-6);
    CHECK(rep.lambda <= 4 + 1e-9);
  }
}

TEST_CASE("irregular inputs report the spectral radius") {
  auto rep = second_eigenvalue(corpus::star(4));
  CHECK_FALSE(rep.d.has_value());
  CHECK(rep.lambda == doctest::Approx(2).epsilon(1e-8));
}

TEST_CASE("expander mixing") {
  auto k = expander_mixing_check(corpus::complete(8), 1.0, 0, 1);
  CHECK(k.pass);
  CHECK(k.exhaustive);
  CHECK(k.pairs == (1ull << 16));

  auto pet = corpus::petersen();
  CHECK(expander_mixing_check(pet, 2.0, 0, 1).pass);
  // an underestimate is caught with a witness pair
  auto bad = expander_mixing_check(pet, 0.5, 0, 1);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_slack < 0);
  CHECK_FALSE(bad.worst_a.empty());

  auto all = pet.vertex_set(pet.all());
  CHECK(edges_between(pet, all, all) == 3 * 10);

  Rng rng(3);
  auto g = random_regular(20, 4, rng);
  auto rep = expander_mixing_check(g, second_eigenvalue(g).lambda, 10'000, 4);
  CHECK(rep.pass);
  CHECK_FALSE(rep.exhaustive);
  CHECK(rep.pairs == 10'000);
}

TEST_CASE("short cycle counts agree with girth") {
  for (const auto& g : corpus::seeded(30, 5, 10, 41)) {
    auto gi = corpus::girth(g);
    for (std::size_t k = 3; k <= 6; ++k) {
      auto counts = short_cycle_counts(g, k);
      bool none = std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; });
      CHECK(none == (gi == 0 || gi > k));
    }
  }
  auto c5 = short_cycle_counts(corpus::cycle(5), 5);
  CHECK(c5 == std::vector<std::size_t>(5, 1));
  auto k4 = short_cycle_counts(corpus::complete(4), 4);
  // each vertex of K4 lies on 3 triangles and 3 four-cycles
  CHECK(k4 == std::vector<std::size_t>(4, 6));
}

TEST_CASE("high girth generator verifies its output") {
  auto made = high_girth_bihole_free(30, 3, Rational(2, 5), 1);
  CHECK(made.graph.order() == 30);
  auto gi = girth(made.graph);
  CHECK((!gi || *gi > 3));
  CHECK(has_partite_hole(made.graph, 2, 12).verdict == Verdict::no);
  CHECK(made.record.metric("alpha_star_exact") == "true");
  CHECK(std::stoul(made.record.metric("alpha_star")) < 12);

  auto again = high_girth_bihole_free(30, 3, Rational(2, 5), 1);
  CHECK(again.graph == made.graph);
}

TEST_CASE("high girth generator reports the closest failure") {
  try {
    high_girth_bihole_free(30, 4, Rational(2, 5), 1, 200'000);
    FAIL("expected a generation failure");
  } catch (const GenerationFailure& e) {
    CHECK(e.closest.name == "high_girth_bihole_free");
    CHECK_FALSE(e.closest.verified);
    CHECK_FALSE(e.closest.metric("alpha_star").empty());
  }
  CHECK_THROWS_AS(high_girth_bihole_free(9, 3, Rational(1, 2), 1), InvalidArgument);
}

TEST_CASE("clique-free generator") {
  auto made = clique_free_low_alpha(50, 2, Rational(1), 3);
  CHECK(made.graph.order() == 50);
  CHECK(clique_number(made.graph) <= 2);
  CHECK(made.record.metric("alpha_r_exact") == "true");
  CHECK(std::stoul(made.record.metric("alpha_r")) == alpha_r(made.graph, 2).value);

  auto k4free = clique_free_low_alpha(24, 3, Rational(1), 5);
  CHECK(clique_number(k4free.graph) <= 3);

  auto tiny = clique_free_low_alpha(5, 6, Rational(1), 2);
  CHECK(tiny.graph.order() == 5);
  CHECK(tiny.record.metric("clique_deletions") == "0");
  CHECK_THROWS_AS(clique_free_low_alpha(10, 1, Rational(1), 1), InvalidArgument);
}

TEST_CASE("clique-free generator with an alpha target") {
  auto made = clique_free_low_alpha(30, 2, Rational(1, 2), 8);
  CHECK(clique_number(made.graph) <= 2);
  CHECK(alpha_r(made.graph, 2).value < 15);
}

TEST_CASE("spec literals") {
  auto spec = ConstructionSpec::parse("g0:n=10,eta=3/10");
  REQUIRE(spec.components.size() == 1);
  CHECK(spec.components[0].name == "g0");
  CHECK(generate(spec).graph == g0(10, Rational(3, 10)));

  CHECK(generate(ConstructionSpec::parse("cliques:sizes=8+8")).graph == corpus::cliques({8, 8}));
  auto b = generate(ConstructionSpec::parse("blocker:n=24,d=4,seed=1"));
  REQUIRE(b.blocker.has_value());
  CHECK(b.graph == triangle_factor_blocker(24, 4, 1).graph);

  auto joined = generate(ConstructionSpec::parse("g0:n=20,eta=1/5|cliquefree:n=20,r=2,seed=3"));
  CHECK(joined.records.size() == 2);
  for (auto [u, v] : g0(20, Rational(1, 5)).edges()) CHECK(joined.graph.adjacent(u, v));

  auto p = generate(ConstructionSpec::parse("cliques:sizes=4+4|perturbed_union:p=1,seed=2"));
  CHECK(p.graph == corpus::complete(8));

  CHECK_THROWS_AS(ConstructionSpec::parse("nope:n=3"), ParseError);
  CHECK_THROWS_AS(ConstructionSpec::parse("g0:n=3,zeta=1"), ParseError);
  CHECK_THROWS_AS(ConstructionSpec::parse("g0:n"), ParseError);
  CHECK_THROWS_AS(ConstructionSpec::parse("g0:n=3,n=4"), ParseError);
  CHECK_THROWS_AS(ConstructionSpec::parse("perturbed_union:p=1/2"), ParseError);
  CHECK_THROWS_AS(generate(ConstructionSpec::parse("g0:n=10")), InvalidArgument);
  CHECK_THROWS_AS(generate(ConstructionSpec::parse("g0:n=10,eta=1|g0:n=11,eta=1")), InvalidArgument);
  CHECK_THROWS_AS(generate(ConstructionSpec::parse("g0:n=-3,eta=1")), InvalidArgument);
}

TEST_CASE("identical specs give identical graphs") {
  for (const char* text : {"blocker:n=18,d=4,seed=4", "cliquefree:n=30,r=2,seed=9",
                           "girth:n=20,k=3,alpha=1/2,seed=2", "g0:n=12,eta=1/3|perturbed_union:p=1/5,seed=6"}) {
    auto spec = ConstructionSpec::parse(text);
    CHECK(generate(spec).graph == generate(spec).graph);
  }
}

}  // TEST_SUITE
