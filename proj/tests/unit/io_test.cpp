#include "corpus.hpp"
#include "rtt/io.hpp"

#include <doctest.h>

#include <filesystem>

using namespace rtt;

namespace {

bool same_adjacency(const Graph& a, const Graph& b) {
  if (a.order() != b.order()) return false;
  for (Vertex v = 0; v < a.order(); ++v)
    if (a.neighbors(v) != b.neighbors(v)) return false;
  return true;
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "rtt_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("graph6 examples") {
    CHECK(to_graph6(corpus::complete(4)) == "C~");
    CHECK(to_graph6(corpus::complete(1)) == "@");
    CHECK(to_graph6(Graph(0, {})) == "?");
    CHECK(to_graph6(corpus::path(2)) == "A_");
    CHECK(from_graph6("C~").edge_count() == 6);
    CHECK(from_graph6("@").order() == 1);
    CHECK(from_graph6("?").order() == 0);
  }

  TEST_CASE("graph6 long form") {
    auto g = corpus::gnp(63, 0.3, 4);
    auto text = to_graph6(g);
    CHECK(text.substr(0, 4) == std::string{char(126), char(63), char(63 + 0), char(63 + 63)});
    CHECK(text == corpus::graph6(g));
    CHECK(same_adjacency(from_graph6(text), g));
    auto big = corpus::gnp(300, 0.05, 2);
    CHECK(to_graph6(big) == corpus::graph6(big));
    CHECK(same_adjacency(from_graph6(to_graph6(big)), big));
  }

  TEST_CASE("graph6 fuzz against the reference encoder") {
    Rng rng(2718);
    for (int i = 0; i < 10000; ++i) {
      const auto n = uniform_below(rng, 63);
      const double p = static_cast<double>(uniform_below(rng, 101)) / 100.0;
      auto g = corpus::gnp(n, p, derive_seed(2718, static_cast<std::uint64_t>(i)));
      auto text = to_graph6(g);
      REQUIRE(text == corpus::graph6(g));
      REQUIRE(same_adjacency(from_graph6(text), g));
    }
  }

  TEST_CASE("graph6 rejects malformed input") {
    CHECK_THROWS_AS(from_graph6(""), ParseError);
    CHECK_THROWS_AS(from_graph6("C"), ParseError);
    CHECK_THROWS_AS(from_graph6("C~~"), ParseError);
    CHECK_THROWS_AS(from_graph6("C\x7f"), ParseError);
    CHECK_THROWS_AS(from_graph6("A`"), ParseError);  // padding bit set
    CHECK_THROWS_AS(from_graph6(">>graph6<<C~"), ParseError);
    try {
      from_graph6("C!");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position == 1);
    }
  }

  TEST_CASE("edge lists") {
    auto g = corpus::petersen();
    auto text = write_edge_list(g);
    CHECK(text.substr(0, 6) == "10 15\n");
    CHECK(same_adjacency(parse_edge_list(text), g));
    CHECK(parse_edge_list("# comment\n3 1\n\n0 2\n").edge_count() == 1);
    CHECK_THROWS_AS(parse_edge_list(""), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3 2\n0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3 1\n1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3 1\n0 3\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3 1\n0 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3 2\n0 1\n0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3 1\n0 1\n1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3 x\n"), ParseError);
  }

  TEST_CASE("files round trip every corpus graph") {
    auto dir = scratch_dir();
    auto graphs = corpus::seeded(50, 4, 10, 8);
    graphs.push_back(corpus::petersen());
    graphs.push_back(Graph(0, {}));
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      for (auto ext : {".g6", ".edges"}) {
        auto path = dir / ("g" + std::to_string(i) + ext);
        write_graph(path, graphs[i]);
        CHECK(same_adjacency(read_graph(path), graphs[i]));
      }
    }
    CHECK(format_for("x.g6") == GraphFormat::graph6);
    CHECK(format_for("x.txt") == GraphFormat::edge_list);
    CHECK(parse_format("graph6") == GraphFormat::graph6);
    CHECK_THROWS_AS(parse_format("sparse6"), InvalidArgument);
    CHECK_THROWS_AS(read_graph(dir / "missing.g6"), Error);
  }
}
