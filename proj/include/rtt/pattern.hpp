#pragma once

#include "rtt/graph.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rtt {

enum class PatternKind { clique, cycle, tree, general };
std::string_view to_string(PatternKind kind);

/// The tile F: a small labelled graph on vertices 0..k-1.
class Pattern {
public:
  static constexpr std::size_t max_order = 16;

  Pattern(std::size_t k, std::vector<Edge> edges, std::string name = {});

  /// Literals: K3, C5, P4, K1,3 (complete bipartite), T:k=5;edges=0-1,1-2
  /// (tree) and G:k=4;edges=0-1,... (general).
  static Pattern parse(std::string_view literal);
  static Pattern clique(std::size_t k);
  static Pattern cycle(std::size_t k);
  static Pattern path(std::size_t k);

  std::size_t order() const { return k_; }
  const std::vector<Edge>& edges() const { return edges_; }
  PatternKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool adjacent(std::size_t i, std::size_t j) const { return (adj_[i] >> j) & 1u; }
  std::uint32_t neighbor_mask(std::size_t i) const { return adj_[i]; }
  std::size_t degree(std::size_t i) const;
  bool connected() const { return connected_; }

  /// |Aut(F)|, computed once with a stabiliser chain.
  std::uint64_t automorphism_count() const { return aut_count_; }
  /// Every automorphism as an image table; only materialised for k <= 8.
  const std::vector<std::vector<std::uint8_t>>& automorphisms() const;

private:
  std::size_t k_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> adj_;
  PatternKind kind_ = PatternKind::general;
  bool connected_ = true;
  std::string name_;
  std::uint64_t aut_count_ = 1;
  std::vector<std::vector<std::uint8_t>> automorphisms_;
};

/// A copy of F in a host: vertices[i] is the image of pattern vertex i.
/// Stored in canonical order, the lexicographically least tuple among the
/// automorphic relabellings.
struct PatternCopy {
  std::vector<Vertex> vertices;

  Bits vertex_bits(std::size_t n) const { return bits_of(n, vertices); }
  friend bool operator==(const PatternCopy&, const PatternCopy&) = default;
  friend auto operator<=>(const PatternCopy&, const PatternCopy&) = default;
};

/// True when the tuple is injective and realises every pattern edge in g.
bool is_copy(const Graph& g, const Pattern& f, const PatternCopy& copy);
PatternCopy canonical_copy(const Pattern& f, std::vector<Vertex> images);

/// Minimum number of vertices whose deletion leaves F acyclic.
std::size_t gamma(const Pattern& f);

enum class StreamStatus { complete, truncated };

/// Calls `sink` once per unordered copy of F (subgraph semantics) inside
/// `within`; returning false from the sink stops the enumeration.
StreamStatus for_each_copy(const Graph& g, const Pattern& f, const Bits& within,
                           const std::function<bool(const PatternCopy&)>& sink);

/// Every copy through v inside within ∪ {v}, each emitted once.
StreamStatus for_each_copy_through(const Graph& g, const Pattern& f, Vertex v, const Bits& within,
                                   const std::function<bool(const PatternCopy&)>& sink);

struct CopyStream {
  std::vector<PatternCopy> copies;
  StreamStatus status = StreamStatus::complete;
};

CopyStream enumerate_copies(const Graph& g, const Pattern& f, const VertexSet& within,
                            std::size_t cap = static_cast<std::size_t>(-1));

/// Some copy of F through host vertex v using only vertices of `within`
/// (besides v). Exhaustive backtracking; nullopt if none exists or the
/// node budget ran out (see `complete`).
struct RootedSearch {
  std::optional<PatternCopy> copy;
  bool complete = true;
  std::uint64_t nodes = 0;
};
RootedSearch find_rooted_copy(const Graph& g, const Pattern& f, Vertex v, const Bits& within,
                              std::uint64_t budget = default_node_budget);

/// Whether G[S] contains F as a spanning subgraph, for |S| = k.
std::optional<PatternCopy> spanning_copy(const Graph& g, const Pattern& f,
                                         const std::vector<Vertex>& s);

enum class EmbedRoute { degenerate_tree, neighbourhood_cycle, neighbourhood_clique, exhaustive, none };
std::string_view to_string(EmbedRoute route);

struct EmbedOutcome {
  std::optional<PatternCopy> copy;
  /// d_U(v) >= k * alpha_bound held, so a copy exists whenever alpha_bound >= α(G[U ∩ N(v)]).
  bool guaranteed = false;
  /// The fallback search finished, so "not found" is definitive.
  bool complete = true;
  EmbedRoute route = EmbedRoute::none;
};

/// Constructive embedding of a tree, cycle or clique through v with the other
/// vertices in u: trees by greedy extension inside a peeled high-minimum-degree
/// core of N_U(v), cycles through a pair of neighbours with a rich common
/// neighbourhood, cliques by clique search in N_U(v). Falls back to exhaustive
/// search when the constructive route fails.
EmbedOutcome embed_pattern_at(const Graph& g, const Pattern& f, Vertex v, const VertexSet& u,
                              std::size_t alpha_bound,
                              std::uint64_t budget = default_node_budget);
EmbedOutcome embed_pattern_at(const Graph& g, const Pattern& f, Vertex v, const Bits& u,
                              std::size_t alpha_bound,
                              std::uint64_t budget = default_node_budget);

/// Iteratively deletes vertices of degree < min_deg from G[within].
Bits peel_to_min_degree(const Graph& g, const Bits& within, std::size_t min_deg);

}  // namespace rtt
