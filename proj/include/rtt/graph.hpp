#pragma once

#include "rtt/common.hpp"

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rtt {

using Edge = std::pair<Vertex, Vertex>;

class VertexSet;

/// Undirected simple graph on vertices 0..n-1, immutable after construction.
/// Each vertex keeps its neighborhood as a packed bit row so that common
/// neighborhoods are a single AND.
class Graph {
public:
  Graph() = default;
  Graph(std::size_t n, const std::vector<Edge>& edges, std::string label = {});

  /// Builds from adjacency rows; rows must be symmetric and loop-free.
  static Graph from_rows(std::vector<Bits> rows, std::string label = {});

  std::size_t order() const { return rows_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const Bits& neighbors(Vertex v) const { return rows_[v]; }
  std::size_t degree(Vertex v) const { return rows_[v].count(); }
  bool adjacent(Vertex u, Vertex v) const { return rows_[u].test(v); }
  std::vector<Edge> edges() const;
  const std::string& label() const { return label_; }
  std::uint64_t id() const { return id_; }

  Bits all() const { return Bits(order()).set(); }
  Bits none() const { return Bits(order()); }
  VertexSet vertex_set(const std::vector<Vertex>& vs) const;
  VertexSet vertex_set(const Bits& bits) const;
  VertexSet vertex_set(std::initializer_list<Vertex> vs) const;
  VertexSet everything() const;

  Graph with_label(std::string label) const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.rows_ == b.rows_; }

private:
  std::vector<Bits> rows_;
  std::size_t edge_count_ = 0;
  std::string label_;
  std::uint64_t id_ = 0;
};

/// A set of vertices tied to one host graph.
class VertexSet {
public:
  VertexSet() = default;
  VertexSet(std::uint64_t host, Bits bits) : host_(host), bits_(std::move(bits)) {}

  std::uint64_t host() const { return host_; }
  const Bits& bits() const { return bits_; }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool contains(Vertex v) const { return v < bits_.size() && bits_.test(v); }
  std::vector<Vertex> members() const { return rtt::members(bits_); }

  VertexSet operator|(const VertexSet& o) const;
  VertexSet operator&(const VertexSet& o) const;
  VertexSet operator-(const VertexSet& o) const;

  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.host_ == b.host_ && a.bits_ == b.bits_;
  }

private:
  void require_same_host(const VertexSet& o) const;
  std::uint64_t host_ = 0;
  Bits bits_;
};

/// Result of deleting or keeping vertices: a fresh dense graph plus the map
/// back to the original indices.
struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> to_host;
};

InducedSubgraph induced(const Graph& g, const Bits& keep);
Graph complement(const Graph& g);
/// Edge union of two graphs on the same vertex set.
Graph graph_union(const Graph& a, const Graph& b);

std::size_t min_degree(const Graph& g);

/// Length of a shortest cycle; nullopt when the graph is a forest.
std::optional<std::size_t> girth(const Graph& g);

struct CliqueReport {
  std::size_t value = 0;           ///< best clique size found
  std::vector<Vertex> witness;
  bool exact = true;               ///< false when the node budget ran out
  std::size_t upper_bound = 0;
  std::uint64_t nodes = 0;
};

/// Exact clique number by colouring-bounded branch and bound. Throws
/// ResourceError (with the bounds reached) when the budget runs out.
std::size_t clique_number(const Graph& g, std::uint64_t budget = default_node_budget);

/// Maximum clique restricted to `within`. Stops early once a clique of size
/// `stop_at` is found. Never throws; reports `exact = false` on budget exhaustion.
CliqueReport max_clique(const Graph& g, const Bits& within,
                        std::uint64_t budget = default_node_budget,
                        std::size_t stop_at = static_cast<std::size_t>(-1));

/// Some clique of exactly `size` vertices inside `within`, if one exists.
std::optional<std::vector<Vertex>> find_clique(const Graph& g, const Bits& within, std::size_t size);

/// Edges with one end in a and the other in b; edges inside a∩b count twice.
std::size_t edges_between(const Graph& g, const VertexSet& a, const VertexSet& b);
std::size_t edges_between(const Graph& g, const Bits& a, const Bits& b);

/// Connected components of G[within], each as a bit row.
std::vector<Bits> components(const Graph& g, const Bits& within);

}  // namespace rtt
