#pragma once

#include "rtt/graph.hpp"

#include <vector>

namespace rtt {

struct IndependenceReport {
  std::size_t r = 2;
  std::size_t value = 0;
  /// One set for alpha_r, r disjoint sets for alpha_star_r.
  std::vector<std::vector<Vertex>> witness;
  /// False when the budget ran out; value is then a certified lower bound.
  bool exact = true;
  std::size_t upper_bound = 0;
  std::uint64_t nodes = 0;
};

/// Largest K_r-free vertex set.
IndependenceReport alpha_r(const Graph& g, std::size_t r, std::uint64_t budget = default_node_budget);

/// Largest s such that r pairwise disjoint s-sets span no transversal K_r.
IndependenceReport alpha_star_r(const Graph& g, std::size_t r,
                                std::uint64_t budget = default_node_budget);

struct HoleReport {
  Verdict verdict = Verdict::unknown;
  std::vector<std::vector<Vertex>> witness;
  std::uint64_t nodes = 0;
};

/// Whether an r-partite hole with parts of size s exists.
HoleReport has_partite_hole(const Graph& g, std::size_t r, std::size_t s,
                            std::uint64_t budget = default_node_budget);

/// True iff G[set] contains no K_r.
bool is_kr_free(const Graph& g, const std::vector<Vertex>& set, std::size_t r);
/// True iff the sets are pairwise disjoint and no K_r has one vertex in each.
bool is_partite_hole(const Graph& g, const std::vector<std::vector<Vertex>>& parts);

}  // namespace rtt
