#pragma once

#include <cstddef>
#include <vector>

namespace rtt {

/// Bipartite graph given as adjacency from left vertices to right indices.
struct Bipartite {
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<std::vector<std::size_t>> adj;
};

struct Matching {
  std::size_t size = 0;
  /// match_left[l] is the matched right vertex, or npos.
  std::vector<std::size_t> match_left;
  std::vector<std::size_t> match_right;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Maximum matching by Hopcroft–Karp.
Matching maximum_matching(const Bipartite& b);

}  // namespace rtt
