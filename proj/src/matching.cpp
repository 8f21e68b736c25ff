#include "rtt/matching.hpp"

#include "rtt/common.hpp"

#include <limits>
#include <queue>

namespace rtt {

Matching maximum_matching(const Bipartite& b) {
  if (b.adj.size() != b.left) throw InvalidArgument("bipartite adjacency has wrong length");
  for (const auto& row : b.adj)
    for (auto r : row)
      if (r >= b.right) throw InvalidArgument("bipartite edge leaves the right side");

  constexpr auto npos = Matching::npos;
  constexpr auto inf = std::numeric_limits<std::size_t>::max();
  Matching m;
  m.match_left.assign(b.left, npos);
  m.match_right.assign(b.right, npos);
  std::vector<std::size_t> dist(b.left);

  auto bfs = [&] {
    std::queue<std::size_t> q;
    for (std::size_t l = 0; l < b.left; ++l) {
      dist[l] = m.match_left[l] == npos ? 0 : inf;
      if (dist[l] == 0) q.push(l);
    }
    bool found = false;
    while (!q.empty()) {
      auto l = q.front();
      q.pop();
      for (auto r : b.adj[l]) {
        auto next = m.match_right[r];
        if (next == npos) {
          found = true;
        } else if (dist[next] == inf) {
          dist[next] = dist[l] + 1;
          q.push(next);
        }
      }
    }
    return found;
  };

  auto dfs = [&](auto&& self, std::size_t l) -> bool {
    for (auto r : b.adj[l]) {
      auto next = m.match_right[r];
      if (next == npos || (dist[next] == dist[l] + 1 && self(self, next))) {
        m.match_left[l] = r;
        m.match_right[r] = l;
        return true;
      }
    }
    dist[l] = inf;
    return false;
  };

  while (bfs())
    for (std::size_t l = 0; l < b.left; ++l)
      if (m.match_left[l] == npos && dfs(dfs, l)) ++m.size;
  return m;
}

}  // namespace rtt
