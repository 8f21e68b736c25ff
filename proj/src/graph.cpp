#include "rtt/graph.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <limits>
#include <numeric>

namespace rtt {

namespace {

std::uint64_t next_graph_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

Graph::Graph(std::size_t n, const std::vector<Edge>& edges, std::string label)
    : rows_(n, Bits(n)), label_(std::move(label)), id_(next_graph_id()) {
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidArgument("edge endpoint out of range");
    if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
    if (!rows_[u].test(v)) ++edge_count_;
    rows_[u].set(v);
    rows_[v].set(u);
  }
}

Graph Graph::from_rows(std::vector<Bits> rows, std::string label) {
  Graph g;
  const auto n = rows.size();
  std::size_t degree_sum = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (rows[v].size() != n) throw InvalidArgument("adjacency row has wrong width");
    if (rows[v].test(v)) throw InvalidArgument("self-loop at vertex " + std::to_string(v));
    degree_sum += rows[v].count();
  }
  for (std::size_t v = 0; v < n; ++v)
    for_each_bit(rows[v], [&](Vertex u) {
      if (!rows[u].test(v)) throw InvalidArgument("adjacency is not symmetric");
    });
  g.rows_ = std::move(rows);
  g.edge_count_ = degree_sum / 2;
  g.label_ = std::move(label);
  g.id_ = next_graph_id();
  return g;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < order(); ++u)
    for (auto v = rows_[u].find_next(u); v != Bits::npos; v = rows_[u].find_next(v))
      out.emplace_back(u, static_cast<Vertex>(v));
  return out;
}

VertexSet Graph::vertex_set(const std::vector<Vertex>& vs) const {
  Bits b(order());
  for (auto v : vs) {
    if (v >= order()) throw InvalidArgument("vertex " + std::to_string(v) + " out of range");
    b.set(v);
  }
  return VertexSet(id_, std::move(b));
}

VertexSet Graph::vertex_set(const Bits& bits) const {
  if (bits.size() != order()) throw InvalidArgument("bit row has wrong width");
  return VertexSet(id_, bits);
}

VertexSet Graph::vertex_set(std::initializer_list<Vertex> vs) const {
  return vertex_set(std::vector<Vertex>(vs));
}

VertexSet Graph::everything() const { return VertexSet(id_, all()); }

Graph Graph::with_label(std::string label) const {
  Graph g = *this;
  g.label_ = std::move(label);
  return g;
}

void VertexSet::require_same_host(const VertexSet& o) const {
  if (host_ != o.host_) throw HostMismatch();
}

VertexSet VertexSet::operator|(const VertexSet& o) const {
  require_same_host(o);
  return VertexSet(host_, bits_ | o.bits_);
}

VertexSet VertexSet::operator&(const VertexSet& o) const {
  require_same_host(o);
  return VertexSet(host_, bits_ & o.bits_);
}

VertexSet VertexSet::operator-(const VertexSet& o) const {
  require_same_host(o);
  return VertexSet(host_, bits_ - o.bits_);
}

InducedSubgraph induced(const Graph& g, const Bits& keep) {
  InducedSubgraph out;
  out.to_host = members(keep);
  const auto m = out.to_host.size();
  std::vector<Vertex> index(g.order(), std::numeric_limits<Vertex>::max());
  for (std::size_t i = 0; i < m; ++i) index[out.to_host[i]] = static_cast<Vertex>(i);
  std::vector<Bits> rows(m, Bits(m));
  for (std::size_t i = 0; i < m; ++i)
    for_each_bit(g.neighbors(out.to_host[i]) & keep,
                 [&](Vertex u) { rows[i].set(index[u]); });
  out.graph = Graph::from_rows(std::move(rows), g.label());
  return out;
}

Graph complement(const Graph& g) {
  std::vector<Bits> rows(g.order());
  for (Vertex v = 0; v < g.order(); ++v) {
    rows[v] = ~g.neighbors(v);
    rows[v].reset(v);
  }
  return Graph::from_rows(std::move(rows), g.label().empty() ? "" : "co-" + g.label());
}

Graph graph_union(const Graph& a, const Graph& b) {
  if (a.order() != b.order()) throw InvalidArgument("union needs graphs on the same vertex set");
  std::vector<Bits> rows(a.order());
  for (Vertex v = 0; v < a.order(); ++v) rows[v] = a.neighbors(v) | b.neighbors(v);
  std::string label = a.label();
  if (!b.label().empty()) label += (label.empty() ? "" : "|") + b.label();
  return Graph::from_rows(std::move(rows), std::move(label));
}

std::size_t min_degree(const Graph& g) {
  if (g.order() == 0) throw InvalidArgument("minimum degree of the empty graph is undefined");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (Vertex v = 0; v < g.order(); ++v) best = std::min(best, g.degree(v));
  return best;
}

std::optional<std::size_t> girth(const Graph& g) {
  const auto n = g.order();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n);
  std::vector<Vertex> parent(n);
  std::deque<Vertex> queue;
  for (Vertex root = 0; root < n; ++root) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<std::size_t>::max());
    dist[root] = 0;
    parent[root] = root;
    queue.assign(1, root);
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      // Nothing shorter can be closed beyond this depth.
      if (2 * dist[u] >= best) break;
      for_each_bit(g.neighbors(u), [&](Vertex w) {
        if (dist[w] == std::numeric_limits<std::size_t>::max()) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        } else if (parent[u] != w) {
          best = std::min(best, dist[u] + dist[w] + 1);
        }
      });
    }
  }
  if (best == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return best;
}

namespace {

/// Colouring-bounded clique search over bit rows (MCQ style).
class CliqueSearch {
public:
  CliqueSearch(const Graph& g, std::uint64_t budget, std::size_t stop_at)
      : g_(g), budget_(budget), stop_at_(stop_at) {}

  CliqueReport run(const Bits& within) {
    std::vector<Vertex> current;
    report_.upper_bound = colour_bound(within);
    expand(current, within);
    return report_;
  }

private:
  std::size_t colour_bound(const Bits& p) const {
    Bits uncoloured = p;
    std::size_t colours = 0;
    while (uncoloured.any()) {
      ++colours;
      Bits q = uncoloured;
      for (auto v = q.find_first(); v != Bits::npos; v = q.find_next(v)) {
        q -= g_.neighbors(static_cast<Vertex>(v));
        uncoloured.reset(v);
      }
    }
    return colours;
  }

  bool done() const { return report_.value >= stop_at_ || !report_.exact; }

  void expand(std::vector<Vertex>& current, Bits p) {
    if (++report_.nodes > budget_) {
      report_.exact = false;
      return;
    }
    if (current.size() > report_.value) {
      report_.value = current.size();
      report_.witness = current;
    }
    if (done() || p.none()) return;

    // Greedy colour classes; vertices are then tried from the highest class.
    std::vector<std::pair<Vertex, std::size_t>> order;
    order.reserve(p.count());
    Bits uncoloured = p;
    std::size_t colour = 0;
    while (uncoloured.any()) {
      ++colour;
      Bits q = uncoloured;
      for (auto v = q.find_first(); v != Bits::npos; v = q.find_next(v)) {
        q -= g_.neighbors(static_cast<Vertex>(v));
        uncoloured.reset(v);
        order.emplace_back(static_cast<Vertex>(v), colour);
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto [v, c] = *it;
      if (current.size() + c <= report_.value) return;
      current.push_back(v);
      expand(current, p & g_.neighbors(v));
      current.pop_back();
      if (done()) return;
      p.reset(v);
    }
  }

  const Graph& g_;
  std::uint64_t budget_;
  std::size_t stop_at_;
  CliqueReport report_;
};

}  // namespace

CliqueReport max_clique(const Graph& g, const Bits& within, std::uint64_t budget,
                        std::size_t stop_at) {
  CliqueSearch search(g, budget, stop_at);
  auto report = search.run(within);
  std::sort(report.witness.begin(), report.witness.end());
  if (report.exact && report.value < stop_at) report.upper_bound = report.value;
  return report;
}

std::size_t clique_number(const Graph& g, std::uint64_t budget) {
  auto report = max_clique(g, g.all(), budget);
  if (!report.exact)
    throw ResourceError("clique search exceeded its node budget",
                        static_cast<std::int64_t>(report.value),
                        static_cast<std::int64_t>(report.upper_bound));
  return report.value;
}

std::optional<std::vector<Vertex>> find_clique(const Graph& g, const Bits& within,
                                               std::size_t size) {
  if (size == 0) return std::vector<Vertex>{};
  auto report = max_clique(g, within, std::numeric_limits<std::uint64_t>::max(), size);
  if (report.value < size) return std::nullopt;
  report.witness.resize(size);
  return report.witness;
}

std::size_t edges_between(const Graph& g, const Bits& a, const Bits& b) {
  std::size_t total = 0;
  for_each_bit(a, [&](Vertex v) { total += (g.neighbors(v) & b).count(); });
  return total;
}

std::size_t edges_between(const Graph& g, const VertexSet& a, const VertexSet& b) {
  if (a.host() != g.id() || b.host() != g.id()) throw HostMismatch();
  return edges_between(g, a.bits(), b.bits());
}

std::vector<Bits> components(const Graph& g, const Bits& within) {
  std::vector<Bits> out;
  Bits left = within;
  while (left.any()) {
    Bits comp(g.order());
    Bits frontier(g.order());
    frontier.set(left.find_first());
    while (frontier.any()) {
      comp |= frontier;
      Bits next(g.order());
      for_each_bit(frontier, [&](Vertex v) { next |= g.neighbors(v); });
      frontier = next & within;
      frontier -= comp;
    }
    left -= comp;
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace rtt
