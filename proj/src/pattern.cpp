#include "rtt/pattern.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <limits>
#include <optional>
#include <set>
#include <tuple>
#include <numeric>

namespace rtt {

std::string_view to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::clique: return "clique";
    case PatternKind::cycle: return "cycle";
    case PatternKind::tree: return "tree";
    case PatternKind::general: return "general";
  }
  return "general";
}

std::string_view to_string(EmbedRoute route) {
  switch (route) {
    case EmbedRoute::degenerate_tree: return "degenerate-tree";
    case EmbedRoute::neighbourhood_cycle: return "neighbourhood-cycle";
    case EmbedRoute::neighbourhood_clique: return "neighbourhood-clique";
    case EmbedRoute::exhaustive: return "exhaustive";
    case EmbedRoute::none: return "none";
  }
  return "none";
}

namespace {

/// Backtracking search for automorphisms of a small pattern. `image` holds
/// preassigned values (or -1).
class AutSearch {
public:
  explicit AutSearch(const Pattern& f) : f_(f), k_(f.order()) {}

  bool exists(std::vector<int> image) {
    image_ = std::move(image);
    used_ = 0;
    for (std::size_t i = 0; i < k_; ++i) {
      if (image_[i] < 0) continue;
      if (!consistent(i, static_cast<std::size_t>(image_[i]))) return false;
      used_ |= 1u << image_[i];
    }
    found_ = false;
    collect_ = nullptr;
    extend(0);
    return found_;
  }

  void all(std::vector<std::vector<std::uint8_t>>& out) {
    image_.assign(k_, -1);
    used_ = 0;
    found_ = false;
    collect_ = &out;
    extend(0);
  }

private:
  bool consistent(std::size_t i, std::size_t target) const {
    if (f_.degree(i) != f_.degree(target)) return false;
    for (std::size_t j = 0; j < k_; ++j) {
      if (j == i || image_[j] < 0) continue;
      if (f_.adjacent(i, j) != f_.adjacent(target, static_cast<std::size_t>(image_[j])))
        return false;
    }
    return true;
  }

  void extend(std::size_t i) {
    if (found_) return;
    while (i < k_ && image_[i] >= 0) ++i;
    if (i == k_) {
      if (collect_) {
        collect_->emplace_back(image_.begin(), image_.end());
      } else {
        found_ = true;
      }
      return;
    }
    for (std::size_t t = 0; t < k_; ++t) {
      if (used_ >> t & 1u) continue;
      image_[i] = static_cast<int>(t);
      if (consistent(i, t)) {
        used_ |= 1u << t;
        extend(i + 1);
        used_ &= ~(1u << t);
        if (found_) return;
      }
      image_[i] = -1;
    }
  }

  const Pattern& f_;
  std::size_t k_;
  std::vector<int> image_;
  std::uint32_t used_ = 0;
  bool found_ = false;
  std::vector<std::vector<std::uint8_t>>* collect_ = nullptr;
};

std::size_t parse_size(std::string_view text, std::string_view literal) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError("bad number in pattern literal '" + std::string(literal) + "'",
                     static_cast<std::size_t>(text.data() - literal.data()));
  return value;
}

Pattern parse_explicit(std::string_view literal) {
  // T:k=5;edges=0-1,1-2   or   G:k=4;edges=...
  const char tag = literal[0];
  auto body = literal.substr(2);
  std::size_t k = 0;
  bool have_k = false;
  std::vector<Edge> edges;
  while (!body.empty()) {
    auto semi = body.find(';');
    auto field = body.substr(0, semi);
    body = semi == std::string_view::npos ? std::string_view{} : body.substr(semi + 1);
    auto eq = field.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected key=value in pattern literal",
                       static_cast<std::size_t>(field.data() - literal.data()));
    auto key = field.substr(0, eq);
    auto value = field.substr(eq + 1);
    if (key == "k") {
      k = parse_size(value, literal);
      have_k = true;
    } else if (key == "edges") {
      while (!value.empty()) {
        auto comma = value.find(',');
        auto item = value.substr(0, comma);
        value = comma == std::string_view::npos ? std::string_view{} : value.substr(comma + 1);
        auto dash = item.find('-');
        if (dash == std::string_view::npos)
          throw ParseError("edge must look like a-b",
                           static_cast<std::size_t>(item.data() - literal.data()));
        edges.emplace_back(static_cast<Vertex>(parse_size(item.substr(0, dash), literal)),
                           static_cast<Vertex>(parse_size(item.substr(dash + 1), literal)));
      }
    } else {
      throw ParseError("unknown pattern field '" + std::string(key) + "'",
                       static_cast<std::size_t>(key.data() - literal.data()));
    }
  }
  if (!have_k) throw ParseError("pattern literal needs k=", 0);
  Pattern f(k, edges, std::string(literal));
  if (tag == 'T' && f.kind() != PatternKind::tree && !(f.connected() && f.edges().size() + 1 == k))
    throw ParseError("T: literal is not a tree", 0);
  return f;
}

}  // namespace

Pattern::Pattern(std::size_t k, std::vector<Edge> edges, std::string name)
    : k_(k), adj_(k, 0), name_(std::move(name)) {
  if (k == 0) throw InvalidArgument("pattern needs at least one vertex");
  if (k > max_order) throw InvalidArgument("pattern order above " + std::to_string(max_order));
  for (auto& [a, b] : edges) {
    if (a >= k || b >= k) throw InvalidArgument("pattern edge endpoint out of range");
    if (a == b) throw InvalidArgument("pattern edge is a loop");
    if (a > b) std::swap(a, b);
    adj_[a] |= 1u << b;
    adj_[b] |= 1u << a;
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  std::uint32_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < k_; ++i)
      if (frontier >> i & 1u) next |= adj_[i];
    frontier = next & ~seen;
    seen |= next;
  }
  connected_ = std::popcount(seen) == static_cast<int>(k_);

  const auto m = edges_.size();
  bool two_regular = true;
  for (std::size_t i = 0; i < k_; ++i) two_regular = two_regular && degree(i) == 2;
  if (m == k_ * (k_ - 1) / 2) {
    kind_ = PatternKind::clique;
  } else if (k_ >= 3 && connected_ && two_regular) {
    kind_ = PatternKind::cycle;
  } else if (connected_ && m + 1 == k_) {
    kind_ = PatternKind::tree;
  } else {
    kind_ = PatternKind::general;
  }

  // Stabiliser chain: |Aut| is the product of orbit sizes of i under the
  // pointwise stabiliser of 0..i-1.
  AutSearch search(*this);
  aut_count_ = 1;
  std::vector<int> fixed(k_, -1);
  for (std::size_t i = 0; i < k_; ++i) {
    std::uint64_t orbit = 0;
    for (std::size_t j = i; j < k_; ++j) {
      auto probe = fixed;
      probe[i] = static_cast<int>(j);
      if (search.exists(probe)) ++orbit;
    }
    aut_count_ *= orbit;
    fixed[i] = static_cast<int>(i);
  }
  if (k_ <= 8) search.all(automorphisms_);
}

std::size_t Pattern::degree(std::size_t i) const {
  return static_cast<std::size_t>(std::popcount(adj_[i]));
}

const std::vector<std::vector<std::uint8_t>>& Pattern::automorphisms() const {
  if (k_ > 8) throw ResourceError("automorphism list is only kept for k <= 8", 0, 0);
  return automorphisms_;
}

Pattern Pattern::clique(std::size_t k) {
  std::vector<Edge> e;
  for (Vertex a = 0; a < k; ++a)
    for (Vertex b = a + 1; b < k; ++b) e.emplace_back(a, b);
  return Pattern(k, e, "K" + std::to_string(k));
}

Pattern Pattern::cycle(std::size_t k) {
  if (k < 3) throw InvalidArgument("cycles need at least 3 vertices");
  std::vector<Edge> e;
  for (Vertex a = 0; a < k; ++a) e.emplace_back(a, static_cast<Vertex>((a + 1) % k));
  return Pattern(k, e, "C" + std::to_string(k));
}

Pattern Pattern::path(std::size_t k) {
  std::vector<Edge> e;
  for (Vertex a = 0; a + 1 < k; ++a) e.emplace_back(a, a + 1);
  return Pattern(k, e, "P" + std::to_string(k));
}

Pattern Pattern::parse(std::string_view literal) {
  while (!literal.empty() && literal.front() == ' ') literal.remove_prefix(1);
  while (!literal.empty() && literal.back() == ' ') literal.remove_suffix(1);
  if (literal.size() < 2) throw ParseError("pattern literal too short", 0);
  if (literal[1] == ':' && (literal[0] == 'T' || literal[0] == 'G')) return parse_explicit(literal);
  auto rest = literal.substr(1);
  switch (literal[0]) {
    case 'K': {
      if (auto comma = rest.find(','); comma != std::string_view::npos) {
        auto a = parse_size(rest.substr(0, comma), literal);
        auto b = parse_size(rest.substr(comma + 1), literal);
        std::vector<Edge> e;
        for (Vertex i = 0; i < a; ++i)
          for (Vertex j = 0; j < b; ++j) e.emplace_back(i, static_cast<Vertex>(a + j));
        return Pattern(a + b, e, std::string(literal));
      }
      return clique(parse_size(rest, literal));
    }
    case 'C': return cycle(parse_size(rest, literal));
    case 'P': return path(parse_size(rest, literal));
    default: break;
  }
  throw ParseError("unknown pattern literal '" + std::string(literal) + "'", 0);
}

bool is_copy(const Graph& g, const Pattern& f, const PatternCopy& copy) {
  if (copy.vertices.size() != f.order()) return false;
  Bits seen(g.order());
  for (auto v : copy.vertices) {
    if (v >= g.order() || seen.test(v)) return false;
    seen.set(v);
  }
  for (auto [a, b] : f.edges())
    if (!g.adjacent(copy.vertices[a], copy.vertices[b])) return false;
  return true;
}

PatternCopy canonical_copy(const Pattern& f, std::vector<Vertex> images) {
  const auto k = f.order();
  if (images.size() != k) throw InvalidArgument("copy has wrong length");
  if (f.kind() == PatternKind::clique) {
    std::sort(images.begin(), images.end());
    return {std::move(images)};
  }
  if (k <= 8) {
    std::vector<Vertex> best = images, probe(k);
    for (const auto& sigma : f.automorphisms()) {
      for (std::size_t i = 0; i < k; ++i) probe[i] = images[sigma[i]];
      if (probe < best) best = probe;
    }
    return {std::move(best)};
  }
  // Position by position, take the smallest image still extendable to an
  // automorphism.
  AutSearch search(f);
  std::vector<int> sigma(k, -1);
  std::vector<Vertex> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    int pick = -1;
    for (std::size_t j = 0; j < k; ++j) {
      if (std::find(sigma.begin(), sigma.end(), static_cast<int>(j)) != sigma.end()) continue;
      if (pick >= 0 && images[j] >= images[static_cast<std::size_t>(pick)]) continue;
      auto probe = sigma;
      probe[i] = static_cast<int>(j);
      if (search.exists(probe)) pick = static_cast<int>(j);
    }
    sigma[i] = pick;
    out[i] = images[static_cast<std::size_t>(pick)];
  }
  return {std::move(out)};
}

std::size_t gamma(const Pattern& f) {
  const auto k = f.order();
  if (k > Pattern::max_order) throw ResourceError("gamma is exhaustive only up to k = 16", 0, 0);
  auto acyclic_without = [&](std::uint32_t removed) {
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto [a, b] : f.edges()) {
      if ((removed >> a & 1u) || (removed >> b & 1u)) continue;
      auto ra = find(a), rb = find(b);
      if (ra == rb) return false;
      parent[ra] = rb;
    }
    return true;
  };
  const std::uint32_t limit = 1u << k;
  for (std::size_t size = 0; size <= k; ++size)
    for (std::uint32_t mask = 0; mask < limit; ++mask)
      if (static_cast<std::size_t>(std::popcount(mask)) == size && acyclic_without(mask))
        return size;
  return k;
}

namespace {

/// Generic injective-homomorphism backtracking of F into G[allowed].
class Embedder {
public:
  Embedder(const Graph& g, const Pattern& f, Bits allowed, std::uint64_t budget)
      : g_(g), f_(f), allowed_(std::move(allowed)), budget_(budget),
        image_(f.order()), used_(g.order()) {}

  /// Runs the search; `root` optionally pins a pattern vertex to a host vertex.
  void run(std::optional<std::pair<std::size_t, Vertex>> root,
           const std::function<bool(const std::vector<Vertex>&)>& sink) {
    sink_ = &sink;
    build_order(root ? root->first : start_vertex());
    stopped_ = false;
    if (root) {
      if (!allowed_.test(root->second)) return;
      image_[root->first] = root->second;
      used_.set(root->second);
      step(1);
      used_.reset(root->second);
    } else {
      step(0);
    }
  }

  std::uint64_t nodes() const { return nodes_; }
  bool exhausted() const { return exhausted_; }

private:
  std::size_t start_vertex() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < f_.order(); ++i)
      if (f_.degree(i) > f_.degree(best)) best = i;
    return best;
  }

  void build_order(std::size_t start) {
    const auto k = f_.order();
    order_.clear();
    std::vector<bool> placed(k, false);
    auto bfs = [&](std::size_t s) {
      std::size_t head = order_.size();
      order_.push_back(s);
      placed[s] = true;
      while (head < order_.size()) {
        auto x = order_[head++];
        for (std::size_t y = 0; y < k; ++y)
          if (f_.adjacent(x, y) && !placed[y]) {
            placed[y] = true;
            order_.push_back(y);
          }
      }
    };
    bfs(start);
    for (std::size_t s = 0; s < k; ++s)
      if (!placed[s]) bfs(s);
    earlier_.assign(k, {});
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (f_.adjacent(order_[i], order_[j])) earlier_[i].push_back(order_[j]);
  }

  void step(std::size_t i) {
    if (stopped_) return;
    if (i == f_.order()) {
      if (!(*sink_)(image_)) stopped_ = true;
      return;
    }
    if (++nodes_ > budget_) {
      exhausted_ = stopped_ = true;
      return;
    }
    const auto q = order_[i];
    Bits cand = allowed_ - used_;
    for (auto j : earlier_[i]) cand &= g_.neighbors(image_[j]);
    const auto need = f_.degree(q);
    for (auto w = cand.find_first(); w != Bits::npos; w = cand.find_next(w)) {
      const auto x = static_cast<Vertex>(w);
      if (need > 0 && (g_.neighbors(x) & allowed_).count() < need) continue;
      image_[q] = x;
      used_.set(x);
      step(i + 1);
      used_.reset(x);
      if (stopped_) return;
    }
  }

  const Graph& g_;
  const Pattern& f_;
  Bits allowed_;
  std::uint64_t budget_;
  std::vector<Vertex> image_;
  Bits used_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> earlier_;
  const std::function<bool(const std::vector<Vertex>&)>* sink_ = nullptr;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  bool stopped_ = false;
};

bool clique_copies(const Graph& g, std::size_t k, std::vector<Vertex>& current, const Bits& cand,
                   const std::function<bool(const PatternCopy&)>& sink) {
  if (current.size() == k) return sink(PatternCopy{current});
  for (auto w = cand.find_first(); w != Bits::npos; w = cand.find_next(w)) {
    Bits next = cand & g.neighbors(static_cast<Vertex>(w));
    // only larger indices, so each clique appears once in increasing order
    for (auto x = next.find_first(); x != Bits::npos && x <= w; x = next.find_next(x)) next.reset(x);
    if (next.count() + current.size() + 1 < k) continue;
    current.push_back(static_cast<Vertex>(w));
    bool go_on = clique_copies(g, k, current, next, sink);
    current.pop_back();
    if (!go_on) return false;
  }
  return true;
}

}  // namespace

StreamStatus for_each_copy(const Graph& g, const Pattern& f, const Bits& within,
                           const std::function<bool(const PatternCopy&)>& sink) {
  if (within.size() != g.order()) throw InvalidArgument("vertex set has wrong width");
  if (f.kind() == PatternKind::clique) {
    std::vector<Vertex> current;
    return clique_copies(g, f.order(), current, within, sink) ? StreamStatus::complete
                                                              : StreamStatus::truncated;
  }
  bool cut = false;
  Embedder search(g, f, within, std::numeric_limits<std::uint64_t>::max());
  std::function<bool(const std::vector<Vertex>&)> filter = [&](const std::vector<Vertex>& image) {
    auto canon = canonical_copy(f, image);
    if (canon.vertices != image) return true;
    if (!sink(canon)) {
      cut = true;
      return false;
    }
    return true;
  };
  search.run(std::nullopt, filter);
  return cut ? StreamStatus::truncated : StreamStatus::complete;
}

StreamStatus for_each_copy_through(const Graph& g, const Pattern& f, Vertex v, const Bits& within,
                                   const std::function<bool(const PatternCopy&)>& sink) {
  Bits allowed = within;
  allowed.set(v);
  if (f.kind() == PatternKind::clique) {
    std::vector<Vertex> current;
    Bits cand = g.neighbors(v) & allowed;
    return clique_copies(g, f.order() - 1, current, cand, [&](const PatternCopy& c) {
             auto vs = c.vertices;
             vs.push_back(v);
             std::sort(vs.begin(), vs.end());
             return sink(PatternCopy{std::move(vs)});
           })
               ? StreamStatus::complete
               : StreamStatus::truncated;
  }
  std::set<std::vector<Vertex>> seen;
  std::vector<bool> tried(f.order(), false);
  bool cut = false;
  for (std::size_t p = 0; p < f.order() && !cut; ++p) {
    if (tried[p]) continue;
    if (f.order() <= 8)
      for (const auto& sigma : f.automorphisms()) tried[sigma[p]] = true;
    Embedder search(g, f, allowed, std::numeric_limits<std::uint64_t>::max());
    std::function<bool(const std::vector<Vertex>&)> take = [&](const std::vector<Vertex>& image) {
      auto canon = canonical_copy(f, image);
      if (!seen.insert(canon.vertices).second) return true;
      if (!sink(canon)) {
        cut = true;
        return false;
      }
      return true;
    };
    search.run(std::make_pair(p, v), take);
  }
  return cut ? StreamStatus::truncated : StreamStatus::complete;
}

CopyStream enumerate_copies(const Graph& g, const Pattern& f, const VertexSet& within,
                            std::size_t cap) {
  if (within.host() != g.id()) throw HostMismatch();
  CopyStream out;
  if (cap == 0) {
    out.status = StreamStatus::truncated;
    return out;
  }
  out.status = for_each_copy(g, f, within.bits(), [&](const PatternCopy& c) {
    out.copies.push_back(c);
    return out.copies.size() < cap;
  });
  return out;
}

RootedSearch find_rooted_copy(const Graph& g, const Pattern& f, Vertex v, const Bits& within,
                              std::uint64_t budget) {
  RootedSearch out;
  Bits allowed = within;
  allowed.set(v);
  std::vector<bool> tried(f.order(), false);
  for (std::size_t p = 0; p < f.order() && !out.copy; ++p) {
    if (tried[p]) continue;
    // One representative per automorphism orbit is enough.
    if (f.order() <= 8)
      for (const auto& sigma : f.automorphisms()) tried[sigma[p]] = true;
    if (g.degree(v) < f.degree(p)) continue;
    Embedder search(g, f, allowed, budget > out.nodes ? budget - out.nodes : 0);
    std::function<bool(const std::vector<Vertex>&)> take = [&](const std::vector<Vertex>& image) {
      out.copy = canonical_copy(f, image);
      return false;
    };
    search.run(std::make_pair(p, v), take);
    out.nodes += search.nodes();
    if (search.exhausted()) {
      out.complete = false;
      break;
    }
  }
  return out;
}

std::optional<PatternCopy> spanning_copy(const Graph& g, const Pattern& f,
                                         const std::vector<Vertex>& s) {
  if (s.size() != f.order()) return std::nullopt;
  std::optional<PatternCopy> found;
  Embedder search(g, f, bits_of(g.order(), s), std::numeric_limits<std::uint64_t>::max());
  std::function<bool(const std::vector<Vertex>&)> take = [&](const std::vector<Vertex>& image) {
    found = canonical_copy(f, image);
    return false;
  };
  search.run(std::nullopt, take);
  return found;
}

Bits peel_to_min_degree(const Graph& g, const Bits& within, std::size_t min_deg) {
  Bits core = within;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto v = core.find_first(); v != Bits::npos; v = core.find_next(v)) {
      if ((g.neighbors(static_cast<Vertex>(v)) & core).count() < min_deg) {
        core.reset(v);
        changed = true;
      }
    }
  }
  return core;
}

namespace {

std::optional<std::vector<Vertex>> tree_route(const Graph& g, const Pattern& f, Vertex v,
                                              const Bits& nu) {
  const auto k = f.order();
  // Drop the highest-index leaf; v plays that leaf.
  std::size_t leaf = k;
  for (std::size_t i = k; i-- > 0;)
    if (f.degree(i) == 1) {
      leaf = i;
      break;
    }
  if (leaf == k) return std::nullopt;
  const auto parent = static_cast<std::size_t>(std::countr_zero(f.neighbor_mask(leaf)));
  Bits core = peel_to_min_degree(g, nu, k - 2);
  if (core.none()) return std::nullopt;

  std::vector<Vertex> image(k);
  std::vector<bool> placed(k, false);
  Bits used(g.order());
  image[leaf] = v;
  placed[leaf] = true;
  image[parent] = static_cast<Vertex>(core.find_first());
  placed[parent] = true;
  used.set(image[parent]);
  std::vector<std::size_t> queue{parent};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto x = queue[head];
    for (std::size_t y = 0; y < k; ++y) {
      if (!f.adjacent(x, y) || placed[y]) continue;
      Bits free = (g.neighbors(image[x]) & core) - used;
      auto w = free.find_first();
      if (w == Bits::npos) return std::nullopt;
      image[y] = static_cast<Vertex>(w);
      placed[y] = true;
      used.set(w);
      queue.push_back(y);
    }
  }
  return image;
}

std::optional<std::vector<Vertex>> cycle_route(const Graph& g, const Pattern& f, Vertex v,
                                               const Bits& nu, const Bits& u) {
  const auto k = f.order();
  if (k < 4) return std::nullopt;
  // Cyclic order of the pattern's vertices.
  std::vector<std::size_t> ring{0};
  std::size_t prev = k, cur = 0;
  while (ring.size() < k) {
    std::size_t next = k;
    for (std::size_t y = 0; y < k; ++y)
      if (f.adjacent(cur, y) && y != prev) {
        next = y;
        break;
      }
    prev = cur;
    cur = next;
    ring.push_back(cur);
  }

  auto nbrs = members(nu);
  std::vector<std::tuple<std::size_t, Vertex, Vertex>> pairs;
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
      Bits w = g.neighbors(nbrs[i]) & g.neighbors(nbrs[j]) & u;
      pairs.emplace_back(w.count(), nbrs[i], nbrs[j]);
    }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });

  const std::size_t path_len = k - 3;
  for (auto [size, x, y] : pairs) {
    if (size < path_len) break;
    Bits w = g.neighbors(x) & g.neighbors(y) & u;
    w.reset(x);
    w.reset(y);
    Bits core = path_len == 1 ? w : peel_to_min_degree(g, w, path_len - 1);
    if (core.none()) continue;
    std::vector<Vertex> path{static_cast<Vertex>(core.find_first())};
    Bits used = bits_of(g.order(), path);
    while (path.size() < path_len) {
      Bits free = (g.neighbors(path.back()) & core) - used;
      auto next = free.find_first();
      if (next == Bits::npos) break;
      path.push_back(static_cast<Vertex>(next));
      used.set(next);
    }
    if (path.size() < path_len) continue;
    std::vector<Vertex> image(k);
    image[ring[0]] = v;
    image[ring[1]] = x;
    for (std::size_t i = 0; i < path_len; ++i) image[ring[2 + i]] = path[i];
    image[ring[k - 1]] = y;
    return image;
  }
  return std::nullopt;
}

}  // namespace

EmbedOutcome embed_pattern_at(const Graph& g, const Pattern& f, Vertex v, const Bits& u,
                              std::size_t alpha_bound, std::uint64_t budget) {
  if (f.kind() == PatternKind::general)
    throw InvalidArgument("embedding needs a tree, cycle or clique pattern");
  if (v >= g.order()) throw InvalidArgument("root vertex out of range");
  if (u.size() != g.order()) throw InvalidArgument("vertex set has wrong width");
  if (u.test(v)) throw InvalidArgument("u must not contain the root vertex");

  EmbedOutcome out;
  const auto k = f.order();
  const Bits nu = g.neighbors(v) & u;
  out.guaranteed = alpha_bound >= 1 && nu.count() >= k * alpha_bound;

  std::optional<std::vector<Vertex>> image;
  if (k == 1) {
    image = std::vector<Vertex>{v};
    out.route = EmbedRoute::neighbourhood_clique;
  } else if (f.kind() == PatternKind::clique) {
    if (auto c = find_clique(g, nu, k - 1)) {
      c->insert(c->begin(), v);
      image = std::move(*c);
      out.route = EmbedRoute::neighbourhood_clique;
    }
  } else if (f.kind() == PatternKind::tree) {
    image = tree_route(g, f, v, nu);
    out.route = EmbedRoute::degenerate_tree;
  } else {
    image = cycle_route(g, f, v, nu, u);
    out.route = EmbedRoute::neighbourhood_cycle;
  }
  if (image) {
    auto copy = canonical_copy(f, *image);
    if (is_copy(g, f, copy)) {
      out.copy = std::move(copy);
      return out;
    }
  }
  // Clique search in N_U(v) is already exhaustive.
  if (f.kind() == PatternKind::clique) {
    out.route = EmbedRoute::none;
    return out;
  }
  auto search = find_rooted_copy(g, f, v, u, budget);
  out.complete = search.complete;
  out.copy = std::move(search.copy);
  out.route = out.copy ? EmbedRoute::exhaustive : EmbedRoute::none;
  return out;
}

EmbedOutcome embed_pattern_at(const Graph& g, const Pattern& f, Vertex v, const VertexSet& u,
                              std::size_t alpha_bound, std::uint64_t budget) {
  if (u.host() != g.id()) throw HostMismatch();
  return embed_pattern_at(g, f, v, u.bits(), alpha_bound, budget);
}

}  // namespace rtt
