#include "rtt/tiling.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

namespace rtt {

namespace {

constexpr std::size_t class_copy_cap = 200'000;

class TilingSearch {
public:
  TilingSearch(const Graph& g, const Pattern& f, const SolveOptions& opts)
      : g_(g), f_(f), opts_(opts), k_(f.order()),
        region_(opts.within ? *opts.within : g.all()) {
    if (region_.size() != g.order()) throw InvalidArgument("region has wrong width");
    by_degree_ = members(region_);
    std::stable_sort(by_degree_.begin(), by_degree_.end(),
                     [&](Vertex a, Vertex b) { return g_.degree(a) < g_.degree(b); });
  }

  SolveOutcome run() {
    const auto start = std::chrono::steady_clock::now();
    build_classes();
    greedy();
    const auto root = std::min(bound(region_), free_set_bound(region_));
    if (!reached_target() && best_.size() < root) {
      std::vector<PatternCopy> current;
      search(region_, current);
    }
    SolveOutcome out;
    out.tiling.copies = best_;
    Bits left = region_;
    for (const auto& c : best_)
      for (auto v : c.vertices) left.reset(v);
    out.tiling.uncovered = members(left);
    out.nodes = nodes_;
    // Reaching a target early proves optimality only when it meets the root bound.
    out.optimal = !exhausted_ && (!reached_target() || best_.size() >= root);
    out.upper_bound = out.optimal ? best_.size() : root;
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
  }

private:
  bool accept(const PatternCopy& c) const { return !opts_.filter || opts_.filter(c); }

  /// Vertices sharing a copy are merged; every copy then lives in one class.
  void build_classes() {
    const auto n = g_.order();
    std::vector<Vertex> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Vertex x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t seen = 0;
    auto status = for_each_copy(g_, f_, region_, [&](const PatternCopy& c) {
      if (!accept(c)) return true;
      for (std::size_t i = 1; i < c.vertices.size(); ++i) parent[find(c.vertices[i])] = find(c.vertices[0]);
      return ++seen < class_copy_cap;
    });
    classes_.clear();
    if (status == StreamStatus::truncated) {
      if (f_.connected()) {
        classes_ = components(g_, region_);
      } else {
        classes_ = {region_};
      }
      return;
    }
    std::vector<int> index(n, -1);
    for_each_bit(region_, [&](Vertex v) {
      auto root = find(v);
      if (index[root] < 0) {
        index[root] = static_cast<int>(classes_.size());
        classes_.push_back(g_.none());
      }
      classes_[static_cast<std::size_t>(index[root])].set(v);
    });
  }

  /// Greedy F-free set U; every copy inside avail uses a vertex outside U.
  std::size_t free_set_bound(const Bits& avail) const {
    Bits u = g_.none();
    for (auto x : by_degree_) {
      if (!avail.test(x)) continue;
      bool blocked;
      if (f_.kind() == PatternKind::clique) {
        blocked = find_clique(g_, g_.neighbors(x) & u, k_ - 1).has_value();
      } else {
        auto probe = find_rooted_copy(g_, f_, x, u, 100'000);
        blocked = probe.copy.has_value() || !probe.complete;
      }
      if (!blocked) u.set(x);
    }
    return (avail - u).count();
  }

  std::size_t bound(const Bits& avail) const {
    std::size_t by_class = 0;
    for (const auto& c : classes_) by_class += (c & avail).count() / k_;
    return by_class;
  }

  std::size_t threshold() const {
    if (opts_.target) return *opts_.target > 0 ? *opts_.target - 1 : 0;
    return best_.size();
  }

  bool reached_target() const { return opts_.target && best_.size() >= *opts_.target; }

  std::vector<PatternCopy> candidates(Vertex v, const Bits& avail) const {
    Bits rest = avail;
    rest.reset(v);
    std::set<std::vector<Vertex>> sets;
    std::vector<std::pair<std::vector<Vertex>, PatternCopy>> found;
    for_each_copy_through(g_, f_, v, rest, [&](const PatternCopy& c) {
      if (!accept(c)) return true;
      auto key = c.vertices;
      std::sort(key.begin(), key.end());
      if (sets.insert(key).second) found.emplace_back(std::move(key), c);
      return true;
    });
    auto weight = [&](const std::vector<Vertex>& s) {
      std::size_t w = 0;
      for (auto x : s) w += g_.degree(x);
      return w;
    };
    std::stable_sort(found.begin(), found.end(), [&](const auto& a, const auto& b) {
      auto wa = weight(a.first), wb = weight(b.first);
      return wa != wb ? wa < wb : a.first < b.first;
    });
    std::vector<PatternCopy> out;
    out.reserve(found.size());
    for (auto& [key, c] : found) out.push_back(std::move(c));
    return out;
  }

  void greedy() {
    Bits avail = region_;
    best_.clear();
    for (auto v = avail.find_first(); v != Bits::npos; v = avail.find_next(v)) {
      auto cands = candidates(static_cast<Vertex>(v), avail);
      if (cands.empty()) continue;
      for (auto x : cands.front().vertices) avail.reset(x);
      best_.push_back(cands.front());
    }
  }

  void search(const Bits& avail, std::vector<PatternCopy>& current) {
    if (exhausted_ || reached_target()) return;
    if (++nodes_ > opts_.budget) {
      exhausted_ = true;
      return;
    }
    if (current.size() > best_.size()) {
      best_ = current;
      if (reached_target()) {
        stopped_early_ = true;
        return;
      }
    }
    if (avail.none()) return;
    const auto limit = threshold();
    if (current.size() + bound(avail) <= limit) return;
    if (current.size() + free_set_bound(avail) <= limit) return;

    const auto v = static_cast<Vertex>(avail.find_first());
    for (const auto& c : candidates(v, avail)) {
      Bits next = avail;
      for (auto x : c.vertices) next.reset(x);
      current.push_back(c);
      search(next, current);
      current.pop_back();
      if (exhausted_ || stopped_early_) return;
    }
    Bits skip = avail;
    skip.reset(v);
    search(skip, current);
  }

  const Graph& g_;
  const Pattern& f_;
  const SolveOptions& opts_;
  std::size_t k_;
  Bits region_;
  std::vector<Vertex> by_degree_;
  std::vector<Bits> classes_;
  std::vector<PatternCopy> best_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  bool stopped_early_ = false;
};

}  // namespace

SolveOutcome max_tiling(const Graph& g, const Pattern& f, const SolveOptions& options) {
  if (f.order() < 2) throw InvalidArgument("tiling needs a pattern with k >= 2");
  auto out = TilingSearch(g, f, options).run();
  if (!verify_tiling(g, f, out.tiling, options.within ? *options.within : g.all()))
    throw Error("internal: solver produced an invalid tiling");
  return out;
}

SolveOutcome max_tiling(const Graph& g, const Pattern& f, std::uint64_t budget) {
  SolveOptions opts;
  opts.budget = budget;
  return max_tiling(g, f, opts);
}

Verdict has_factor(const Graph& g, const Pattern& f, const Bits& within, std::uint64_t budget) {
  const auto size = within.count();
  if (size % f.order() != 0) return Verdict::no;
  if (size == 0) return Verdict::yes;
  SolveOptions opts;
  opts.budget = budget;
  opts.within = within;
  opts.target = size / f.order();
  auto out = max_tiling(g, f, opts);
  if (out.tiling.copies.size() == size / f.order()) return Verdict::yes;
  return out.optimal ? Verdict::no : Verdict::unknown;
}

Verdict has_factor(const Graph& g, const Pattern& f, std::uint64_t budget) {
  return has_factor(g, f, g.all(), budget);
}

std::size_t quasiperfect_allowance(const Pattern& f, const Rational& eta) {
  if (eta <= 0 || eta > 1) throw InvalidArgument("eta must lie in (0, 1]");
  return static_cast<std::size_t>(floor_of(1 / eta)) * (f.order() - 1);
}

GapRecord quasiperfect_gap(const Graph& g, const Pattern& f, const Rational& eta,
                           const SolveOutcome& solved) {
  GapRecord out;
  out.allowance = quasiperfect_allowance(f, eta);
  out.uncovered = g.order() - f.order() * solved.tiling.copies.size();
  out.optimal = solved.optimal;
  if (out.uncovered <= out.allowance) {
    out.quasiperfect = Verdict::yes;  // the tiling found is itself a witness
  } else {
    out.quasiperfect = solved.optimal ? Verdict::no : Verdict::unknown;
  }
  return out;
}

GapRecord quasiperfect_gap(const Graph& g, const Pattern& f, const Rational& eta,
                           std::uint64_t budget) {
  quasiperfect_allowance(f, eta);
  return quasiperfect_gap(g, f, eta, max_tiling(g, f, budget));
}

bool verify_tiling(const Graph& g, const Pattern& f, const Tiling& t, const Bits& region) {
  Bits covered(g.order());
  for (const auto& c : t.copies) {
    if (!is_copy(g, f, c)) return false;
    for (auto v : c.vertices) {
      if (!region.test(v) || covered.test(v)) return false;
      covered.set(v);
    }
  }
  Bits rest = region - covered;
  return members(rest) == t.uncovered;
}

}  // namespace rtt
