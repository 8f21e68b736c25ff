#include "rtt/independence.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace rtt {

namespace {

bool has_clique(const Graph& g, const Bits& within, std::size_t r) {
  return find_clique(g, within, r).has_value();
}

/// Branch and bound for the largest K_r-free set, r >= 3.
class KrFreeSearch {
public:
  KrFreeSearch(const Graph& g, std::size_t r, std::uint64_t budget)
      : g_(g), r_(r), budget_(budget) {}

  IndependenceReport run() {
    greedy();
    Bits in(g_.order());
    solve(in, g_.all());
    IndependenceReport out;
    out.r = r_;
    out.value = best_.count();
    out.witness = {members(best_)};
    out.exact = !exhausted_;
    out.upper_bound = exhausted_ ? g_.order() : out.value;
    out.nodes = nodes_;
    return out;
  }

private:
  void greedy() {
    std::vector<Vertex> order(g_.order());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Vertex a, Vertex b) { return g_.degree(a) < g_.degree(b); });
    best_ = g_.none();
    for (auto v : order)
      if (!has_clique(g_, g_.neighbors(v) & best_, r_ - 1)) best_.set(v);
  }

  /// Disjoint (on cand) copies of K_r each need a distinct deletion from cand.
  std::size_t packing(const Bits& in, Bits cand) const {
    std::size_t count = 0;
    while (true) {
      auto q = find_clique(g_, in | cand, r_);
      if (!q) return count;
      bool touched = false;
      for (auto x : *q) touched = touched || cand.test(x);
      if (!touched) return count;
      ++count;
      for (auto x : *q) cand.reset(x);
    }
  }

  void solve(Bits in, Bits cand) {
    if (exhausted_) return;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    const auto best = best_.count();
    if (in.count() + cand.count() <= best) return;
    auto q = find_clique(g_, in | cand, r_);
    if (!q) {
      best_ = in | cand;
      return;
    }
    if (in.count() + cand.count() - packing(in, cand) <= best) return;

    std::vector<Vertex> options;
    for (auto x : *q)
      if (cand.test(x)) options.push_back(x);
    std::stable_sort(options.begin(), options.end(),
                     [&](Vertex a, Vertex b) { return g_.degree(a) > g_.degree(b); });
    // Drop options[j], keep options[0..j-1].
    for (auto x : options) {
      Bits without = cand;
      without.reset(x);
      solve(in, without);
      if (exhausted_) return;
      if (has_clique(g_, g_.neighbors(x) & in, r_ - 1)) return;
      in.set(x);
      cand.reset(x);
    }
  }

  const Graph& g_;
  std::size_t r_;
  std::uint64_t budget_;
  Bits best_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

/// Existence of an r-partite hole with parts of size s.
class HoleSearch {
public:
  HoleSearch(const Graph& g, std::size_t r, std::uint64_t& nodes, std::uint64_t budget)
      : g_(g), r_(r), nodes_(nodes), budget_(budget), order_(g.order()), rank_(g.order()) {
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](Vertex a, Vertex b) { return g_.degree(a) > g_.degree(b); });
    for (std::size_t i = 0; i < order_.size(); ++i) rank_[order_[i]] = i;
  }

  Verdict exists(std::size_t s) {
    s_ = s;
    exhausted_ = false;
    witness_.clear();
    if (s == 0) {
      witness_.assign(r_, {});
      return Verdict::yes;
    }
    State st{std::vector<Bits>(r_, g_.none()), std::vector<Bits>(r_, g_.all()), g_.all()};
    bool found = search(st, 0);
    if (found) return Verdict::yes;
    return exhausted_ ? Verdict::unknown : Verdict::no;
  }

  const std::vector<std::vector<Vertex>>& witness() const { return witness_; }

private:
  struct State {
    std::vector<Bits> parts;
    std::vector<Bits> cand;
    Bits open;  ///< vertices not yet assigned or excluded
  };

  bool transversal(const Bits& common, const std::vector<std::size_t>& rest, std::size_t idx,
                   const std::vector<Bits>& parts) const {
    if (idx == rest.size()) return true;
    Bits pool = parts[rest[idx]] & common;
    for (auto z = pool.find_first(); z != Bits::npos; z = pool.find_next(z))
      if (transversal(common & g_.neighbors(static_cast<Vertex>(z)), rest, idx + 1, parts))
        return true;
    return false;
  }

  void assign(State& st, Vertex x, std::size_t i) const {
    st.parts[i].set(x);
    st.open.reset(x);
    for (auto& c : st.cand) c.reset(x);
    for (std::size_t j = 0; j < r_; ++j) {
      if (j == i) continue;
      std::vector<std::size_t> rest;
      for (std::size_t l = 0; l < r_; ++l)
        if (l != i && l != j) rest.push_back(l);
      Bits touched = st.cand[j] & g_.neighbors(x);
      for (auto y = touched.find_first(); y != Bits::npos; y = touched.find_next(y)) {
        Bits common = g_.neighbors(x) & g_.neighbors(static_cast<Vertex>(y));
        if (transversal(common, rest, 0, st.parts)) st.cand[j].reset(y);
      }
    }
  }

  bool finish(const State& st, std::size_t j) {
    // every other part is full: fill part j from its candidates
    Bits fill = st.cand[j] & st.open;
    std::size_t need = s_ - st.parts[j].count();
    if (fill.count() < need) return false;
    witness_.assign(r_, {});
    for (std::size_t i = 0; i < r_; ++i) witness_[i] = members(st.parts[i]);
    for (auto y = fill.find_first(); y != Bits::npos && need > 0; y = fill.find_next(y), --need)
      witness_[j].push_back(static_cast<Vertex>(y));
    for (auto& w : witness_) std::sort(w.begin(), w.end());
    return true;
  }

  bool search(const State& st, std::size_t from) {
    if (exhausted_) return false;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    std::size_t not_full = 0, last = 0;
    for (std::size_t i = 0; i < r_; ++i) {
      const auto have = st.parts[i].count();
      if (have < s_) {
        ++not_full;
        last = i;
        if (have + (st.cand[i] & st.open).count() < s_) return false;
      }
    }
    if (not_full == 0) return finish(st, 0);
    if (not_full == 1) return finish(st, last);

    // next open vertex in branching order that can still go somewhere
    Vertex x = 0;
    bool picked = false;
    for (std::size_t pos = from; pos < order_.size() && !picked; ++pos) {
      auto v = order_[pos];
      if (!st.open.test(v)) continue;
      for (std::size_t i = 0; i < r_; ++i)
        if (st.parts[i].count() < s_ && st.cand[i].test(v)) {
          x = v;
          picked = true;
          break;
        }
    }
    if (!picked) return false;
    const auto next = rank_[x] + 1;

    for (std::size_t i = 0; i < r_; ++i) {
      if (st.parts[i].count() >= s_ || !st.cand[i].test(x)) continue;
      // parts are interchangeable: open them in index order
      if (st.parts[i].none() && i > 0 && st.parts[i - 1].none()) break;
      State child = st;
      assign(child, x, i);
      if (search(child, next)) return true;
      if (exhausted_) return false;
    }
    State skip = st;
    skip.open.reset(x);
    return search(skip, next);
  }

  const Graph& g_;
  std::size_t r_;
  std::uint64_t& nodes_;
  std::uint64_t budget_;
  std::vector<Vertex> order_;
  std::vector<std::size_t> rank_;
  std::size_t s_ = 0;
  bool exhausted_ = false;
  std::vector<std::vector<Vertex>> witness_;
};

}  // namespace

IndependenceReport alpha_r(const Graph& g, std::size_t r, std::uint64_t budget) {
  if (r < 2) throw InvalidArgument("alpha_r needs r >= 2");
  IndependenceReport out;
  out.r = r;
  if (r == 2) {
    auto co = complement(g);
    auto c = max_clique(co, co.all(), budget);
    out.value = c.value;
    out.witness = {c.witness};
    out.exact = c.exact;
    out.upper_bound = c.exact ? c.value : c.upper_bound;
    out.nodes = c.nodes;
  } else {
    out = KrFreeSearch(g, r, budget).run();
  }
  if (!is_kr_free(g, out.witness.front(), r))
    throw Error("internal: alpha_r witness contains a K_r");
  return out;
}

IndependenceReport alpha_star_r(const Graph& g, std::size_t r, std::uint64_t budget) {
  if (r < 2) throw InvalidArgument("alpha_star_r needs r >= 2");
  if (r > g.order()) throw InvalidArgument("alpha_star_r needs r <= n");
  IndependenceReport out;
  out.r = r;
  out.witness.assign(r, {});
  std::uint64_t nodes = 0;
  HoleSearch search(g, r, nodes, budget);
  std::size_t lo = 0, hi = g.order() / r;
  std::size_t proven_upper = hi;
  while (lo < hi) {
    auto mid = (lo + hi + 1) / 2;
    auto verdict = search.exists(mid);
    if (verdict == Verdict::yes) {
      lo = mid;
      out.witness = search.witness();
    } else {
      if (verdict == Verdict::no) {
        proven_upper = mid - 1;
      } else {
        out.exact = false;
      }
      hi = mid - 1;
    }
  }
  out.value = lo;
  out.upper_bound = out.exact ? lo : proven_upper;
  out.nodes = nodes;
  if (!is_partite_hole(g, out.witness)) throw Error("internal: alpha_star_r witness is not a hole");
  return out;
}

HoleReport has_partite_hole(const Graph& g, std::size_t r, std::size_t s, std::uint64_t budget) {
  if (r < 2) throw InvalidArgument("partite holes need r >= 2");
  HoleReport out;
  if (r * s > g.order()) {
    out.verdict = Verdict::no;
    return out;
  }
  HoleSearch search(g, r, out.nodes, budget);
  out.verdict = search.exists(s);
  if (out.verdict == Verdict::yes) {
    out.witness = search.witness();
    if (!is_partite_hole(g, out.witness)) throw Error("internal: hole witness is not a hole");
  }
  return out;
}

bool is_kr_free(const Graph& g, const std::vector<Vertex>& set, std::size_t r) {
  return !has_clique(g, bits_of(g.order(), set), r);
}

bool is_partite_hole(const Graph& g, const std::vector<std::vector<Vertex>>& parts) {
  Bits seen(g.order());
  std::vector<Bits> rows;
  for (const auto& p : parts) {
    Bits b(g.order());
    for (auto v : p) {
      if (v >= g.order() || seen.test(v)) return false;
      seen.set(v);
      b.set(v);
    }
    rows.push_back(std::move(b));
  }
  auto transversal = [&](auto&& self, const Bits& common, std::size_t idx) -> bool {
    if (idx == rows.size()) return true;
    Bits pool = rows[idx] & common;
    for (auto z = pool.find_first(); z != Bits::npos; z = pool.find_next(z))
      if (self(self, common & g.neighbors(static_cast<Vertex>(z)), idx + 1)) return true;
    return false;
  };
  return !transversal(transversal, g.all(), 0);
}

}  // namespace rtt
