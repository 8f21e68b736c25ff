#include "rtt/absorption.hpp"

#include "rtt/matching.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace rtt {

namespace {

std::vector<Vertex> sorted(std::vector<Vertex> v) {
  std::sort(v.begin(), v.end());
  return v;
}

bool factorizes(const Graph& g, const Pattern& f, const std::vector<Vertex>& s, std::uint64_t budget) {
  return has_factor(g, f, bits_of(g.order(), s), budget) == Verdict::yes;
}

std::vector<Vertex> with(std::vector<Vertex> s, Vertex x) {
  s.push_back(x);
  return s;
}

bool disjoint_from(const std::vector<Vertex>& s, const Bits& b) {
  return std::none_of(s.begin(), s.end(), [&](Vertex x) { return b.test(x); });
}

}  // namespace

// --- partitions and index vectors ------------------------------------------------

VertexPartition::VertexPartition(const Graph& g, std::vector<Bits> parts)
    : host_(g.id()), parts_(std::move(parts)), owner_(g.order(), static_cast<std::size_t>(-1)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].size() != g.order()) throw InvalidArgument("partition part has wrong width");
    if (parts_[i].none()) throw InvalidArgument("partition parts must be nonempty");
    for_each_bit(parts_[i], [&](Vertex v) {
      if (owner_[v] != static_cast<std::size_t>(-1)) throw InvalidArgument("partition parts overlap");
      owner_[v] = i;
    });
  }
  for (auto o : owner_)
    if (o == static_cast<std::size_t>(-1)) throw InvalidArgument("partition does not cover every vertex");
}

VertexPartition VertexPartition::trivial(const Graph& g) { return VertexPartition(g, {g.all()}); }

IndexVector index_vector(const VertexPartition& p, const std::vector<Vertex>& s) {
  IndexVector out(p.size(), 0);
  for (auto v : s) {
    if (v >= p.order()) throw InvalidArgument("vertex outside the partition's host");
    ++out[p.part_of(v)];
  }
  return out;
}

IndexVector index_vector(const VertexPartition& p, const VertexSet& s) {
  if (s.host() != p.host()) throw HostMismatch();
  return index_vector(p, s.members());
}

std::string format_vector(const IndexVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + ")";
}

// --- fans ---------------------------------------------------------------------------

std::vector<std::vector<Vertex>> build_fan(const Graph& g, const Pattern& f, Vertex v, const Bits& u) {
  Bits residual = u;
  residual.reset(v);
  std::vector<std::vector<Vertex>> fan;
  while (true) {
    std::optional<PatternCopy> copy;
    if (f.kind() == PatternKind::general) {
      copy = find_rooted_copy(g, f, v, residual).copy;
    } else {
      copy = embed_pattern_at(g, f, v, residual, 0).copy;
    }
    if (!copy) break;
    std::vector<Vertex> set;
    for (auto x : copy->vertices)
      if (x != v) set.push_back(x);
    std::sort(set.begin(), set.end());
    for (auto x : set) residual.reset(x);
    fan.push_back(std::move(set));
  }
  return fan;
}

std::vector<std::vector<Vertex>> build_fan(const Graph& g, const Pattern& f, Vertex v, const VertexSet& u) {
  if (u.host() != g.id()) throw HostMismatch();
  return build_fan(g, f, v, u.bits());
}

// --- connectors ---------------------------------------------------------------------

bool is_connector(const Graph& g, const Pattern& f, Vertex u, Vertex v, const std::vector<Vertex>& s,
                  std::size_t t) {
  const auto k = f.order();
  if (s.empty() || s.size() > k * t - 1 || (s.size() + 1) % k != 0) return false;
  Bits seen(g.order());
  for (auto x : s) {
    if (x >= g.order() || x == u || x == v || seen.test(x)) return false;
    seen.set(x);
  }
  return factorizes(g, f, with(s, u), default_node_budget) &&
         factorizes(g, f, with(s, v), default_node_budget);
}

ReachabilityCertificate ReachabilityCertificate::make(const Graph& g, const Pattern& f, Vertex u, Vertex v,
                                                      std::size_t t, std::vector<std::vector<Vertex>> connectors) {
  if (u >= g.order() || v >= g.order()) throw InvalidArgument("certificate endpoint outside the host");
  Bits used(g.order());
  for (auto& s : connectors) {
    s = sorted(std::move(s));
    if (!disjoint_from(s, used)) throw Error("reachability certificate: connectors overlap");
    if (!is_connector(g, f, u, v, s, t)) throw Error("reachability certificate: invalid connector");
    for (auto x : s) used.set(x);
  }
  ReachabilityCertificate c;
  c.u_ = u;
  c.v_ = v;
  c.t_ = t;
  c.host_ = g.id();
  c.connectors_ = std::move(connectors);
  return c;
}

std::optional<std::vector<Vertex>> ReachabilityCertificate::avoiding(const Bits& w) const {
  for (const auto& s : connectors_)
    if (disjoint_from(s, w)) return s;
  return std::nullopt;
}

namespace {

/// A (k-1)-set S inside avail with F spanned by both S + u and S + v.
std::optional<std::vector<Vertex>> short_connector(const Graph& g, const Pattern& f, Vertex u, Vertex v,
                                                   const Bits& avail) {
  const auto k = f.order();
  if (f.kind() == PatternKind::clique) {
    auto q = find_clique(g, g.neighbors(u) & g.neighbors(v) & avail, k - 1);
    if (q) return sorted(*q);
    return std::nullopt;
  }
  std::optional<std::vector<Vertex>> found;
  for_each_copy_through(g, f, u, avail, [&](const PatternCopy& c) {
    std::vector<Vertex> s;
    for (auto x : c.vertices)
      if (x != u) s.push_back(x);
    if (spanning_copy(g, f, with(s, v))) {
      found = sorted(std::move(s));
      return false;
    }
    return true;
  });
  return found;
}

/// S1 ∪ {w} ∪ S2 with S1 a u–w connector and S2 a w–v connector.
std::optional<std::vector<Vertex>> chained_connector(const Graph& g, const Pattern& f, Vertex u, Vertex v,
                                                     const Bits& avail) {
  for (auto w = avail.find_first(); w != Bits::npos; w = avail.find_next(w)) {
    const auto mid = static_cast<Vertex>(w);
    Bits rest = avail;
    rest.reset(mid);
    auto s1 = short_connector(g, f, u, mid, rest);
    if (!s1) continue;
    for (auto x : *s1) rest.reset(x);
    auto s2 = short_connector(g, f, mid, v, rest);
    if (!s2) continue;
    auto s = *s1;
    s.push_back(mid);
    s.insert(s.end(), s2->begin(), s2->end());
    return sorted(std::move(s));
  }
  return std::nullopt;
}

}  // namespace

ReachabilityCertificate find_disjoint_connectors(const Graph& g, const Pattern& f, Vertex u, Vertex v,
                                                 std::size_t t, std::size_t target,
                                                 const std::optional<Bits>& forbidden) {
  if (u == v) throw InvalidArgument("connectors need distinct endpoints");
  if (t < 1) throw InvalidArgument("connectors need t >= 1");
  if (u >= g.order() || v >= g.order()) throw InvalidArgument("endpoint outside the host");
  Bits avail = g.all();
  if (forbidden) avail -= *forbidden;
  avail.reset(u);
  avail.reset(v);
  std::vector<std::vector<Vertex>> found;
  while (found.size() < target) {
    auto s = short_connector(g, f, u, v, avail);
    if (!s) break;
    for (auto x : *s) avail.reset(x);
    found.push_back(std::move(*s));
  }
  while (t >= 2 && found.size() < target) {
    auto s = chained_connector(g, f, u, v, avail);
    if (!s) break;
    for (auto x : *s) avail.reset(x);
    found.push_back(std::move(*s));
  }
  return ReachabilityCertificate::make(g, f, u, v, t, std::move(found));
}

ReachabilityCertificate concatenate_reachability(const Graph& g, const Pattern& f,
                                                 const ReachabilityCertificate& uv,
                                                 const ReachabilityCertificate& vw) {
  if (uv.host() != g.id() || vw.host() != g.id()) throw HostMismatch();
  if (uv.v() != vw.u()) throw InvalidArgument("certificates do not share the middle vertex");
  const Vertex u = uv.u(), v = uv.v(), w = vw.v();
  const auto t = uv.t() + vw.t();
  if (u == w) return ReachabilityCertificate::make(g, f, u, u, t, uv.connectors());

  // Middle vertices: v first, then vertices outside every input connector.
  Bits in_inputs(g.order());
  for (const auto& s : uv.connectors())
    for (auto x : s) in_inputs.set(x);
  for (const auto& s : vw.connectors())
    for (auto x : s) in_inputs.set(x);
  std::vector<Vertex> middles{v};
  for (Vertex x = 0; x < g.order(); ++x)
    if (x != v && !in_inputs.test(x)) middles.push_back(x);
  for (Vertex x = 0; x < g.order(); ++x)
    if (x != v && in_inputs.test(x)) middles.push_back(x);

  Bits used(g.order());
  used.set(u);
  used.set(w);
  std::vector<bool> taken(vw.connectors().size(), false);
  std::vector<std::vector<Vertex>> out;
  for (const auto& s1 : uv.connectors()) {
    if (!disjoint_from(s1, used)) continue;
    Bits b1 = bits_of(g.order(), s1);
    for (std::size_t j = 0; j < vw.connectors().size(); ++j) {
      const auto& s2 = vw.connectors()[j];
      if (taken[j] || !disjoint_from(s2, used) || !disjoint_from(s2, b1)) continue;
      Bits both = b1 | bits_of(g.order(), s2);
      std::optional<Vertex> mid;
      for (auto x : middles) {
        if (used.test(x) || both.test(x)) continue;
        if (factorizes(g, f, with(s1, x), default_node_budget) &&
            factorizes(g, f, with(s2, x), default_node_budget)) {
          mid = x;
          break;
        }
      }
      if (!mid) continue;
      auto s = s1;
      s.push_back(*mid);
      s.insert(s.end(), s2.begin(), s2.end());
      for (auto x : s) used.set(x);
      taken[j] = true;
      out.push_back(sorted(std::move(s)));
      break;
    }
  }
  return ReachabilityCertificate::make(g, f, u, w, t, std::move(out));
}

// --- robust vectors -----------------------------------------------------------------

RobustnessCertificate RobustnessCertificate::make(const Graph& g, const Pattern& f, const VertexPartition& p,
                                                  IndexVector vector, std::vector<PatternCopy> copies) {
  if (p.host() != g.id()) throw HostMismatch();
  Bits used(g.order());
  for (const auto& c : copies) {
    if (!is_copy(g, f, c)) throw Error("robustness certificate: not a copy");
    if (index_vector(p, c.vertices) != vector) throw Error("robustness certificate: wrong index vector");
    if (!disjoint_from(c.vertices, used)) throw Error("robustness certificate: copies overlap");
    for (auto x : c.vertices) used.set(x);
  }
  RobustnessCertificate r;
  r.vector_ = std::move(vector);
  r.copies_ = std::move(copies);
  return r;
}

std::optional<PatternCopy> RobustnessCertificate::avoiding(const Bits& w) const {
  for (const auto& c : copies_)
    if (disjoint_from(c.vertices, w)) return c;
  return std::nullopt;
}

RobustnessCertificate robust_vector_certificate(const Graph& g, const Pattern& f, const VertexPartition& p,
                                                const IndexVector& vec, std::size_t target,
                                                std::uint64_t budget) {
  if (p.host() != g.id()) throw HostMismatch();
  if (vec.size() != p.size()) throw InvalidArgument("index vector length differs from the part count");
  if (std::accumulate(vec.begin(), vec.end(), std::size_t{0}) != f.order())
    throw InvalidArgument("robust vectors must be k-vectors");
  if (target == 0) return RobustnessCertificate::make(g, f, p, vec, {});
  SolveOptions opts;
  opts.budget = budget;
  opts.target = target;
  opts.filter = [&](const PatternCopy& c) { return index_vector(p, c.vertices) == vec; };
  auto out = max_tiling(g, f, opts);
  return RobustnessCertificate::make(g, f, p, vec, std::move(out.tiling.copies));
}

// --- absorbers -----------------------------------------------------------------------

Verdict verify_absorber(const Graph& g, const Pattern& f, const std::vector<Vertex>& s,
                        const std::vector<Vertex>& a, std::size_t t, std::uint64_t budget) {
  const auto k = f.order();
  if (s.size() != k) throw InvalidArgument("absorbers are defined for k-sets");
  if (a.size() > k * k * t) throw InvalidArgument("absorber larger than k^2 t");
  Bits sb = bits_of(g.order(), s), ab = bits_of(g.order(), a);
  if (sb.count() != s.size() || ab.count() != a.size()) throw InvalidArgument("repeated vertices");
  if ((sb & ab).any()) throw InvalidArgument("absorber meets the absorbed set");
  auto alone = has_factor(g, f, ab, budget);
  if (alone == Verdict::no) return Verdict::no;
  auto joined = has_factor(g, f, ab | sb, budget);
  if (joined == Verdict::no) return Verdict::no;
  return alone == Verdict::yes && joined == Verdict::yes ? Verdict::yes : Verdict::unknown;
}

namespace {

/// One absorber for s by the twin construction, avoiding `used` (which must contain s).
std::optional<std::vector<Vertex>> twin_absorber(const Graph& g, const Pattern& f, const VertexPartition& p,
                                                 const std::vector<Vertex>& s, std::size_t t,
                                                 const Bits& used, std::size_t max_twins = 500) {
  const auto iv = index_vector(p, s);
  auto by_part = [&](std::vector<Vertex> xs) {
    std::stable_sort(xs.begin(), xs.end(), [&](Vertex a, Vertex b) {
      return std::pair(p.part_of(a), a) < std::pair(p.part_of(b), b);
    });
    return xs;
  };
  const auto sp = by_part(s);
  std::optional<std::vector<Vertex>> result;
  std::size_t tried = 0;
  for_each_copy(g, f, g.all() - used, [&](const PatternCopy& twin) {
    if (index_vector(p, twin.vertices) != iv) return true;
    if (++tried > max_twins) return false;
    const auto tp = by_part(twin.vertices);
    Bits blocked = used;
    for (auto x : twin.vertices) blocked.set(x);
    std::vector<Vertex> absorber = twin.vertices;
    for (std::size_t i = 0; i < sp.size(); ++i) {
      auto cert = find_disjoint_connectors(g, f, sp[i], tp[i], t, 1, blocked);
      if (cert.strength() == 0) return true;
      for (auto x : cert.connectors().front()) {
        blocked.set(x);
        absorber.push_back(x);
      }
    }
    absorber = sorted(std::move(absorber));
    if (verify_absorber(g, f, s, absorber, t) != Verdict::yes) return true;
    result = std::move(absorber);
    return false;
  });
  return result;
}

/// Smallest absorber first: empty when s already spans F, then a single copy,
/// then the twin construction.
std::optional<std::vector<Vertex>> find_absorber(const Graph& g, const Pattern& f, const std::vector<Vertex>& s,
                                                 std::size_t t, const Bits& used, std::size_t tries) {
  if (spanning_copy(g, f, s)) return std::vector<Vertex>{};
  const Bits sb = bits_of(g.order(), s);
  std::optional<std::vector<Vertex>> single;
  std::size_t tried = 0;
  for_each_copy(g, f, g.all() - used - sb, [&](const PatternCopy& c) {
    if (++tried > tries) return false;
    if (has_factor(g, f, sb | bits_of(g.order(), c.vertices)) == Verdict::yes) {
      single = sorted(c.vertices);
      return false;
    }
    return true;
  });
  if (single) return single;
  return twin_absorber(g, f, VertexPartition::trivial(g), s, t, used | sb);
}

}  // namespace

std::vector<std::vector<Vertex>> find_disjoint_absorbers(const Graph& g, const Pattern& f,
                                                         const VertexPartition& p,
                                                         const std::vector<Vertex>& s, std::size_t t,
                                                         std::size_t target) {
  if (p.host() != g.id()) throw HostMismatch();
  if (s.size() != f.order()) throw InvalidArgument("absorbers are defined for k-sets");
  Bits used = bits_of(g.order(), s);
  if (used.count() != s.size()) throw InvalidArgument("repeated vertices");
  std::vector<std::vector<Vertex>> out;
  while (out.size() < target) {
    auto a = twin_absorber(g, f, p, s, t, used);
    if (!a) break;
    for (auto x : *a) used.set(x);
    out.push_back(std::move(*a));
  }
  return out;
}

// --- templates -----------------------------------------------------------------------

namespace {

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const auto m = c.size();
  for (std::size_t i = m; i-- > 0;) {
    if (c[i] < n - m + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

bool perfect_onto_z(const Template& t, const std::vector<std::size_t>& chosen) {
  std::vector<bool> present(t.left(), false);
  for (auto i : chosen) present[i] = true;
  for (std::size_t i = t.x; i < t.left(); ++i) present[i] = true;
  std::vector<std::size_t> index(t.left(), Matching::npos);
  Bipartite b;
  for (std::size_t i = 0; i < t.left(); ++i)
    if (present[i]) index[i] = b.left++;
  b.right = t.z;
  b.adj.assign(b.left, {});
  for (auto [l, r] : t.edges)
    if (present[l]) b.adj[index[l]].push_back(r);
  return b.left == t.z && maximum_matching(b).size == t.z;
}

}  // namespace

TemplateCheck check_template(const Template& t, std::size_t samples, std::uint64_t seed) {
  TemplateCheck out;
  out.exhaustive = t.m <= 6;
  if (out.exhaustive) {
    std::vector<std::size_t> c(t.m);
    std::iota(c.begin(), c.end(), 0);
    do {
      ++out.checked;
      if (perfect_onto_z(t, c)) {
        ++out.perfect;
      } else if (out.failing_subset.empty()) {
        out.failing_subset = c;
      }
    } while (next_combination(c, t.x));
    return out;
  }
  Rng rng(seed);
  std::vector<std::size_t> all(t.x);
  for (std::size_t i = 0; i < samples; ++i) {
    std::iota(all.begin(), all.end(), 0);
    shuffle_in_place(all, rng);
    std::vector<std::size_t> c(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(t.m));
    std::sort(c.begin(), c.end());
    ++out.checked;
    if (perfect_onto_z(t, c)) {
      ++out.perfect;
    } else if (out.failing_subset.empty()) {
      out.failing_subset = c;
    }
  }
  return out;
}

Template montgomery_template(std::size_t m, const Rational& beta, std::uint64_t seed, std::size_t retries) {
  if (m < 2) throw InvalidArgument("template needs m >= 2");
  if (beta < 0) throw InvalidArgument("template needs beta >= 0");
  constexpr std::size_t max_degree = 40;
  constexpr std::size_t z_degree = 6;
  Template t;
  t.m = m;
  t.beta = beta;
  t.x = m + static_cast<std::size_t>(ceil_of(beta * static_cast<std::int64_t>(m)));
  t.y = 2 * m;
  t.z = 3 * m;
  const auto left = t.left();
  const auto d = std::min(left, z_degree);
  std::size_t best = 0;
  for (std::size_t attempt = 1; attempt <= retries; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    t.edges.clear();
    std::vector<std::size_t> degree(left, 0);
    std::vector<std::size_t> pool(left);
    for (std::size_t z = 0; z < t.z; ++z) {
      std::iota(pool.begin(), pool.end(), 0);
      // partial shuffle: the first d entries are a uniform d-subset
      for (std::size_t i = 0; i < d; ++i) std::swap(pool[i], pool[i + uniform_below(rng, left - i)]);
      std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(d));
      for (std::size_t i = 0; i < d; ++i) {
        t.edges.emplace_back(pool[i], z);
        ++degree[pool[i]];
      }
    }
    t.max_degree = std::max(d, *std::max_element(degree.begin(), degree.end()));
    if (t.max_degree > max_degree) continue;
    auto check = check_template(t, 2000, derive_seed(seed, attempt + retries));
    best = std::max(best, check.perfect);
    if (check.perfect == check.checked) {
      t.verified = true;
      t.exhaustive = check.exhaustive;
      t.subsets_checked = check.checked;
      t.attempts = attempt;
      return t;
    }
  }
  throw ConstructionFailure("montgomery_template: no verified template after " + std::to_string(retries) +
                            " attempts (best attempt matched " + std::to_string(best) + " subsets)");
}

// --- absorbing sets --------------------------------------------------------------------

AbsorbingSet build_absorbing_set(const Graph& g, const Pattern& f, const AbsorbingParams& params) {
  const auto n = g.order();
  const auto k = f.order();
  const Bits scope = params.scope.size() == 0 ? g.all() : params.scope;
  if (scope.size() != n) throw InvalidArgument("scope has wrong width");
  if (params.gamma <= 0 || params.gamma > 1) throw InvalidArgument("gamma must lie in (0, 1]");

  const auto x_size = params.m + static_cast<std::size_t>(ceil_of(params.beta * static_cast<std::int64_t>(params.m)));
  const auto y_size = 2 * params.m;
  const auto z_count = 3 * params.m;
  const auto need = x_size + y_size + z_count * (k - 1);
  const auto cap = static_cast<std::size_t>(floor_of(params.gamma * static_cast<std::int64_t>(n)));
  if (need > scope.count())
    throw StageError("sizing", "template needs " + std::to_string(need) + " scope vertices, scope has " +
                                   std::to_string(scope.count()));
  if (need > cap)
    throw StageError("sizing", "template needs " + std::to_string(need) + " vertices, gamma n = " + std::to_string(cap));

  // Reservoir X: every scope vertex keeps min_fan fan sets inside X.
  const auto pool = members(scope);
  Rng rng(derive_seed(params.seed, 1));
  std::vector<Vertex> x_vertices;
  nlohmann::json fans = nlohmann::json::object();
  bool reservoir = false;
  std::size_t worst_fan = 0;
  for (std::size_t attempt = 1; attempt <= params.retries && !reservoir; ++attempt) {
    auto order = pool;
    shuffle_in_place(order, rng);
    x_vertices = sorted({order.begin(), order.begin() + static_cast<std::ptrdiff_t>(x_size)});
    const Bits xb = bits_of(n, x_vertices);
    fans = nlohmann::json::object();
    reservoir = true;
    std::size_t low = static_cast<std::size_t>(-1);
    for (auto v : pool) {
      auto fan = build_fan(g, f, v, xb);
      low = std::min(low, fan.size());
      if (fan.size() < params.min_fan) {
        reservoir = false;
        break;
      }
      fans[std::to_string(v)] = fan;
    }
    worst_fan = std::max(worst_fan, low == static_cast<std::size_t>(-1) ? 0 : low);
  }
  if (!reservoir)
    throw StageError("reservoir", "no X with " + std::to_string(params.min_fan) + " fan sets at every scope vertex (best minimum " +
                                      std::to_string(worst_fan) + ")");

  Template tpl;
  try {
    tpl = montgomery_template(params.m, params.beta, derive_seed(params.seed, 2), params.retries);
  } catch (const ConstructionFailure& e) {
    throw StageError("template", e.what());
  }

  // Y, the Z-sets and one absorber per template edge.
  const Bits xb = bits_of(n, x_vertices);
  std::vector<Vertex> y_vertices;
  std::vector<std::vector<Vertex>> z_sets;
  nlohmann::json absorbers = nlohmann::json::array();
  Bits used;
  bool assembled = false;
  std::string last_failure;
  for (std::size_t attempt = 1; attempt <= params.retries && !assembled; ++attempt) {
    auto rest = members(scope - xb);
    shuffle_in_place(rest, rng);
    y_vertices = sorted({rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(y_size)});
    z_sets.clear();
    for (std::size_t i = 0; i < z_count; ++i) {
      auto from = rest.begin() + static_cast<std::ptrdiff_t>(y_size + i * (k - 1));
      z_sets.push_back(sorted({from, from + static_cast<std::ptrdiff_t>(k - 1)}));
    }
    used = xb | bits_of(n, y_vertices);
    for (const auto& z : z_sets)
      for (auto v : z) used.set(v);
    absorbers = nlohmann::json::array();
    assembled = true;
    for (auto [l, r] : tpl.edges) {
      const Vertex w = l < tpl.x ? x_vertices[l] : y_vertices[l - tpl.x];
      auto s = sorted(with(z_sets[r], w));
      auto a = find_absorber(g, f, s, params.t, used, 2000);
      if (!a) {
        assembled = false;
        last_failure = "no absorber for template edge (" + std::to_string(l) + "," + std::to_string(r) + ")";
        break;
      }
      for (auto v : *a) used.set(v);
      absorbers.push_back({{"edge", {l, r}}, {"s", s}, {"absorber", *a}});
    }
  }
  if (!assembled) throw StageError("absorbers", last_failure);
  if (used.count() > cap)
    throw StageError("final-size", "assembled " + std::to_string(used.count()) + " vertices, gamma n = " + std::to_string(cap));

  AbsorbingSet out;
  out.host = g.id();
  out.vertices = used;
  out.scope = scope;
  out.capacity = (x_size - params.m) / (k - 1);
  out.xi = Rational(static_cast<std::int64_t>(out.capacity), static_cast<std::int64_t>(n));
  out.pattern = f.name();

  nlohmann::json edges = nlohmann::json::array();
  for (auto [l, r] : tpl.edges) edges.push_back({l, r});
  out.ledger = {
      {"pattern", f.name()},
      {"n", n},
      {"t", params.t},
      {"seed", params.seed},
      {"template",
       {{"m", tpl.m}, {"beta", format_rational(tpl.beta)}, {"x", tpl.x}, {"y", tpl.y}, {"z", tpl.z},
        {"edges", edges}, {"max_degree", tpl.max_degree}, {"subsets_checked", tpl.subsets_checked},
        {"exhaustive", tpl.exhaustive}, {"attempts", tpl.attempts}}},
      {"X", x_vertices},
      {"Y", y_vertices},
      {"Z", z_sets},
      {"fans", fans},
      {"absorbers", absorbers},
      {"A", members(used)},
      {"capacity", out.capacity},
  };
  return out;
}

AbsorptionCheck verify_absorbing_set(const Graph& g, const Pattern& f, const Bits& a, const Bits& scope,
                                     std::size_t max_u, std::uint64_t budget) {
  const auto k = f.order();
  const auto outside = members(scope - a);
  const auto base = a.count();
  AbsorptionCheck out;
  for (std::size_t size = 0; size <= std::min(max_u, outside.size()); ++size) {
    if ((base + size) % k != 0) continue;
    std::vector<std::size_t> c(size);
    std::iota(c.begin(), c.end(), 0);
    do {
      Bits region = a;
      for (auto i : c) region.set(outside[i]);
      ++out.checked;
      auto verdict = has_factor(g, f, region, budget);
      if (verdict != Verdict::yes) {
        if (out.verdict != Verdict::no) {
          out.failing.clear();
          for (auto i : c) out.failing.push_back(outside[i]);
        }
        if (verdict == Verdict::no) {
          out.verdict = Verdict::no;
          return out;
        }
        out.verdict = Verdict::unknown;
      }
    } while (size > 0 && next_combination(c, outside.size()));
  }
  return out;
}

bool reverify_ledger(const Graph& g, const Pattern& f, const nlohmann::json& ledger) {
  try {
    const auto n = g.order();
    if (ledger.at("n").get<std::size_t>() != n || ledger.at("pattern").get<std::string>() != f.name()) return false;
    const auto& tj = ledger.at("template");
    Template t;
    t.m = tj.at("m").get<std::size_t>();
    t.beta = parse_rational(tj.at("beta").get<std::string>());
    t.x = tj.at("x").get<std::size_t>();
    t.y = tj.at("y").get<std::size_t>();
    t.z = tj.at("z").get<std::size_t>();
    for (const auto& e : tj.at("edges")) {
      auto l = e.at(0).get<std::size_t>(), r = e.at(1).get<std::size_t>();
      if (l >= t.left() || r >= t.z) return false;
      t.edges.emplace_back(l, r);
    }
    auto check = check_template(t);
    if (check.perfect != check.checked) return false;

    const auto xs = ledger.at("X").get<std::vector<Vertex>>();
    const auto ys = ledger.at("Y").get<std::vector<Vertex>>();
    const auto zs = ledger.at("Z").get<std::vector<std::vector<Vertex>>>();
    if (xs.size() != t.x || ys.size() != t.y || zs.size() != t.z) return false;
    Bits used(n);
    auto claim = [&](const std::vector<Vertex>& vs) {
      for (auto v : vs) {
        if (v >= n || used.test(v)) return false;
        used.set(v);
      }
      return true;
    };
    if (!claim(xs) || !claim(ys)) return false;
    for (const auto& z : zs)
      if (z.size() + 1 != f.order() || !claim(z)) return false;
    const auto& abs = ledger.at("absorbers");
    if (abs.size() != t.edges.size()) return false;
    const auto tt = ledger.at("t").get<std::size_t>();
    for (std::size_t i = 0; i < abs.size(); ++i) {
      auto [l, r] = t.edges[i];
      auto s = sorted(with(zs[r], l < t.x ? xs[l] : ys[l - t.x]));
      if (abs[i].at("s").get<std::vector<Vertex>>() != s) return false;
      auto a = abs[i].at("absorber").get<std::vector<Vertex>>();
      if (!claim(a)) return false;
      if (verify_absorber(g, f, s, a, tt) != Verdict::yes) return false;
    }
    return members(used) == ledger.at("A").get<std::vector<Vertex>>();
  } catch (const nlohmann::json::exception&) {
    return false;
  } catch (const InvalidArgument&) {
    return false;
  }
}

// --- merging ----------------------------------------------------------------------------

namespace {

std::vector<Bits> canonical_parts(std::vector<Bits> parts) {
  std::sort(parts.begin(), parts.end(), [](const Bits& a, const Bits& b) { return a.find_first() < b.find_first(); });
  return parts;
}

}  // namespace

MergeResult merge_partition(const Graph& g, const Pattern& f, const VertexPartition& p, std::size_t t,
                            std::size_t strength_threshold, std::uint64_t budget) {
  (void)t;  // reachability scale of the incoming parts; merging itself only uses robust vectors
  if (p.host() != g.id()) throw HostMismatch();
  if (strength_threshold < 1) throw InvalidArgument("strength threshold must be positive");
  auto parts = canonical_parts(p.parts());
  std::vector<MergeEvent> log;
  while (parts.size() > 1) {
    VertexPartition cur(g, parts);
    std::map<IndexVector, std::size_t> realized;
    for_each_copy(g, f, g.all(), [&](const PatternCopy& c) {
      ++realized[index_vector(cur, c.vertices)];
      return true;
    });
    std::map<IndexVector, std::size_t> strength;
    auto robust = [&](const IndexVector& v) {
      auto it = strength.find(v);
      if (it != strength.end()) return it->second;
      auto s = robust_vector_certificate(g, f, cur, v, strength_threshold, budget).strength();
      strength.emplace(v, s);
      return s;
    };
    std::optional<MergeEvent> event;
    for (std::size_t i = 0; i < parts.size() && !event; ++i)
      for (std::size_t j = i + 1; j < parts.size() && !event; ++j)
        for (const auto& [s, count] : realized) {
          if (s[i] == 0 || count < strength_threshold) continue;
          auto tv = s;
          --tv[i];
          ++tv[j];
          auto other = realized.find(tv);
          if (other == realized.end() || other->second < strength_threshold) continue;
          auto ss = robust(s);
          if (ss < strength_threshold) continue;
          auto st = robust(tv);
          if (st < strength_threshold) continue;
          event = MergeEvent{i, j, s, tv, ss, st, parts.size()};
          break;
        }
    if (!event) break;
    parts[event->i] |= parts[event->j];
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(event->j));
    parts = canonical_parts(std::move(parts));
    log.push_back(std::move(*event));
  }
  return {VertexPartition(g, parts), std::move(log)};
}

InitialPartition initial_partition(const Graph& g, const Pattern& f, const Rational& delta, std::size_t t,
                                   std::size_t sample_budget, std::uint64_t seed) {
  const auto n = g.order();
  if (delta < 0) throw InvalidArgument("delta must be nonnegative");
  InitialPartition out{.partition = VertexPartition::trivial(g)};
  out.threshold = std::max<std::size_t>(2, static_cast<std::size_t>(floor_of(delta * static_cast<std::int64_t>(n))));

  std::vector<std::pair<Vertex, Vertex>> pairs;
  const std::size_t total = n * (n - 1) / 2;
  if (total <= sample_budget) {
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  } else {
    Rng rng(seed);
    std::set<std::pair<Vertex, Vertex>> chosen;
    while (chosen.size() < sample_budget) {
      auto u = static_cast<Vertex>(uniform_below(rng, n));
      auto v = static_cast<Vertex>(uniform_below(rng, n));
      if (u == v) continue;
      chosen.emplace(std::min(u, v), std::max(u, v));
    }
    pairs.assign(chosen.begin(), chosen.end());
  }
  out.sampled_pairs = pairs.size();

  // Certificates are independent, so workers fill fixed slots.
  std::vector<std::optional<ReachabilityCertificate>> certs(pairs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < pairs.size();)
      certs[i] = find_disjoint_connectors(g, f, pairs[i].first, pairs[i].second, t, out.threshold);
  };
  const auto workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::vector<Vertex> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (certs[i]->strength() >= out.threshold) parent[find(pairs[i].first)] = find(pairs[i].second);

  std::map<Vertex, Bits> groups;
  for (Vertex v = 0; v < n; ++v) {
    auto& b = groups.try_emplace(find(v), n).first->second;
    b.set(v);
  }
  std::vector<Bits> parts;
  for (auto& [root, b] : groups) parts.push_back(std::move(b));
  out.partition = VertexPartition(g, canonical_parts(std::move(parts)));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (out.partition.part_of(pairs[i].first) != out.partition.part_of(pairs[i].second)) continue;
    if (certs[i]->strength() < out.threshold) ++out.weak_within;
    out.within.push_back(std::move(*certs[i]));
  }
  return out;
}

}  // namespace rtt
