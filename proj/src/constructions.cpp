#include "rtt/constructions.hpp"

#include "rtt/independence.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace rtt {

std::string ConstructionRecord::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics)
    if (k == key) return v;
  return {};
}

namespace {

Rational rational_from_double(double p) {
  constexpr std::int64_t scale = 1'000'000'000;
  return Rational(std::llround(std::clamp(p, 0.0, 1.0) * static_cast<double>(scale)), scale);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

Graph from_alive(const Graph& g, const Bits& alive, std::string label) {
  auto sub = induced(g, alive);
  return sub.graph.with_label(std::move(label));
}

/// Simple cycles of length <= k inside `alive`, counted at each vertex.
std::vector<std::size_t> cycle_counts(const Graph& g, const Bits& alive, std::size_t k) {
  const auto n = g.order();
  std::vector<std::size_t> count(n, 0);
  std::vector<Vertex> path;
  Bits on_path(n);
  // Each cycle is found twice from its smallest vertex, once per direction.
  auto dfs = [&](auto&& self, Vertex s, Vertex v) -> void {
    Bits next = g.neighbors(v) & alive;
    for (auto w = next.find_next(s); w != Bits::npos; w = next.find_next(w)) {
      auto x = static_cast<Vertex>(w);
      if (on_path.test(x) || path.size() >= k) continue;
      path.push_back(x);
      on_path.set(x);
      self(self, s, x);
      on_path.reset(x);
      path.pop_back();
    }
    if (path.size() >= 3 && g.adjacent(v, s))
      for (auto x : path) ++count[x];
  };
  for_each_bit(alive, [&](Vertex s) {
    path = {s};
    on_path.set(s);
    dfs(dfs, s, s);
    on_path.reset(s);
  });
  for (auto& c : count) c /= 2;
  return count;
}

/// Deletes lowest-degree vertices (ties: highest index) until `n` remain.
void trim_to(const Graph& g, Bits& alive, std::size_t n) {
  while (alive.count() > n) {
    Vertex worst = 0;
    std::size_t low = static_cast<std::size_t>(-1);
    for_each_bit(alive, [&](Vertex v) {
      auto d = (g.neighbors(v) & alive).count();
      if (d <= low) {
        low = d;
        worst = v;
      }
    });
    alive.reset(worst);
  }
}

double binomial(double n, double k) {
  if (k < 0 || k > n) return 0;
  return std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1));
}

}  // namespace

std::size_t g0_clique_size(std::size_t n, const Rational& eta) {
  if (eta <= 0 || eta > 1) throw InvalidArgument("g0 needs 0 < eta <= 1");
  auto size = ceil_of(eta * static_cast<std::int64_t>(n));
  if (size < 1) throw InvalidArgument("g0 needs ceil(eta n) >= 1");
  return static_cast<std::size_t>(size);
}

Graph g0(std::size_t n, const Rational& eta) {
  const auto x1 = g0_clique_size(n, eta);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < x1; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph(n, edges, "g0:n=" + std::to_string(n) + ",eta=" + format_rational(eta));
}

Graph disjoint_cliques(const std::vector<std::size_t>& sizes) {
  if (sizes.empty()) throw InvalidArgument("disjoint_cliques needs at least one size");
  std::vector<Edge> edges;
  Vertex base = 0;
  std::string label = "cliques:sizes=";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw InvalidArgument("clique sizes must be positive");
    for (Vertex u = 0; u < sizes[i]; ++u)
      for (Vertex v = u + 1; v < sizes[i]; ++v) edges.emplace_back(base + u, base + v);
    base += static_cast<Vertex>(sizes[i]);
    label += (i ? "+" : "") + std::to_string(sizes[i]);
  }
  return Graph(base, edges, label);
}

Graph gnp(std::size_t n, const Rational& p, Rng& rng) {
  if (p < 0 || p > 1) throw InvalidArgument("edge probability must lie in [0, 1]");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (bernoulli(rng, p)) edges.emplace_back(u, v);
  return Graph(n, edges);
}

Graph perturb(const Graph& g, const Rational& p, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x7e27));
  return graph_union(g, gnp(g.order(), p, rng)).with_label(g.label());
}

Graph random_regular(std::size_t n, std::size_t d, Rng& rng, std::size_t max_tries) {
  if (d >= n) throw InvalidArgument("d-regular graph needs d < n");
  if ((n * d) % 2 != 0) throw InvalidArgument("d-regular graph needs n d even");
  std::vector<Vertex> points(n * d);
  for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<Vertex>(i / d);
  for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
    shuffle_in_place(points, rng);
    std::vector<Bits> rows(n, Bits(n));
    bool ok = true;
    for (std::size_t i = 0; i < points.size() && ok; i += 2) {
      auto u = points[i], v = points[i + 1];
      if (u == v || rows[u].test(v)) {
        ok = false;
      } else {
        rows[u].set(v);
        rows[v].set(u);
      }
    }
    if (ok) return Graph::from_rows(std::move(rows));
  }
  throw Error("random_regular: no simple pairing after " + std::to_string(max_tries) + " tries");
}

std::vector<std::size_t> short_cycle_counts(const Graph& g, std::size_t k) {
  return cycle_counts(g, g.all(), k);
}

// --- high girth, no large bipartite hole -------------------------------------

Generated high_girth_bihole_free(std::size_t n, std::size_t k, const Rational& alpha,
                                 std::uint64_t seed, std::uint64_t budget) {
  if (n < 10) throw InvalidArgument("high_girth_bihole_free needs n >= 10");
  if (k < 3) throw InvalidArgument("high_girth_bihole_free needs k >= 3");
  if (alpha <= 0 || alpha > 1) throw InvalidArgument("alpha must lie in (0, 1]");
  const std::size_t big = 2 * n;
  const auto cap = std::max<double>(std::ceil(8.0 / (to_double(alpha) * to_double(alpha))), 3.0 * k);
  // Largest c <= cap whose expected count of cycles up to length k in G(2n, c/n) is at most n/2.
  auto expected = [&](double c) {
    double total = 0;
    for (std::size_t l = 3; l <= k; ++l) total += std::pow(2 * c, static_cast<double>(l)) / (2.0 * l);
    return total;
  };
  double lo = 0, hi = cap;
  for (int i = 0; i < 60; ++i) {
    double mid = (lo + hi) / 2;
    (expected(mid) <= n / 2.0 ? lo : hi) = mid;
  }
  const double c = lo;
  const auto p = rational_from_double(c / static_cast<double>(n));
  const auto hole = static_cast<std::size_t>(ceil_of(alpha * static_cast<std::int64_t>(n)));

  const std::string params = "n=" + std::to_string(n) + ",k=" + std::to_string(k) +
                             ",alpha=" + format_rational(alpha);
  std::optional<ConstructionRecord> closest;
  std::optional<Graph> closest_graph;
  constexpr std::size_t retries = 50;
  for (std::size_t attempt = 1; attempt <= retries; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    auto sample = gnp(big, p, rng);
    Bits alive = sample.all();
    std::size_t deleted = 0;
    while (true) {
      auto counts = cycle_counts(sample, alive, k);
      auto it = std::max_element(counts.begin(), counts.end());
      if (*it == 0) break;
      alive.reset(static_cast<std::size_t>(it - counts.begin()));
      ++deleted;
    }
    ConstructionRecord rec;
    rec.name = "high_girth_bihole_free";
    rec.parameters = params;
    rec.seed = seed;
    rec.attempts = attempt;
    rec.add("c", fmt(c));
    rec.add("cycle_deletions", std::to_string(deleted));
    if (alive.count() < n) {
      rec.verified = false;
      rec.add("failure", "fewer than n vertices survive");
      if (!closest) closest = rec;
      continue;
    }
    trim_to(sample, alive, n);
    auto g = from_alive(sample, alive, "girth:" + params + ",seed=" + std::to_string(seed));
    auto gi = girth(g);
    if (gi && *gi <= k) throw Error("internal: short cycle survived deletion");
    rec.add("girth", gi ? std::to_string(*gi) : "acyclic");
    rec.add("min_degree", std::to_string(min_degree(g)));
    auto check = has_partite_hole(g, 2, hole, budget);
    rec.add("hole_size_tested", std::to_string(hole));
    rec.add("hole_verdict", std::string(to_string(check.verdict)));
    if (check.verdict == Verdict::no) {
      auto a = alpha_star_r(g, 2, budget);
      rec.add("alpha_star", std::to_string(a.value));
      rec.add("alpha_star_exact", a.exact ? "true" : "false");
      return {std::move(g), std::move(rec)};
    }
    rec.verified = false;
    // Among failures prefer an undecided hole test over a witnessed hole.
    if (!closest_graph || (check.verdict == Verdict::unknown && closest->metric("hole_verdict") == "yes")) {
      closest = rec;
      closest_graph = std::move(g);
    }
  }
  if (closest_graph) {
    auto a = alpha_star_r(*closest_graph, 2, budget);
    closest->add("alpha_star", std::to_string(a.value));
    closest->add("alpha_star_exact", a.exact ? "true" : "false");
    closest->add("alpha_star_upper", std::to_string(a.upper_bound));
  }
  throw GenerationFailure("high_girth_bihole_free: retries exhausted", closest.value_or(ConstructionRecord{}));
}

// --- K_{r+1}-free with small alpha_r -------------------------------------------

Generated clique_free_low_alpha(std::size_t n, std::size_t r, const Rational& alpha,
                                std::uint64_t seed, std::uint64_t budget,
                                std::optional<double> leading) {
  if (r < 2) throw InvalidArgument("clique_free_low_alpha needs r >= 2");
  if (n < 1) throw InvalidArgument("clique_free_low_alpha needs n >= 1");
  if (alpha <= 0) throw InvalidArgument("alpha must be positive");
  const bool degenerate = r >= n;
  const std::size_t big = degenerate ? n : 2 * n;
  const double x = (2.0 / (r + 1) + 2.0 / r) / 2;
  const double pairs = static_cast<double>((r + 1) * r / 2);
  double c;
  if (leading) {
    c = *leading;
  } else {
    // Expected K_{r+1} count in G(2n, c N^-x) equals n/2.
    const double base = binomial(static_cast<double>(big), static_cast<double>(r + 1)) *
                        std::pow(static_cast<double>(big), -x * pairs);
    c = degenerate ? 1.0 : std::pow((n / 2.0) / base, 1.0 / pairs);
  }
  const auto p = rational_from_double(c * std::pow(static_cast<double>(big), -x));
  const bool constrained = alpha < 1;
  const auto limit = constrained ? static_cast<std::size_t>(ceil_of(alpha * static_cast<std::int64_t>(n))) : n + 1;

  const std::string params = "n=" + std::to_string(n) + ",r=" + std::to_string(r) +
                             ",alpha=" + format_rational(alpha);
  std::optional<ConstructionRecord> closest;
  std::size_t closest_alpha = static_cast<std::size_t>(-1);
  constexpr std::size_t retries = 50;
  for (std::size_t attempt = 1; attempt <= retries; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    auto sample = gnp(big, p, rng);
    Bits alive = sample.all();
    std::size_t deleted = 0;
    if (!degenerate) {
      while (auto q = find_clique(sample, alive, r + 1)) {
        auto victim = *std::max_element(q->begin(), q->end(), [&](Vertex a, Vertex b) {
          return (sample.neighbors(a) & alive).count() < (sample.neighbors(b) & alive).count();
        });
        alive.reset(victim);
        ++deleted;
      }
    }
    ConstructionRecord rec;
    rec.name = "clique_free_low_alpha";
    rec.parameters = params;
    rec.seed = seed;
    rec.attempts = attempt;
    rec.add("p", fmt(to_double(p)));
    rec.add("clique_deletions", std::to_string(deleted));
    if (alive.count() < n) {
      rec.verified = false;
      rec.add("failure", "fewer than n vertices survive");
      if (!closest) closest = rec;
      continue;
    }
    trim_to(sample, alive, n);
    auto g = from_alive(sample, alive, "cliquefree:" + params + ",seed=" + std::to_string(seed));
    auto omega = max_clique(g, g.all(), budget);
    if (!omega.exact) throw ResourceError("clique_free_low_alpha: omega not certified", omega.value, omega.upper_bound);
    if (!degenerate && omega.value > r) throw Error("internal: K_{r+1} survived deletion");
    rec.add("omega", std::to_string(omega.value));
    rec.add("min_degree", std::to_string(min_degree(g)));
    auto a = alpha_r(g, r, budget);
    rec.add("alpha_r", std::to_string(a.value));
    rec.add("alpha_r_exact", a.exact ? "true" : "false");
    if (!constrained || a.value < limit) {
      rec.verified = !constrained || a.exact;
      return {std::move(g), std::move(rec)};
    }
    rec.verified = false;
    if (a.value < closest_alpha) {
      closest_alpha = a.value;
      closest = rec;
    }
  }
  throw GenerationFailure("clique_free_low_alpha: retries exhausted", closest.value_or(ConstructionRecord{}));
}

// --- triangle-factor blocker ---------------------------------------------------

BlockerStructure triangle_factor_blocker(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || n % 3 != 0) throw InvalidArgument("blocker needs n divisible by 3");
  if (d < 4 || d % 2 != 0) throw InvalidArgument("blocker needs even d >= 4");
  std::size_t n0 = (n + 1) / 2 + 1;
  bool parity_adjusted = false;
  if ((d * n0) % 2 != 0) {
    ++n0;
    parity_adjusted = true;
  }
  if (d >= n0) throw InvalidArgument("blocker needs d < ceil(n/2) + 1");

  BlockerStructure out;
  out.n0 = n0;
  Rng rng(derive_seed(seed, 0xb10c));
  out.g0 = random_regular(n0, d, rng);

  // V1 = 0..n0-1, V2 = n0..2n0-1; within a side, u and w stay apart iff they
  // share a G0 neighbour.
  const auto total = 2 * n0;
  std::vector<Bits> rows(total, Bits(total));
  for (Vertex u = 0; u < n0; ++u) {
    for (Vertex w = 0; w < n0; ++w) {
      if (out.g0.adjacent(u, w)) {
        rows[u].set(n0 + w);
        rows[n0 + w].set(u);
      }
      if (u != w && (out.g0.neighbors(u) & out.g0.neighbors(w)).none()) {
        rows[u].set(w);
        rows[n0 + u].set(n0 + w);
      }
    }
  }
  auto full = Graph::from_rows(std::move(rows));

  // 2 n0 exceeds n by the number of deletions: two from V1, plus one from V2
  // when n is odd so the sides stay incongruent mod 3.
  const auto excess = total - n;
  const std::size_t from_v1 = std::min<std::size_t>(excess, 2);
  const std::size_t from_v2 = excess - from_v1;
  Bits keep = full.all();
  for (std::size_t i = 0; i < from_v1; ++i) keep.reset(n0 - 1 - i);
  for (std::size_t i = 0; i < from_v2; ++i) keep.reset(total - 1 - i);
  const std::size_t v1_size = n0 - from_v1;

  const std::string params = "n=" + std::to_string(n) + ",d=" + std::to_string(d);
  out.graph = induced(full, keep).graph.with_label("blocker:" + params + ",seed=" + std::to_string(seed));
  out.v1 = out.graph.none();
  out.v2 = out.graph.none();
  for (Vertex v = 0; v < n; ++v) (v < v1_size ? out.v1 : out.v2).set(v);

  std::size_t crossing = 0;
  for_each_bit(out.v1, [&](Vertex u) {
    Bits across = out.graph.neighbors(u) & out.v2;
    for_each_bit(across, [&](Vertex v) {
      crossing += (out.graph.neighbors(u) & out.graph.neighbors(v)).count();
    });
  });
  out.cross_triangle_free = crossing == 0;
  out.min_degree = min_degree(out.graph);
  out.spectrum = second_eigenvalue(out.g0);

  auto& rec = out.record;
  rec.name = "triangle_factor_blocker";
  rec.parameters = params;
  rec.seed = seed;
  rec.add("n0", std::to_string(n0));
  rec.add("n0_parity_adjusted", parity_adjusted ? "true" : "false");
  rec.add("deleted_v1", std::to_string(from_v1));
  rec.add("deleted_v2", std::to_string(from_v2));
  rec.add("v1", std::to_string(out.v1.count()));
  rec.add("v2", std::to_string(out.v2.count()));
  rec.add("v1_mod3", std::to_string(out.v1.count() % 3));
  rec.add("v2_mod3", std::to_string(out.v2.count() % 3));
  rec.add("cross_triangles", std::to_string(crossing));
  rec.add("min_degree", std::to_string(out.min_degree));
  rec.add("g0_lambda", fmt(out.spectrum.lambda));
  rec.verified = out.cross_triangle_free && out.v1.count() % 3 != out.v2.count() % 3;
  return out;
}

// --- spectra -------------------------------------------------------------------

std::vector<double> adjacency_spectrum(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : g.edges()) a(u, v) = a(v, u) = 1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

namespace {

struct PowerResult {
  double value = 0;
  double residual = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Dominant eigenvalue of (shift I + sign A) restricted to the complement of
/// the all-ones vector.
PowerResult power_on_complement(const Graph& g, double shift, double sign, double tol,
                                std::size_t cap, std::uint64_t seed) {
  const auto n = g.order();
  std::vector<std::vector<Vertex>> adj(n);
  for (auto [u, v] : g.edges()) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  auto apply = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = shift * x;
    for (std::size_t u = 0; u < n; ++u)
      for (auto v : adj[u]) y[static_cast<Eigen::Index>(u)] += sign * x[v];
    return y;
  };
  auto deflate = [](Eigen::VectorXd& x) { x.array() -= x.mean(); };

  Rng rng(seed);
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x[i] = static_cast<double>(uniform_below(rng, 1u << 20)) / (1u << 20) - 0.5;
  deflate(x);
  PowerResult out;
  if (x.norm() == 0) return out;
  x.normalize();
  for (out.iterations = 1; out.iterations <= cap; ++out.iterations) {
    Eigen::VectorXd y = apply(x);
    deflate(y);
    out.value = x.dot(y);
    out.residual = (y - out.value * x).norm();
    if (out.residual <= tol * std::max(1.0, std::abs(out.value))) {
      out.converged = true;
      break;
    }
    const double norm = y.norm();
    if (norm == 0) {
      out.converged = true;
      break;
    }
    x = y / norm;
  }
  out.iterations = std::min(out.iterations, cap);
  return out;
}

}  // namespace

SpectralReport second_eigenvalue(const Graph& g, double tolerance, std::size_t max_iterations) {
  SpectralReport out;
  const auto n = g.order();
  if (n == 0) throw InvalidArgument("second_eigenvalue needs a non-empty graph");
  std::size_t d0 = g.degree(0);
  bool regular = true;
  for (Vertex v = 0; v < n; ++v) regular = regular && g.degree(v) == d0;

  auto dense = [&] {
    auto ev = adjacency_spectrum(g);
    out.method = "dense";
    out.lambda_n = ev.front();
    out.lambda2 = ev.size() > 1 ? ev[ev.size() - 2] : ev.back();
    out.lambda = regular ? std::max(std::abs(out.lambda2), std::abs(out.lambda_n))
                         : std::max(std::abs(ev.back()), std::abs(ev.front()));
    out.residual = 0;
    out.converged = true;
  };

  if (!regular) {
    // Irregular input: report the spectral radius, flagged by the missing d.
    if (n > 64) throw InvalidArgument("second_eigenvalue: irregular inputs limited to n <= 64");
    dense();
    return out;
  }
  out.d = d0;
  if (n == 1) {
    out.method = "power";
    out.converged = true;
    return out;
  }
  const double d = static_cast<double>(d0);
  // Spectrum of A on 1-perp lies in [-d, d]; shifting by d makes it nonnegative.
  auto top = power_on_complement(g, d, 1.0, tolerance, max_iterations, derive_seed(n, 1));
  auto bottom = power_on_complement(g, d, -1.0, tolerance, max_iterations, derive_seed(n, 2));
  out.lambda2 = top.value - d;
  out.lambda_n = d - bottom.value;
  out.lambda = std::max(std::abs(out.lambda2), std::abs(out.lambda_n));
  out.iterations = top.iterations + bottom.iterations;
  out.residual = std::max(top.residual, bottom.residual);
  out.converged = top.converged && bottom.converged;
  out.method = "power";
  if (!out.converged && n <= 64) {
    auto iterations = out.iterations;
    dense();
    out.iterations = iterations;
  }
  return out;
}

MixingReport expander_mixing_check(const Graph& g, double lambda, std::uint64_t trials,
                                   std::uint64_t seed) {
  const auto n = g.order();
  if (n == 0) throw InvalidArgument("expander_mixing_check needs a non-empty graph");
  const auto d = static_cast<double>(g.degree(0));
  for (Vertex v = 0; v < n; ++v)
    if (g.degree(v) != g.degree(0)) throw InvalidArgument("expander_mixing_check needs a regular graph");
  MixingReport out;
  out.worst_slack = std::numeric_limits<double>::infinity();
  constexpr double eps = 1e-9;
  auto consider = [&](std::int64_t e, std::size_t a, std::size_t b, auto&& describe) {
    ++out.pairs;
    const double ab = static_cast<double>(a) * static_cast<double>(b);
    const double slack = lambda * std::sqrt(ab) - std::abs(static_cast<double>(e) - d * ab / n);
    // Empty sets are tight by definition and would mask the informative minimum.
    if (ab > 0 && slack < out.worst_slack) {
      out.worst_slack = slack;
      describe();
    }
    if (slack < -eps) out.pass = false;
  };

  if (n <= 14) {
    out.exhaustive = true;
    std::vector<std::uint32_t> mask(n, 0);
    for (Vertex v = 0; v < n; ++v)
      for_each_bit(g.neighbors(v), [&](Vertex w) { mask[v] |= 1u << w; });
    const std::uint32_t full = 1u << n;
    for (std::uint32_t a = 0; a < full; ++a) {
      // deg_a[v] = |N(v) ∩ A|; e(A,B) = sum over v in B.
      std::vector<std::int64_t> into(n);
      for (Vertex v = 0; v < n; ++v) into[v] = std::popcount(mask[v] & a);
      const auto sa = static_cast<std::size_t>(std::popcount(a));
      std::uint32_t b = 0;
      std::int64_t e = 0;
      std::size_t sb = 0;
      // Gray-code walk over B.
      for (std::uint32_t i = 0; i < full; ++i) {
        if (i > 0) {
          const auto flip = static_cast<Vertex>(std::countr_zero(i));
          b ^= 1u << flip;
          if (b >> flip & 1u) {
            e += into[flip];
            ++sb;
          } else {
            e -= into[flip];
            --sb;
          }
        }
        consider(e, sa, sb, [&] {
          out.worst_a.clear();
          out.worst_b.clear();
          for (Vertex v = 0; v < n; ++v) {
            if (a >> v & 1u) out.worst_a.push_back(v);
            if (b >> v & 1u) out.worst_b.push_back(v);
          }
        });
      }
    }
    return out;
  }

  Rng rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    // Random sizes first, so small and large sets are equally represented.
    auto pick = [&] {
      std::vector<Vertex> all(n);
      std::iota(all.begin(), all.end(), 0);
      shuffle_in_place(all, rng);
      all.resize(uniform_below(rng, n + 1));
      std::sort(all.begin(), all.end());
      return all;
    };
    auto a = pick(), b = pick();
    auto e = static_cast<std::int64_t>(edges_between(g, bits_of(n, a), bits_of(n, b)));
    consider(e, a.size(), b.size(), [&] {
      out.worst_a = a;
      out.worst_b = b;
    });
  }
  return out;
}

// --- spec literals -------------------------------------------------------------

namespace {

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> table{
      {"g0", "g0"},
      {"cliques", "disjoint_cliques"},
      {"disjoint_cliques", "disjoint_cliques"},
      {"girth", "high_girth_bihole_free"},
      {"high_girth_bihole_free", "high_girth_bihole_free"},
      {"cliquefree", "clique_free_low_alpha"},
      {"clique_free_low_alpha", "clique_free_low_alpha"},
      {"blocker", "triangle_factor_blocker"},
      {"triangle_factor_blocker", "triangle_factor_blocker"},
      {"perturb", "perturbed_union"},
      {"perturbed_union", "perturbed_union"},
  };
  return table;
}

const std::map<std::string, std::vector<std::string>>& allowed_keys() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"g0", {"n", "eta"}},
      {"disjoint_cliques", {"sizes"}},
      {"high_girth_bihole_free", {"n", "k", "alpha", "seed"}},
      {"clique_free_low_alpha", {"n", "r", "alpha", "seed", "c"}},
      {"triangle_factor_blocker", {"n", "d", "seed"}},
      {"perturbed_union", {"p", "seed"}},
  };
  return table;
}

struct Params {
  const ConstructionSpec::Component& c;

  const std::string& raw(const std::string& key) const {
    auto it = c.params.find(key);
    if (it == c.params.end()) throw InvalidArgument(c.name + ": missing parameter '" + key + "'");
    return it->second;
  }
  std::uint64_t integer(const std::string& key) const {
    const auto& s = raw(key);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-')
      throw InvalidArgument(c.name + ": '" + key + "' must be a non-negative integer");
    return v;
  }
  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    return c.params.count(key) ? integer(key) : fallback;
  }
  Rational rational(const std::string& key) const { return parse_rational(raw(key)); }
  Rational rational(const std::string& key, Rational fallback) const {
    return c.params.count(key) ? rational(key) : fallback;
  }
};

}  // namespace

ConstructionSpec ConstructionSpec::parse(const std::string& text) {
  ConstructionSpec spec;
  spec.text = text;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto bar = text.find('|', pos);
    if (bar == std::string::npos) bar = text.size();
    const auto part = text.substr(pos, bar - pos);
    auto colon = part.find(':');
    Component comp;
    comp.name = part.substr(0, colon);
    auto alias = aliases().find(comp.name);
    if (alias == aliases().end()) throw ParseError("unknown construction '" + comp.name + "'", pos);
    comp.name = alias->second;
    if (colon != std::string::npos) {
      std::size_t at = colon + 1;
      while (at <= part.size()) {
        auto comma = part.find(',', at);
        if (comma == std::string::npos) comma = part.size();
        auto item = part.substr(at, comma - at);
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value", pos + at);
        auto key = item.substr(0, eq);
        const auto& keys = allowed_keys().at(comp.name);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
          throw ParseError("unknown parameter '" + key + "' for " + comp.name, pos + at);
        if (!comp.params.emplace(key, item.substr(eq + 1)).second)
          throw ParseError("repeated parameter '" + key + "'", pos + at);
        at = comma + 1;
      }
    }
    if (comp.name == "perturbed_union" && spec.components.empty())
      throw ParseError("perturbed_union needs a preceding construction", pos);
    spec.components.push_back(std::move(comp));
    pos = bar + 1;
  }
  return spec;
}

GeneratedSpec generate(const ConstructionSpec& spec, std::uint64_t budget) {
  GeneratedSpec out;
  bool have = false;
  for (const auto& comp : spec.components) {
    Params p{comp};
    Graph g;
    ConstructionRecord rec;
    rec.name = comp.name;
    for (const auto& [k, v] : comp.params) rec.parameters += (rec.parameters.empty() ? "" : ",") + k + "=" + v;
    if (comp.name == "g0") {
      g = g0(p.integer("n"), p.rational("eta"));
    } else if (comp.name == "disjoint_cliques") {
      std::vector<std::size_t> sizes;
      std::stringstream ss(p.raw("sizes"));
      std::string item;
      while (std::getline(ss, item, '+')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
          throw InvalidArgument("disjoint_cliques: sizes must look like 8+8");
        sizes.push_back(std::stoull(item));
      }
      g = disjoint_cliques(sizes);
    } else if (comp.name == "high_girth_bihole_free") {
      auto made = high_girth_bihole_free(p.integer("n"), p.integer("k"), p.rational("alpha"),
                                         p.integer("seed", 0), budget);
      g = std::move(made.graph);
      rec = std::move(made.record);
    } else if (comp.name == "clique_free_low_alpha") {
      std::optional<double> leading;
      if (comp.params.count("c")) leading = to_double(p.rational("c"));
      auto made = clique_free_low_alpha(p.integer("n"), p.integer("r"), p.rational("alpha", 1),
                                        p.integer("seed", 0), budget, leading);
      g = std::move(made.graph);
      rec = std::move(made.record);
    } else if (comp.name == "triangle_factor_blocker") {
      auto made = triangle_factor_blocker(p.integer("n"), p.integer("d"), p.integer("seed", 0));
      g = made.graph;
      rec = made.record;
      out.blocker = std::move(made);
    } else if (comp.name == "perturbed_union") {
      auto prob = p.rational("p");
      if (prob < 0 || prob > 1) throw InvalidArgument("perturbed_union: p must lie in [0, 1]");
      out.graph = perturb(out.graph, prob, p.integer("seed", 0));
      out.records.push_back(std::move(rec));
      continue;
    }
    if (!have) {
      out.graph = std::move(g);
      have = true;
    } else {
      if (g.order() != out.graph.order())
        throw InvalidArgument("components joined by '|' must have the same order");
      out.graph = graph_union(out.graph, g);
    }
    out.records.push_back(std::move(rec));
  }
  out.graph = out.graph.with_label(spec.text);
  return out;
}

}  // namespace rtt
