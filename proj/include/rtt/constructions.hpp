#pragma once

#include "rtt/graph.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rtt {

/// What a generator did: parameters echoed, attempts used and the measured
/// properties it verified.
struct ConstructionRecord {
  std::string name;
  std::string parameters;
  std::uint64_t seed = 0;
  std::size_t attempts = 1;
  bool verified = true;
  std::vector<std::pair<std::string, std::string>> metrics;

  void add(std::string key, std::string value) { metrics.emplace_back(std::move(key), std::move(value)); }
  std::string metric(const std::string& key) const;
};

class GenerationFailure : public Error {
public:
  GenerationFailure(const std::string& what, ConstructionRecord closest)
      : Error(what), closest(std::move(closest)) {}
  ConstructionRecord closest;
};

struct SpectralReport {
  /// Regularity degree, or nullopt for irregular inputs.
  std::optional<std::size_t> d;
  double lambda = 0;  ///< max(|λ2|, |λn|); spectral radius bound when irregular
  double lambda2 = 0;
  double lambda_n = 0;
  std::size_t iterations = 0;
  double residual = 0;
  bool converged = false;
  /// "power" or "dense".
  std::string method;
};

struct MixingReport {
  bool pass = true;
  double worst_slack = 0;
  std::uint64_t pairs = 0;
  bool exhaustive = false;
  std::vector<Vertex> worst_a, worst_b;
};

struct Generated {
  Graph graph;
  ConstructionRecord record;
};

struct BlockerStructure {
  Graph graph;
  ConstructionRecord record;
  Graph g0;  ///< the d-regular base graph
  Bits v1, v2;
  std::size_t n0 = 0;
  bool cross_triangle_free = false;
  std::size_t min_degree = 0;
  SpectralReport spectrum;
};

std::size_t g0_clique_size(std::size_t n, const Rational& eta);
/// X1 = first ceil(eta n) vertices as a clique, complete to the independent rest.
Graph g0(std::size_t n, const Rational& eta);
Graph disjoint_cliques(const std::vector<std::size_t>& sizes);
/// Union of g with an independent G(n, p).
Graph perturb(const Graph& g, const Rational& p, std::uint64_t seed);
Graph gnp(std::size_t n, const Rational& p, Rng& rng);
/// Uniform d-regular graph by the pairing model, resampling on loops and
/// repeated pairs.
Graph random_regular(std::size_t n, std::size_t d, Rng& rng, std::size_t max_tries = 100'000);

/// Sparse random graph with every cycle of length <= k destroyed, trimmed to n
/// vertices, then checked for girth > k and no bipartite hole of size ceil(alpha n).
Generated high_girth_bihole_free(std::size_t n, std::size_t k, const Rational& alpha,
                                 std::uint64_t seed, std::uint64_t budget = default_node_budget);

/// Random graph at density N^{-x}, 2/(r+1) < x < 2/r, with every K_{r+1}
/// destroyed; checked for omega <= r and alpha_r < alpha n (alpha >= 1 skips
/// the second check). `leading` overrides the leading constant of p.
Generated clique_free_low_alpha(std::size_t n, std::size_t r, const Rational& alpha,
                                std::uint64_t seed, std::uint64_t budget = default_node_budget,
                                std::optional<double> leading = std::nullopt);

/// Two cliques-minus-neighbourhoods over a bipartite double cover of a random
/// d-regular graph, with no triangle meeting both sides and side sizes
/// incongruent mod 3.
BlockerStructure triangle_factor_blocker(std::size_t n, std::size_t d, std::uint64_t seed);

/// Cycles of length <= k through each vertex.
std::vector<std::size_t> short_cycle_counts(const Graph& g, std::size_t k);

SpectralReport second_eigenvalue(const Graph& g, double tolerance = 1e-9,
                                 std::size_t max_iterations = 100'000);
/// Dense symmetric eigensolve of the adjacency matrix, ascending.
std::vector<double> adjacency_spectrum(const Graph& g);

/// Checks |e(A,B) - d|A||B|/n| <= lambda sqrt(|A||B|): every pair when
/// n <= 14, otherwise `trials` random pairs.
MixingReport expander_mixing_check(const Graph& g, double lambda, std::uint64_t trials,
                                   std::uint64_t seed);

// --- construction spec literals ----------------------------------------------

/// `g0:n=10,eta=3/10`, `blocker:n=24,d=4,seed=1`, `cliques:sizes=8+8`,
/// `girth:n=60,k=5,alpha=3/10,seed=7`, `cliquefree:n=60,r=2,alpha=1,seed=3`;
/// components joined by `|` are unioned on a shared vertex set, and
/// `perturbed_union:p=1/10,seed=5` unions a random graph into what precedes it.
struct ConstructionSpec {
  struct Component {
    std::string name;
    std::map<std::string, std::string> params;
  };
  std::vector<Component> components;
  std::string text;

  static ConstructionSpec parse(const std::string& text);
};

struct GeneratedSpec {
  Graph graph;
  std::vector<ConstructionRecord> records;
  std::optional<BlockerStructure> blocker;
};

GeneratedSpec generate(const ConstructionSpec& spec, std::uint64_t budget = default_node_budget);

}  // namespace rtt
